//! Fixed and periodic points, Lefschetz numbers, torsion orbit graphs, and
//! orbits of subtori.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::endo::{fixed_subtorus, unity_free, TorusEndomorphism};
use crate::error::{Error, Result};
use crate::exactnum::scalar::{frac_mod1, ser};
use crate::matlin::{integer_kernel, smith_form, span_saturation, IntMatrix, Sublattice};
use crate::torus::Subtorus;

/// `det(I - M)`.
pub fn lefschetz_number(f: &TorusEndomorphism) -> BigInt {
    let d = f.torus().rank();
    (&IntMatrix::identity(d) - f.matrix()).det_int().expect("square")
}

/// Enumeration cap for explicit fixed-point lists.
pub const FIXED_POINT_LIST_LIMIT: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FixedPointSet {
    /// Exactly `count = |det(M - I)|` fixed points; `points` lists them in
    /// `[0,1)` coordinates, lexicographically sorted, unless there are more
    /// than [`FIXED_POINT_LIST_LIMIT`].
    Finite {
        #[serde(serialize_with = "ser_big")]
        count: BigInt,
        #[serde(serialize_with = "ser::rational_vecs")]
        points: Vec<Vec<BigRational>>,
        complete: bool,
    },
    /// Translates of a fixed subtorus by a finite transversal.
    CosetFamily {
        subtorus: Sublattice,
        #[serde(serialize_with = "ser::rational_vecs")]
        transversal: Vec<Vec<BigRational>>,
        #[serde(serialize_with = "ser_big")]
        components: BigInt,
        complete: bool,
    },
    Empty,
}

fn ser_big<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl FixedPointSet {
    pub fn is_finite(&self) -> bool {
        !matches!(self, FixedPointSet::CosetFamily { .. })
    }

    /// Number of fixed points, `None` when infinite.
    pub fn count(&self) -> Option<BigInt> {
        match self {
            FixedPointSet::Finite { count, .. } => Some(count.clone()),
            FixedPointSet::CosetFamily { .. } => None,
            FixedPointSet::Empty => Some(BigInt::zero()),
        }
    }
}

/// Whether `M x + τ ≡ x (mod 1)`.
pub fn is_fixed(f: &TorusEndomorphism, x: &[BigRational]) -> bool {
    let mx = f.matrix().to_rational().mul_vec(x);
    mx.iter().zip(f.tau()).zip(x).all(|((a, t), b)| frac_mod1(&(a + t - b)).is_zero())
}

/// The decoupled system `d_i y_i ≡ c_i (mod 1)` behind [`fixed_points`].
struct FixedPointSystem {
    sm: crate::matlin::SmithDecomposition,
    c: Vec<BigRational>,
    /// Number of nonzero invariant factors.
    r: usize,
    /// Product of the nonzero invariant factors: the number of fixed points,
    /// or of fixed components when `r < d`.
    total: BigInt,
}

impl FixedPointSystem {
    /// `None` when the system has no solution.
    fn solve(f: &TorusEndomorphism) -> Option<Self> {
        let d = f.torus().rank();
        let sm = smith_form(&(f.matrix() - &IntMatrix::identity(d)));
        let c: Vec<BigRational> = sm.u.to_rational().mul_vec(f.tau()).iter().map(|x| frac_mod1(&-x)).collect();
        let r = sm.rank();
        if (r..d).any(|i| !c[i].is_zero()) {
            return None;
        }
        let total = sm.invariant_factors()[..r].iter().product();
        Some(FixedPointSystem { sm, c, r, total })
    }
}

/// Solves `(M - I) x ≡ -τ (mod 1)` through the Smith form `U (M - I) V = D`:
/// with `x = V y` and `c = -U τ` the system decouples into `d_i y_i ≡ c_i`.
pub fn fixed_points(f: &TorusEndomorphism) -> FixedPointSet {
    let d = f.torus().rank();
    let a = f.matrix() - &IntMatrix::identity(d);
    let Some(system) = FixedPointSystem::solve(f) else {
        return FixedPointSet::Empty;
    };
    let FixedPointSystem { sm, c, r, total } = system;
    let factors = sm.invariant_factors();
    let complete = total <= BigInt::from(FIXED_POINT_LIST_LIMIT);
    let mut points = Vec::new();
    if complete {
        let vr = sm.v.to_rational();
        let radices: Vec<usize> = factors[..r].iter().map(|x| x.to_usize().expect("small")).collect();
        let count: usize = radices.iter().product();
        for idx in 0..count {
            let mut rem = idx;
            let mut y = vec![BigRational::zero(); d];
            for i in 0..r {
                let k = rem % radices[i];
                rem /= radices[i];
                let di = BigRational::from_integer(factors[i].clone());
                y[i] = (&c[i] + BigRational::from_integer(k.into())) / di;
            }
            let x: Vec<BigRational> = vr.mul_vec(&y).iter().map(frac_mod1).collect();
            debug_assert!(is_fixed(f, &x));
            points.push(x);
        }
        points.sort();
    }
    if r == d {
        FixedPointSet::Finite { count: total, points, complete }
    } else {
        FixedPointSet::CosetFamily { subtorus: integer_kernel(&a), transversal: points, components: total, complete }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PeriodicCount {
    Finite(#[serde(serialize_with = "ser_big")] BigInt),
    Infinite,
}

/// Points with `f^k(x) = x`.
pub fn periodic_count(f: &TorusEndomorphism, k: u64) -> Result<PeriodicCount> {
    f.require_surjective()?;
    let g = f.iterate(k)?;
    Ok(match FixedPointSystem::solve(&g) {
        None => PeriodicCount::Finite(BigInt::zero()),
        Some(s) if s.r < g.torus().rank() => PeriodicCount::Infinite,
        Some(s) => PeriodicCount::Finite(s.total),
    })
}

pub const DEFAULT_TORSION_BUDGET: u64 = 1_000_000;
pub const NODE_TABLE_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NodeInfo {
    pub period: u64,
    pub tail: u64,
}

/// The functional graph of `f` on the `m`-torsion points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorsionOrbitGraph {
    pub level: u64,
    pub node_count: u64,
    /// Cycle length ↦ number of cycles of that length.
    pub cycle_histogram: BTreeMap<u64, u64>,
    /// Tail length ↦ number of nodes at that distance from their cycle.
    pub tail_histogram: BTreeMap<u64, u64>,
    pub periodic_nodes: u64,
    pub fixed_nodes: u64,
    /// Per-node data in mixed-radix order, present for small levels.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<NodeInfo>>,
}

impl TorsionOrbitGraph {
    /// Number of periodic nodes whose period divides `k`.
    pub fn period_dividing(&self, k: u64) -> u64 {
        self.cycle_histogram.iter().filter(|(l, _)| k.is_multiple_of(**l)).map(|(l, c)| l * c).sum()
    }
}

/// Checks the budget and the level before any work.
pub fn check_torsion_level(rank: usize, m: &BigInt, budget: u64) -> Result<u64> {
    if !m.is_positive() {
        return Err(Error::domain("torsion level must be positive"));
    }
    let nodes = m.pow(rank as u32);
    if nodes > BigInt::from(budget) {
        return Err(Error::Resource(format!("level {m} gives {nodes} torsion points, budget is {budget}")));
    }
    Ok(nodes.to_u64().expect("within budget"))
}

pub fn torsion_dynamics(f: &TorusEndomorphism, m: u64, budget: u64) -> Result<TorsionOrbitGraph> {
    let d = f.torus().rank();
    let node_count = check_torsion_level(d, &BigInt::from(m), budget)?;
    let mb = BigInt::from(m);
    let shift: Vec<BigInt> = f
        .tau()
        .iter()
        .map(|t| {
            let s = t * BigRational::from_integer(mb.clone());
            if s.is_integer() {
                Ok(s.to_integer().mod_floor(&mb))
            } else {
                Err(Error::domain(format!("translation denominator does not divide level {m}")))
            }
        })
        .collect::<Result<_>>()?;
    let mm: Vec<Vec<u64>> = f
        .matrix()
        .to_rows()
        .iter()
        .map(|row| row.iter().map(|x| x.mod_floor(&mb).to_u64().expect("reduced")).collect())
        .collect();
    let shift: Vec<u64> = shift.iter().map(|x| x.to_u64().expect("reduced")).collect();

    let n = node_count as usize;
    let mut succ = vec![0u32; n];
    let mut x = vec![0u64; d];
    for (idx, s) in succ.iter_mut().enumerate() {
        let mut rem = idx as u64;
        for xi in x.iter_mut() {
            *xi = rem % m;
            rem /= m;
        }
        let mut out = 0u64;
        for i in (0..d).rev() {
            let yi = (mm[i].iter().zip(&x).map(|(a, b)| (*a as u128) * (*b as u128)).sum::<u128>() + shift[i] as u128)
                % m as u128;
            out = out * m + yi as u64;
        }
        *s = out as u32;
    }

    // iterative functional-graph analysis: state 0 unvisited, 1 on stack, 2 done
    let mut state = vec![0u8; n];
    let mut period = vec![0u64; n];
    let mut tail = vec![0u64; n];
    let mut cycle_histogram = BTreeMap::new();
    let mut path: Vec<usize> = Vec::new();
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        path.clear();
        let mut v = start;
        while state[v] == 0 {
            state[v] = 1;
            path.push(v);
            v = succ[v] as usize;
        }
        let mut base_tail;
        let base_period;
        if state[v] == 1 {
            // new cycle: the path suffix from v
            let pos = path.iter().position(|&u| u == v).expect("on path");
            let len = (path.len() - pos) as u64;
            for &u in &path[pos..] {
                period[u] = len;
                tail[u] = 0;
                state[u] = 2;
            }
            *cycle_histogram.entry(len).or_insert(0u64) += 1;
            path.truncate(pos);
            base_tail = 0;
            base_period = len;
        } else {
            base_tail = tail[v];
            base_period = period[v];
        }
        for &u in path.iter().rev() {
            base_tail += 1;
            tail[u] = base_tail;
            period[u] = base_period;
            state[u] = 2;
        }
    }
    let mut tail_histogram = BTreeMap::new();
    for &t in &tail {
        *tail_histogram.entry(t).or_insert(0u64) += 1;
    }
    let periodic_nodes = tail_histogram.get(&0).copied().unwrap_or(0);
    let fixed_nodes = cycle_histogram.get(&1).copied().unwrap_or(0);
    let nodes = (n <= NODE_TABLE_LIMIT)
        .then(|| period.iter().zip(&tail).map(|(&period, &tail)| NodeInfo { period, tail }).collect());
    Ok(TorsionOrbitGraph { level: m, node_count, cycle_histogram, tail_histogram, periodic_nodes, fixed_nodes, nodes })
}

/// Number of `m`-torsion fixed points of an isogeny with `det(M - I) ≠ 0`:
/// `prod gcd(d_i, m)` over the Smith invariant factors of `M - I`.
pub fn torsion_fixed_count(f: &TorusEndomorphism, m: u64) -> BigInt {
    let d = f.torus().rank();
    let sm = smith_form(&(f.matrix() - &IntMatrix::identity(d)));
    let mb = BigInt::from(m);
    sm.invariant_factors().iter().map(|x| x.gcd(&mb)).product()
}

pub const DEFAULT_ORBIT_BOUND: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum OrbitVerdict {
    Invariant,
    Periodic {
        period: usize,
    },
    /// No return within the bound; not a proof of an infinite orbit.
    EscapingWithinBound {
        bound: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubtorusOrbit {
    pub verdict: OrbitVerdict,
    /// `S, f(S), f²(S), …` as saturated lattices.
    pub sequence: Vec<Sublattice>,
}

/// Follows `S ↦ sat(M S)`. Since `M` is invertible over `Q`, the orbit of
/// a subspace is either purely periodic or never repeats.
pub fn subtorus_orbit(f: &TorusEndomorphism, s: &Subtorus, bound: usize) -> Result<SubtorusOrbit> {
    f.require_surjective()?;
    let start = s.lattice.clone();
    let mut sequence = vec![start.clone()];
    let mut cur = start.clone();
    for p in 1..=bound {
        cur = span_saturation(&(f.matrix() * &cur.basis));
        let back = cur == start;
        sequence.push(cur.clone());
        if back {
            let verdict = if p == 1 { OrbitVerdict::Invariant } else { OrbitVerdict::Periodic { period: p } };
            return Ok(SubtorusOrbit { verdict, sequence });
        }
    }
    Ok(SubtorusOrbit { verdict: OrbitVerdict::EscapingWithinBound { bound }, sequence })
}

/// Comparison of preperiodic and torsion points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PreperTorsion {
    /// Some `H^{1,0}` eigenvalue is a root of unity (exact).
    pub root_of_unity_eigenvalue: bool,
    /// Some iterate fixes a positive-dimensional subtorus (exact).
    pub fixed_subtorus: Option<FixedSubtorusSummary>,
    /// The two exact conditions agree.
    pub consistent: bool,
    /// Non-torsion preperiodic points exist; implied by theory from the
    /// exact conditions, never enumerated.
    pub nontorsion_preperiodic_theoretical: bool,
    pub preper_equals_tors: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FixedSubtorusSummary {
    pub k: u64,
    pub rank: usize,
}

pub fn preper_vs_torsion(f: &TorusEndomorphism) -> Result<PreperTorsion> {
    if !f.tau().iter().all(Zero::is_zero) {
        return Err(Error::domain("preper_vs_torsion requires an isogeny (tau = 0)"));
    }
    let uf = unity_free(f)?;
    let fs = fixed_subtorus(f)?.map(|fs| FixedSubtorusSummary { k: fs.k, rank: fs.subtorus.rank() });
    let root = !uf.verdict;
    Ok(PreperTorsion {
        root_of_unity_eigenvalue: root,
        consistent: root == fs.is_some(),
        fixed_subtorus: fs,
        nontorsion_preperiodic_theoretical: root,
        preper_equals_tors: !root,
    })
}

/// `|det(M^a - M^b)|`, the size of `{x : f^a(x) = f^b(x)}` for isogenies
/// (0 meaning infinite).
pub fn difference_det(f: &TorusEndomorphism, a: u64, b: u64) -> BigInt {
    (&f.matrix().pow(a) - &f.matrix().pow(b)).det_int().expect("square").abs()
}
