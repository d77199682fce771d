//! Complex tori `R^{2n} / Z^{2n}` with a complex structure `J` on the lattice,
//! their subtori and quotients, Néron–Severi spaces, and ampleness.
//!
//! `J` is allowed to have entries in a real quadratic field: `J = A + sqrt(D) B`
//! with `A`, `B` rational. `D = 1` (so `B = 0`) is the purely rational case,
//! which covers products of Gaussian curves; Eisenstein and `Z[sqrt(-d)]`
//! curves need a radicand, since a rational `J` generates `Q(i)`. Every test
//! splits into a rational part and a `sqrt(D)` part and stays exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::scalar::ser;
use crate::exactnum::{FieldScalar, RealQuad};
use crate::matlin::{
    exterior_power, integer_kernel, k_subsets, pair_index, restrict_and_quotient, saturate, IntMatrix, Matrix,
    RationalMatrix, Sublattice,
};

/// Splits `d = s^2 * core` with `core` squarefree.
fn squarefree_split(d: u32) -> (u32, u32) {
    let (mut core, mut s) = (d, 1u32);
    let mut p = 2u32;
    while p * p <= core {
        while core % (p * p) == 0 {
            core /= p * p;
            s *= p;
        }
        p += 1;
    }
    (core, s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexTorus {
    n: usize,
    radicand: u32,
    j_rational: RationalMatrix,
    j_sqrt: RationalMatrix,
}

/// Validates a rational complex structure.
pub fn make_torus(j: RationalMatrix) -> Result<ComplexTorus> {
    let z = RationalMatrix::zeros(j.rows(), j.cols());
    make_torus_quadratic(j, z, 1)
}

/// Validates `J = j_rational + sqrt(radicand) * j_sqrt`.
pub fn make_torus_quadratic(j_rational: RationalMatrix, j_sqrt: RationalMatrix, radicand: u32) -> Result<ComplexTorus> {
    if !j_rational.is_square() || j_rational.rows() != j_sqrt.rows() || !j_sqrt.is_square() {
        return Err(Error::domain("complex structure must be a square matrix"));
    }
    let size = j_rational.rows();
    if size % 2 == 1 {
        return Err(Error::domain(format!("complex structure has odd size {size}")));
    }
    if radicand == 0 {
        return Err(Error::domain("radicand must be positive"));
    }
    let (core, s) = squarefree_split(radicand);
    let s = BigRational::from_integer(BigInt::from(s));
    let (j_rational, j_sqrt, radicand) = if core == 1 || j_sqrt.is_zero() {
        let a = &j_rational + &j_sqrt.scale(&(if core == 1 { s } else { BigRational::zero() }));
        (a, RationalMatrix::zeros(size, size), 1)
    } else {
        (j_rational, j_sqrt.scale(&s), core)
    };
    let a = &j_rational;
    let b = &j_sqrt;
    let d = BigRational::from_integer(radicand.into());
    let rational_sq = &(a * a) + &(b * b).scale(&d);
    let mixed = &(a * b) + &(b * a);
    if rational_sq != -RationalMatrix::identity(size) || !mixed.is_zero() {
        return Err(Error::ComplexStructure("J^2 != -I".into()));
    }
    Ok(ComplexTorus { n: size / 2, radicand, j_rational, j_sqrt })
}

impl ComplexTorus {
    /// Complex dimension `n`.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Lattice rank `2n`.
    pub fn rank(&self) -> usize {
        2 * self.n
    }

    pub fn radicand(&self) -> u32 {
        self.radicand
    }

    pub fn is_degenerate(&self) -> bool {
        self.n == 0
    }

    pub fn j_rational_part(&self) -> &RationalMatrix {
        &self.j_rational
    }

    pub fn j_sqrt_part(&self) -> &RationalMatrix {
        &self.j_sqrt
    }

    /// `J` itself when it is rational.
    pub fn j_if_rational(&self) -> Option<&RationalMatrix> {
        self.j_sqrt.is_zero().then_some(&self.j_rational)
    }

    fn quad(&self, a: &BigRational, b: &BigRational) -> RealQuad {
        if self.radicand == 1 {
            RealQuad::rational(a.clone())
        } else {
            RealQuad::new(a.clone(), b.clone(), self.radicand)
        }
    }

    /// `J` with entries in `Q(sqrt D)`.
    pub fn j(&self) -> Matrix<RealQuad> {
        let m = self.rank();
        Matrix::from_fn(m, m, |i, j| self.quad(self.j_rational.get(i, j), self.j_sqrt.get(i, j)))
    }

    /// Holomorphy test: `M J = J M`, i.e. `M` commutes with both parts.
    pub fn commutes_with(&self, m: &RationalMatrix) -> bool {
        m.commutes_with(&self.j_rational) && m.commutes_with(&self.j_sqrt)
    }

    /// Block-diagonal sum of tori.
    pub fn product(parts: &[ComplexTorus]) -> Result<ComplexTorus> {
        if parts.is_empty() {
            return Err(Error::domain("product of no tori"));
        }
        let radicands: Vec<u32> = parts.iter().map(|t| t.radicand).filter(|&d| d != 1).collect();
        if radicands.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::domain("product mixes complex structures over different quadratic fields"));
        }
        let radicand = radicands.first().copied().unwrap_or(1);
        let a = Matrix::block_diag(&parts.iter().map(|t| t.j_rational.clone()).collect::<Vec<_>>());
        let b = Matrix::block_diag(&parts.iter().map(|t| t.j_sqrt.clone()).collect::<Vec<_>>());
        make_torus_quadratic(a, b, radicand)
    }
}

impl Serialize for ComplexTorus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ComplexTorus", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("J", &self.j_rational)?;
        if self.radicand != 1 {
            st.serialize_field("J_sqrt", &serde_json_like::SqrtPart { radicand: self.radicand, matrix: &self.j_sqrt })?;
        }
        st.end()
    }
}

mod serde_json_like {
    use super::RationalMatrix;
    use serde::Serialize;

    #[derive(Serialize)]
    pub struct SqrtPart<'a> {
        pub radicand: u32,
        pub matrix: &'a RationalMatrix,
    }
}

/// A complex subtorus: a primitive sublattice whose rational span is
/// `J`-stable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Subtorus {
    pub lattice: Sublattice,
}

impl Subtorus {
    pub fn dim(&self) -> usize {
        self.lattice.rank() / 2
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }
}

/// Saturates the columns of `s` and checks they span a complex subtorus.
pub fn make_subtorus(t: &ComplexTorus, s: &IntMatrix) -> Result<Subtorus> {
    if s.rows() != t.rank() {
        return Err(Error::domain("subtorus columns have the wrong length"));
    }
    let lattice = saturate(s)?;
    subtorus_from_lattice(t, lattice)
}

/// Checks even rank and `J`-invariance of an already primitive lattice.
pub fn subtorus_from_lattice(t: &ComplexTorus, lattice: Sublattice) -> Result<Subtorus> {
    if lattice.rank() % 2 == 1 {
        return Err(Error::NotASubtorus(format!("odd rank {}", lattice.rank())));
    }
    if !lattice.is_invariant_under(&t.j_rational) || !lattice.is_invariant_under(&t.j_sqrt) {
        return Err(Error::NotASubtorus("span is not J-invariant".into()));
    }
    Ok(Subtorus { lattice })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotientTorus {
    pub torus: ComplexTorus,
    /// Integer `(2n - r) x 2n` matrix taking ambient lattice coordinates to
    /// quotient lattice coordinates.
    pub projection: IntMatrix,
    /// Unimodular basis whose first `r` columns span the subtorus lattice.
    pub change_of_basis: IntMatrix,
    pub degenerate: bool,
}

pub fn quotient_torus(t: &ComplexTorus, s: &Subtorus) -> Result<QuotientTorus> {
    let ra = restrict_and_quotient(&t.j_rational, &s.lattice)?;
    let rb = restrict_and_quotient(&t.j_sqrt, &s.lattice)?;
    debug_assert_eq!(ra.change_of_basis, rb.change_of_basis);
    let p = ra.change_of_basis;
    let (d, r) = (t.rank(), s.rank());
    let pinv = p.to_rational().inverse().and_then(|m| m.to_integer()).expect("unimodular");
    let torus = make_torus_quadratic(ra.quotient, rb.quotient, t.radicand)?;
    Ok(QuotientTorus {
        degenerate: torus.is_degenerate(),
        torus,
        projection: pinv.block(r, d, 0, d),
        change_of_basis: p,
    })
}

/// Alternating form `E` with `E[i][j] = ω_{ij}` for `i < j` (lexicographic
/// pair coordinates).
pub fn form_matrix(rank: usize, omega: &[BigRational]) -> RationalMatrix {
    let mut e = RationalMatrix::zeros(rank, rank);
    for i in 0..rank {
        for j in i + 1..rank {
            let w = omega[pair_index(rank, i, j)].clone();
            e.set(j, i, -w.clone());
            e.set(i, j, w);
        }
    }
    e
}

/// Inverse of [`form_matrix`].
pub fn form_vector(e: &RationalMatrix) -> Vec<BigRational> {
    k_subsets(e.rows(), 2).iter().map(|p| e.get(p[0], p[1]).clone()).collect()
}

/// Rational (1,1)-classes: `ω` in `Λ²` of the dual lattice with
/// `Λ²(Jᵀ) ω = ω`. The basis is a primitive integral basis of the
/// Néron–Severi lattice inside `Λ²(Z^{2n})^*`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NeronSeveriSpace {
    pub rank: usize,
    #[serde(serialize_with = "ser::rational_vecs")]
    pub basis: Vec<Vec<BigRational>>,
}

impl NeronSeveriSpace {
    /// Basis vectors as the columns of a matrix.
    pub fn basis_matrix(&self, ambient: usize) -> RationalMatrix {
        RationalMatrix::from_cols(ambient, &self.basis)
    }

    pub fn coordinates(&self, omega: &[BigRational]) -> Option<Vec<BigRational>> {
        if self.rank == 0 {
            return omega.iter().all(Zero::is_zero).then(Vec::new);
        }
        self.basis_matrix(omega.len()).solve(omega)
    }

    pub fn combination(&self, coeffs: &[BigRational], ambient: usize) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); ambient];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }
}

/// Splits `Λ²(Jᵀ)` into rational and `sqrt D` parts.
fn wedge2_jt(t: &ComplexTorus) -> (RationalMatrix, RationalMatrix) {
    let w = exterior_power(&t.j().transpose(), 2).expect("rank >= 2");
    (w.map(|x| x.rational_part().clone()), w.map(|x| x.irrational_part().clone()))
}

fn clear_row_denominators(m: &RationalMatrix) -> IntMatrix {
    let rows = m
        .to_rows()
        .into_iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    IntMatrix::from_rows(rows).expect("rectangular")
}

pub fn neron_severi(t: &ComplexTorus) -> NeronSeveriSpace {
    if t.rank() < 2 {
        return NeronSeveriSpace { rank: 0, basis: Vec::new() };
    }
    let (x, y) = wedge2_jt(t);
    let m = x.rows();
    let stacked = RationalMatrix::from_rows(
        (&x - &RationalMatrix::identity(m)).to_rows().into_iter().chain(y.to_rows()).collect(),
    )
    .expect("rectangular");
    let kernel = integer_kernel(&clear_row_denominators(&stacked));
    let basis: Vec<Vec<BigRational>> =
        kernel.columns().into_iter().map(|c| c.into_iter().map(BigRational::from_integer).collect()).collect();
    NeronSeveriSpace { rank: basis.len(), basis }
}

/// Whether `ω` is of type (1,1).
pub fn is_ns_class(t: &ComplexTorus, omega: &[BigRational]) -> bool {
    let (x, y) = wedge2_jt(t);
    omega.len() == x.rows() && x.mul_vec(omega) == omega && y.mul_vec(omega).iter().all(Zero::is_zero)
}

/// Positive definiteness of `S = Jᵀ E` by exact Sylvester minors, computed
/// as the pivots of elimination without row exchanges.
fn positive_definite_form(t: &ComplexTorus, e: &RationalMatrix) -> bool {
    let s = &t.j().transpose() * &e.map(|x| RealQuad::rational(x.clone()));
    debug_assert!(s == s.transpose(), "E(Jx, y) must be symmetric");
    let n = s.rows();
    if n == 0 {
        return false;
    }
    let mut m = s;
    for k in 0..n {
        let piv = m.get(k, k).clone();
        if piv.signum() <= 0 {
            return false;
        }
        let inv = piv.inv();
        for i in k + 1..n {
            let f = m.get(i, k).clone() * inv.clone();
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let v = m.get(i, j).clone() - f.clone() * m.get(k, j).clone();
                m.set(i, j, v);
            }
        }
    }
    true
}

/// Ampleness of an NS class: `S(x, y) = E_ω(Jx, y)` positive definite.
pub fn is_ample(t: &ComplexTorus, omega: &[BigRational]) -> Result<bool> {
    if omega.len() != t.rank() * t.rank().saturating_sub(1) / 2 {
        return Err(Error::domain("class has the wrong number of coordinates"));
    }
    if !is_ns_class(t, omega) {
        return Err(Error::domain("class is not of type (1,1)"));
    }
    Ok(positive_definite_form(t, &form_matrix(t.rank(), omega)))
}

/// Outcome of a bounded search for an ample class in a rational subspace of
/// the NS space.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AmpleSearch {
    #[serde(serialize_with = "ser::opt_rational_vec")]
    pub witness: Option<Vec<BigRational>>,
    pub candidates_tried: usize,
}

/// Floating-point screen for the ample search: `true` unless elimination on
/// the symmetric matrix meets only confidently positive pivots. Only ever
/// used to skip candidates; accepted classes are always decided exactly.
fn not_confidently_positive(mut m: Matrix<f64>) -> bool {
    let n = m.rows();
    let scale = m.to_rows().iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
    let tol = 1e-12 * scale;
    for k in 0..n {
        let piv = *m.get(k, k);
        if piv <= tol {
            return true;
        }
        for i in k + 1..n {
            let f = m.get(i, k) / piv;
            for j in k..n {
                let v = m.get(i, j) - f * m.get(k, j);
                m.set(i, j, v);
            }
        }
    }
    false
}

pub const AMPLE_SEARCH_BUDGET: usize = 10_000;
pub const AMPLE_SEARCH_HEIGHT: i64 = 8;

/// Structural candidates tried before enumeration: the product class when
/// `J` is block-diagonal in 2x2 blocks, and the class of the `J`-invariant
/// form `-Jᵀ (I + JᵀJ)` when it is rational up to a `sqrt D` factor.
fn structural_candidates(t: &ComplexTorus) -> Vec<Vec<BigRational>> {
    let d = t.rank();
    let mut out = Vec::new();
    let (a, b) = (&t.j_rational, &t.j_sqrt);
    let block_diagonal =
        (0..d).all(|i| (0..d).all(|j| i / 2 == j / 2 || (a.get(i, j).is_zero() && b.get(i, j).is_zero())));
    if block_diagonal && d > 0 {
        let mut omega = vec![BigRational::zero(); d * (d - 1) / 2];
        for k in 0..t.n {
            let (i, j) = (2 * k, 2 * k + 1);
            let j10 = t.quad(a.get(j, i), b.get(j, i));
            omega[pair_index(d, i, j)] = BigRational::from_integer((-j10.signum()).into());
        }
        out.push(omega);
    }
    let jq = t.j();
    let g = &Matrix::identity(d) + &(&jq.transpose() * &jq);
    let e0 = -(&jq.transpose() * &g);
    let p = e0.map(|x| x.rational_part().clone());
    let q = e0.map(|x| x.irrational_part().clone());
    if q.is_zero() && !p.is_zero() {
        out.push(form_vector(&p));
    } else if p.is_zero() && !q.is_zero() {
        out.push(form_vector(&q));
    }
    out
}

/// Deterministic enumeration of integer coefficient vectors of length `k`
/// with max-norm exactly `h`, in lexicographic order on `[-h, h]^k`.
fn height_shell(k: usize, h: i64, mut visit: impl FnMut(&[i64]) -> bool) {
    let mut c = vec![-h; k];
    loop {
        if c.iter().any(|x| x.abs() == h) && !visit(&c) {
            return;
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if c[pos] < h {
                c[pos] += 1;
                for x in &mut c[pos + 1..] {
                    *x = -h;
                }
                break;
            }
        }
    }
}

/// Searches `span(vectors)` (a subspace of NS) for an ample class: first
/// structural candidates lying in the span, then combinations of height
/// `1..=8` in deterministic order, then seeded random combinations.
pub fn ample_search(t: &ComplexTorus, vectors: &[Vec<BigRational>], budget: usize, seed: u64) -> AmpleSearch {
    let d = t.rank();
    let ambient = d * d.saturating_sub(1) / 2;
    let mut tried = 0usize;
    if vectors.is_empty() || d == 0 {
        return AmpleSearch { witness: None, candidates_tried: 0 };
    }
    let span = RationalMatrix::from_cols(ambient, vectors);
    let jt = t.j().transpose().map(RealQuad::to_f64);
    let float_form = |v: &[BigRational]| &jt * &form_matrix(d, v).map(crate::exactnum::scalar::to_f64);
    let accept = |cand: &[BigRational]| {
        !not_confidently_positive(float_form(cand)) && positive_definite_form(t, &form_matrix(d, cand))
    };
    let basis_forms: Vec<Matrix<f64>> = vectors.iter().map(|v| float_form(v)).collect();
    let screened_out = |c: &[i64]| {
        let mut m = Matrix::<f64>::zeros(d, d);
        for (ci, f) in c.iter().zip(&basis_forms) {
            if *ci != 0 {
                m = &m + &f.scale(&(*ci as f64));
            }
        }
        not_confidently_positive(m)
    };
    for cand in structural_candidates(t) {
        if tried >= budget {
            break;
        }
        if span.solve(&cand).is_some() {
            tried += 1;
            if accept(&cand) {
                return AmpleSearch { witness: Some(cand), candidates_tried: tried };
            }
        }
    }
    let combine = |c: &[i64]| -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); ambient];
        for (ci, v) in c.iter().zip(vectors) {
            if *ci != 0 {
                let ci = BigRational::from_integer((*ci).into());
                for (o, x) in out.iter_mut().zip(v) {
                    *o += &ci * x;
                }
            }
        }
        out
    };
    let k = vectors.len();
    let mut found = None;
    for h in 1..=AMPLE_SEARCH_HEIGHT {
        height_shell(k, h, |c| {
            if tried >= budget {
                return false;
            }
            tried += 1;
            if screened_out(c) {
                return true;
            }
            let cand = combine(c);
            if accept(&cand) {
                found = Some(cand);
                return false;
            }
            true
        });
        if found.is_some() || tried >= budget {
            break;
        }
    }
    // random draws come from the same box; skip them once the shells
    // have covered it
    let box_size = (2 * AMPLE_SEARCH_HEIGHT + 1).checked_pow(k as u32).unwrap_or(i64::MAX);
    let exhausted = usize::try_from(box_size - 1).is_ok_and(|b| tried >= b);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while found.is_none() && tried < budget && !exhausted {
        tried += 1;
        let c: Vec<i64> = (0..k).map(|_| rng.gen_range(-AMPLE_SEARCH_HEIGHT..=AMPLE_SEARCH_HEIGHT)).collect();
        if screened_out(&c) {
            continue;
        }
        let cand = combine(&c);
        if accept(&cand) {
            found = Some(cand);
        }
    }
    AmpleSearch { witness: found.map(normalize_class), candidates_tried: tried }
}

/// Scales a nonzero class to a primitive integral vector (positive multiples
/// keep ampleness).
pub fn normalize_class(v: Vec<BigRational>) -> Vec<BigRational> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    ints.into_iter().map(|x| BigRational::from_integer(x / g.abs())).collect()
}

/// Searches the whole NS space for an ample class.
pub fn find_ample_class(t: &ComplexTorus) -> AmpleSearch {
    let ns = neron_severi(t);
    ample_search(t, &ns.basis, AMPLE_SEARCH_BUDGET, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::rat;

    fn gaussian() -> ComplexTorus {
        make_torus(RationalMatrix::from_i64(&[&[0, -1], &[1, 0]])).unwrap()
    }

    fn eisenstein() -> ComplexTorus {
        // J = (2g + I)/sqrt 3, g = [[0,-1],[1,-1]]
        let b = RationalMatrix::from_i64(&[&[1, -2], &[2, -1]]).scale(&rat(1, 3));
        make_torus_quadratic(RationalMatrix::zeros(2, 2), b, 3).unwrap()
    }

    #[test]
    fn torus_validation() {
        assert_eq!(gaussian().dim(), 1);
        let ee = ComplexTorus::product(&[gaussian(), gaussian()]).unwrap();
        assert_eq!(ee.dim(), 2);
        assert!(matches!(make_torus(RationalMatrix::identity(2)), Err(Error::ComplexStructure(_))));
        assert!(matches!(make_torus(RationalMatrix::identity(3)), Err(Error::Domain(_))));
        assert_eq!(eisenstein().radicand(), 3);
        // sqrt 12 = 2 sqrt 3 is normalized
        let b = RationalMatrix::from_i64(&[&[1, -2], &[2, -1]]).scale(&rat(1, 6));
        let t = make_torus_quadratic(RationalMatrix::zeros(2, 2), b, 12).unwrap();
        assert_eq!(t, eisenstein());
    }

    #[test]
    fn ns_ranks() {
        assert_eq!(neron_severi(&gaussian()).rank, 1);
        let ee = ComplexTorus::product(&[gaussian(), gaussian()]).unwrap();
        assert_eq!(neron_severi(&ee).rank, 4);
        let mixed = ComplexTorus::product(&[gaussian(), eisenstein()]).unwrap();
        assert_eq!(neron_severi(&mixed).rank, 2);
        let ww = ComplexTorus::product(&[eisenstein(), eisenstein()]).unwrap();
        assert_eq!(neron_severi(&ww).rank, 4);
        for t in [gaussian(), ee, mixed, ww] {
            let ns = neron_severi(&t);
            for b in &ns.basis {
                assert!(is_ns_class(&t, b));
            }
        }
    }

    #[test]
    fn ampleness() {
        let ee = ComplexTorus::product(&[gaussian(), gaussian()]).unwrap();
        // product polarization: pairs (0,1) and (2,3) with E(x,y)-sign convention
        let mut omega = vec![rat(0, 1); 6];
        omega[pair_index(4, 0, 1)] = rat(-1, 1);
        omega[pair_index(4, 2, 3)] = rat(-1, 1);
        assert!(is_ample(&ee, &omega).unwrap());
        let neg: Vec<_> = omega.iter().map(|x| -x.clone()).collect();
        assert!(!is_ample(&ee, &neg).unwrap());
        assert!(!is_ample(&ee, &vec![rat(0, 1); 6]).unwrap());
        let mut bad = vec![rat(0, 1); 6];
        bad[pair_index(4, 0, 2)] = rat(1, 1);
        bad[pair_index(4, 0, 3)] = rat(1, 1);
        assert!(is_ample(&ee, &bad).is_err());
        for t in [gaussian(), eisenstein(), ComplexTorus::product(&[gaussian(), eisenstein()]).unwrap()] {
            let found = find_ample_class(&t);
            let w = found.witness.expect("ample class exists");
            assert!(is_ample(&t, &w).unwrap());
        }
    }

    #[test]
    fn subtori_and_quotients() {
        let ee = ComplexTorus::product(&[gaussian(), gaussian()]).unwrap();
        let first = make_subtorus(&ee, &IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]])).unwrap();
        assert_eq!(first.dim(), 1);
        let diag = make_subtorus(&ee, &IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[1, 0], &[0, 1]])).unwrap();
        assert_eq!(diag.rank(), 2);
        assert!(matches!(
            make_subtorus(&ee, &IntMatrix::from_i64(&[&[1], &[0], &[0], &[0]])),
            Err(Error::NotASubtorus(_))
        ));
        assert!(matches!(
            make_subtorus(&ee, &IntMatrix::from_i64(&[&[1, 0], &[0, 0], &[0, 1], &[0, 0]])),
            Err(Error::NotASubtorus(_))
        ));
        let q = quotient_torus(&ee, &first).unwrap();
        assert_eq!(q.torus.dim(), 1);
        assert_eq!(q.torus.j_if_rational(), gaussian().j_if_rational());
        let q = quotient_torus(&ee, &diag).unwrap();
        assert_eq!(q.torus.dim(), 1);
        assert_eq!(&q.projection * &diag.lattice.basis, IntMatrix::zeros(2, 2));
        let whole = make_subtorus(&ee, &IntMatrix::identity(4)).unwrap();
        let q = quotient_torus(&ee, &whole).unwrap();
        assert!(q.degenerate);
    }
}
