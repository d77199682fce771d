//! The taxonomy of endomorphisms — finite order, unity-free, amplified,
//! polarized — with dynamical degrees, the Serre test, entropy, and checks
//! of the implication chain
//! `polarized ⇒ amplified ⇒ unity-free ⇒ infinite order`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::dynamics::{difference_det, lefschetz_number, FixedSubtorusSummary};
use crate::endo::{eigen_data, fixed_subtorus, make_endo, EigenData, TorusEndomorphism};
use crate::error::{Error, Result};
use crate::exactnum::roots::default_precision;
use crate::exactnum::scalar::{ser, to_f64};
use crate::exactnum::sturm::unit_circle_root_count;
use crate::exactnum::{
    is_kronecker, polynomial_class, root_magnitudes, CertifiedMagnitudeMultiset, IntPolynomial, Poly, PolynomialClass,
    QuadComplex, RatPolynomial,
};
use crate::matlin::{exterior_power, IntMatrix, RationalMatrix};
use crate::torus::{
    ample_search, is_ample, neron_severi, AmpleSearch, ComplexTorus, NeronSeveriSpace, AMPLE_SEARCH_BUDGET,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyOptions {
    /// Width bound for certified magnitude intervals.
    pub precision: BigRational,
    /// Candidate budget for ample-class searches.
    pub ample_budget: usize,
    /// Seed for the random phase of ample-class searches.
    pub seed: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { precision: default_precision(), ample_budget: AMPLE_SEARCH_BUDGET, seed: 0 }
    }
}

/// Per-torus data shared by all verdicts: the NS space and an ample class
/// if one was found.
#[derive(Clone, Debug)]
pub struct TorusContext {
    pub torus: ComplexTorus,
    pub ns: NeronSeveriSpace,
    pub ample: AmpleSearch,
}

impl TorusContext {
    pub fn new(t: &ComplexTorus, opts: &ClassifyOptions) -> Self {
        let ns = neron_severi(t);
        let ample = ample_search(t, &ns.basis, opts.ample_budget, opts.seed);
        TorusContext { torus: t.clone(), ns, ample }
    }

    pub fn projective(&self) -> bool {
        self.ample.witness.is_some()
    }

    fn ambient(&self) -> usize {
        let d = self.torus.rank();
        d * d.saturating_sub(1) / 2
    }

    fn to_ambient(&self, coords: &[BigRational]) -> Vec<BigRational> {
        self.ns.combination(coords, self.ambient())
    }
}

/// Order of `f` when finite: `M^K = I` for `K` the lcm of the cyclotomic
/// orders, then the order of the remaining translation.
pub fn finite_order(f: &TorusEndomorphism) -> Result<Option<u64>> {
    f.require_surjective()?;
    let ed = eigen_data(f)?;
    finite_order_from(f, &ed)
}

fn finite_order_from(f: &TorusEndomorphism, ed: &EigenData) -> Result<Option<u64>> {
    if !is_kronecker(&ed.h1_charpoly)? {
        return Ok(None);
    }
    let k = ed.cyclotomic.orders().fold(1u64, num_integer::lcm);
    if !f.matrix().pow(k).is_identity() {
        return Ok(None);
    }
    let tk = f.iterate(k)?;
    let t_order = tk.tau().iter().fold(BigInt::one(), |acc, t| acc.lcm(t.denom()));
    let t_order = t_order.to_u64().ok_or_else(|| Error::Resource("order overflow".into()))?;
    Ok(Some(k * t_order))
}

/// `Λ²(Mᵀ)` on `Λ²` of the dual lattice: the pullback of 2-forms.
pub fn pullback_matrix(f: &TorusEndomorphism) -> RationalMatrix {
    exterior_power(&f.matrix().to_rational().transpose(), 2).expect("rank >= 2")
}

/// Pullback `f^*` on 2-form coordinates.
pub fn pullback(f: &TorusEndomorphism, omega: &[BigRational]) -> Vec<BigRational> {
    pullback_matrix(f).mul_vec(omega)
}

/// `f^*` on the NS space, in the NS basis.
pub fn ns_action(f: &TorusEndomorphism) -> Result<RationalMatrix> {
    f.require_surjective()?;
    let ns = neron_severi(f.torus());
    ns_action_in(f, &ns)
}

pub fn ns_action_in(f: &TorusEndomorphism, ns: &NeronSeveriSpace) -> Result<RationalMatrix> {
    let rho = ns.rank;
    if rho == 0 {
        return Ok(RationalMatrix::zeros(0, 0));
    }
    let p = pullback_matrix(f);
    let basis = ns.basis_matrix(p.rows());
    let mut out = RationalMatrix::zeros(rho, rho);
    for (k, b) in ns.basis.iter().enumerate() {
        let image = p.mul_vec(b);
        let coords = basis
            .solve(&image)
            .ok_or_else(|| Error::InvariantViolation("pullback leaves the Néron–Severi space".into()))?;
        for (i, c) in coords.into_iter().enumerate() {
            out.set(i, k, c);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmplifiedPath {
    /// No ample class was found; projectivity is not verified.
    NotVerifiedProjective,
    /// (a) 1 is not an eigenvalue of `f^*` on NS, so `f^* - I` is onto.
    NoUnitEigenvalueOnNs,
    /// (b) Not unity-free, hence not amplified.
    NotUnityFree,
    /// An analytic eigenvalue `μ` has `|μ| = 1`. With `Av = μv`, the
    /// Hermitian form of `f^*L - L` takes the value `(|μ|² - 1) H_L(v, v) = 0`
    /// at `v` for every class `L`, so `f^*L - L` is never ample.
    AnalyticEigenvalueOnCircle,
    /// (c) Unity-free endomorphisms of abelian surfaces are amplified.
    UnityFreeSurface,
    /// (d) An ample class was found in the image of `f^* - I`.
    SampledWitness,
    /// (d) Sampling budget exhausted.
    SamplingExhausted,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AmplifiedVerdict {
    pub verdict: Verdict,
    pub path: AmplifiedPath,
    /// `L` with `f^*L - L` ample, when one is known.
    #[serde(serialize_with = "ser::opt_rational_vec")]
    pub witness: Option<Vec<BigRational>>,
    /// The ample class `f^*L - L`.
    #[serde(serialize_with = "ser::opt_rational_vec")]
    pub ample_difference: Option<Vec<BigRational>>,
}

impl AmplifiedVerdict {
    fn bare(verdict: Verdict, path: AmplifiedPath) -> Self {
        AmplifiedVerdict { verdict, path, witness: None, ample_difference: None }
    }
}

/// Whether 1 is an eigenvalue of `f^*` on NS.
pub fn ns_has_unit_eigenvalue(action: &RationalMatrix) -> bool {
    let rho = action.rows();
    rho > 0 && (action - &RationalMatrix::identity(rho)).det().expect("square").is_zero()
}

pub fn amplified(f: &TorusEndomorphism) -> Result<AmplifiedVerdict> {
    let opts = ClassifyOptions::default();
    let ctx = TorusContext::new(f.torus(), &opts);
    amplified_in(f, &ctx, &opts)
}

pub fn amplified_in(f: &TorusEndomorphism, ctx: &TorusContext, opts: &ClassifyOptions) -> Result<AmplifiedVerdict> {
    f.require_surjective()?;
    amplified_with(f, ctx, opts, &eigen_data(f)?)
}

fn amplified_with(
    f: &TorusEndomorphism,
    ctx: &TorusContext,
    opts: &ClassifyOptions,
    ed: &EigenData,
) -> Result<AmplifiedVerdict> {
    let Some(h) = ctx.ample.witness.clone() else {
        return Ok(AmplifiedVerdict::bare(Verdict::Inconclusive, AmplifiedPath::NotVerifiedProjective));
    };
    let t = f.torus();
    let action = ns_action_in(f, &ctx.ns)?;
    let rho = action.rows();
    let shifted = &action - &RationalMatrix::identity(rho);
    if !ns_has_unit_eigenvalue(&action) {
        let hc = ctx.ns.coordinates(&h).expect("ample class lies in NS");
        let lc = shifted.solve(&hc).expect("invertible");
        let l = ctx.to_ambient(&lc);
        let diff = difference_class(f, &l);
        if diff != h || !is_ample(t, &diff)? {
            return Err(Error::InvariantViolation("amplified witness fails to verify".into()));
        }
        return Ok(AmplifiedVerdict {
            verdict: Verdict::Yes,
            path: AmplifiedPath::NoUnitEigenvalueOnNs,
            witness: Some(l),
            ample_difference: Some(diff),
        });
    }
    if ed.u_count > 0 {
        return Ok(AmplifiedVerdict::bare(Verdict::No, AmplifiedPath::NotUnityFree));
    }
    if unit_circle_root_count(&ed.h1_charpoly.to_rational()) > 0 {
        return Ok(AmplifiedVerdict::bare(Verdict::No, AmplifiedPath::AnalyticEigenvalueOnCircle));
    }
    if t.dim() == 2 {
        return Ok(AmplifiedVerdict::bare(Verdict::Yes, AmplifiedPath::UnityFreeSurface));
    }
    // (d): search the image of f^* - I
    let image: Vec<Vec<BigRational>> =
        shifted.to_cols().iter().map(|c| ctx.to_ambient(c)).filter(|v| v.iter().any(|x| !x.is_zero())).collect();
    let found = ample_search(t, &image, opts.ample_budget, opts.seed);
    match found.witness {
        Some(diff) => {
            let dc = ctx.ns.coordinates(&diff).expect("image lies in NS");
            let lc = shifted.solve(&dc).expect("in the image");
            let l = ctx.to_ambient(&lc);
            debug_assert_eq!(difference_class(f, &l), diff);
            Ok(AmplifiedVerdict {
                verdict: Verdict::Yes,
                path: AmplifiedPath::SampledWitness,
                witness: Some(l),
                ample_difference: Some(diff),
            })
        }
        None => Ok(AmplifiedVerdict::bare(Verdict::Inconclusive, AmplifiedPath::SamplingExhausted)),
    }
}

/// `f^*L - L`.
pub fn difference_class(f: &TorusEndomorphism, l: &[BigRational]) -> Vec<BigRational> {
    pullback(f, l).iter().zip(l).map(|(a, b)| a - b).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolarizedPath {
    NotVerifiedProjective,
    /// `|det M|` is not `q^n` for an integer `q >= 2`.
    Degree,
    /// A certified H¹ magnitude differs from `sqrt q`.
    Serre,
    /// `M` is not semisimple. If `f^*L = qL` with `L` ample, `A / sqrt q` is
    /// unitary for the positive form `H_L`, so `A` (and `M`) would be
    /// diagonalizable.
    NotSemisimple,
    /// No class at all satisfies `f^*L = qL`.
    EmptyEigenspace,
    /// Ample `q`-eigenclass found.
    Witness,
    /// Serre test passed but the bounded search found no ample eigenclass.
    SearchExhausted,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SerreTest {
    #[serde(serialize_with = "ser_big")]
    pub q: BigInt,
    /// Every certified H¹ magnitude interval contains `sqrt q`.
    pub passed: bool,
}

/// Whether `M` is diagonalizable over `C`: the radical of its characteristic
/// polynomial annihilates it.
pub fn is_semisimple(m: &IntMatrix) -> bool {
    let rad = m.charpoly_int().expect("square").to_rational().radical().monic();
    let Some(rad) = IntPolynomial::try_from_rational(&rad) else {
        return false;
    };
    let n = m.rows();
    let value =
        rad.coeffs().iter().rev().fold(IntMatrix::zeros(n, n), |acc, c| &(&acc * m) + &IntMatrix::identity(n).scale(c));
    value.is_zero()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolarizedVerdict {
    pub verdict: Verdict,
    pub path: PolarizedPath,
    #[serde(serialize_with = "ser_opt_big")]
    pub q: Option<BigInt>,
    #[serde(serialize_with = "ser::opt_rational_vec")]
    pub witness: Option<Vec<BigRational>>,
    pub serre: Option<SerreTest>,
    /// False iff an ample `q`-eigenclass exists although the Serre test
    /// rejected.
    pub serre_consistent: bool,
}

fn ser_big<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_opt_big<S: serde::Serializer>(x: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_none(),
    }
}

/// Integer `q >= 2` with `q^n = |det M|`.
pub fn degree_root(det: &BigInt, n: usize) -> Option<BigInt> {
    let a = det.abs();
    if n == 0 {
        return None;
    }
    let q = a.nth_root(n as u32);
    (q.pow(n as u32) == a && q >= BigInt::from(2)).then_some(q)
}

/// Serre's necessary condition: all H¹ magnitudes equal `sqrt q`.
pub fn serre_test(mags: &CertifiedMagnitudeMultiset, q: &BigInt) -> SerreTest {
    let qr = BigRational::from_integer(q.clone());
    SerreTest { q: q.clone(), passed: mags.entries.iter().all(|e| e.contains_sqrt(&qr)) }
}

pub fn polarized(f: &TorusEndomorphism) -> Result<PolarizedVerdict> {
    let opts = ClassifyOptions::default();
    let ctx = TorusContext::new(f.torus(), &opts);
    let ed = eigen_data(f)?;
    let mags = root_magnitudes(&ed.h1_charpoly, &opts.precision)?;
    polarized_in(f, &ctx, &mags, &opts)
}

pub fn polarized_in(
    f: &TorusEndomorphism,
    ctx: &TorusContext,
    mags: &CertifiedMagnitudeMultiset,
    opts: &ClassifyOptions,
) -> Result<PolarizedVerdict> {
    f.require_surjective()?;
    let t = f.torus();
    let mut out = PolarizedVerdict {
        verdict: Verdict::No,
        path: PolarizedPath::Degree,
        q: None,
        witness: None,
        serre: None,
        serre_consistent: true,
    };
    if !ctx.projective() {
        out.verdict = Verdict::Inconclusive;
        out.path = PolarizedPath::NotVerifiedProjective;
        return Ok(out);
    }
    let Some(q) = degree_root(&f.det(), t.dim()) else {
        return Ok(out);
    };
    out.q = Some(q.clone());
    let serre = serre_test(mags, &q);
    let passed = serre.passed;
    out.serre = Some(serre);

    let action = ns_action_in(f, &ctx.ns)?;
    let rho = action.rows();
    let qr = BigRational::from_integer(q.clone());
    let eigen = (&action - &RationalMatrix::identity(rho).scale(&qr)).nullspace();
    let eigen_ambient: Vec<Vec<BigRational>> = eigen.iter().map(|c| ctx.to_ambient(c)).collect();
    let found = ample_search(t, &eigen_ambient, opts.ample_budget, opts.seed).witness;
    if let Some(w) = &found {
        let pulled = pullback(f, w);
        let scaled: Vec<BigRational> = w.iter().map(|x| x * &qr).collect();
        if pulled != scaled || !is_ample(t, w)? {
            return Err(Error::InvariantViolation("polarization witness fails to verify".into()));
        }
    }
    out.serre_consistent = passed || found.is_none();
    if !passed {
        out.path = PolarizedPath::Serre;
        return Ok(out);
    }
    if !is_semisimple(f.matrix()) {
        if found.is_some() {
            return Err(Error::InvariantViolation("ample q-eigenclass for a non-semisimple map".into()));
        }
        out.path = PolarizedPath::NotSemisimple;
        return Ok(out);
    }
    match found {
        Some(w) => {
            out.verdict = Verdict::Yes;
            out.path = PolarizedPath::Witness;
            out.witness = Some(w);
        }
        None if eigen.is_empty() => out.path = PolarizedPath::EmptyEigenspace,
        None => {
            out.verdict = Verdict::Inconclusive;
            out.path = PolarizedPath::SearchExhausted;
        }
    }
    Ok(out)
}

/// Certified enclosure of a dynamical degree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeEntry {
    pub j: usize,
    pub approx: f64,
    #[serde(serialize_with = "ser::rational")]
    pub lower: BigRational,
    #[serde(serialize_with = "ser::rational")]
    pub upper: BigRational,
}

impl DegreeEntry {
    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn overlaps(&self, o: &DegreeEntry) -> bool {
        self.lower <= o.upper && o.lower <= self.upper
    }
}

/// A certified equality `λ_j = λ_{j+1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EqualPair {
    pub j: usize,
    /// The certified intervals overlap (they coincide when the ratio is
    /// certified to be exactly 1).
    pub intervals_coincide: bool,
    /// `λ_{j+1} / λ_j = |γ_{j+1}|² = 1`, decided by an exact count of the
    /// unit-circle roots of h1.
    pub exact: bool,
    /// Classes of the square-free factors of h1 carrying the unit-circle
    /// roots that force the equality.
    pub circle_factor_classes: Vec<PolynomialClass>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DynamicalDegrees {
    pub degrees: Vec<DegreeEntry>,
    pub equal_consecutive_pairs: Vec<EqualPair>,
    /// Analytic eigenvalues with modulus `> 1`, `= 1`, `< 1`.
    pub analytic_above_one: usize,
    pub analytic_on_circle: usize,
    pub analytic_below_one: usize,
}

impl DynamicalDegrees {
    pub fn pair_indices(&self) -> Vec<usize> {
        self.equal_consecutive_pairs.iter().map(|p| p.j).collect()
    }
}

/// Classes of the square-free factors of `p` having unit-circle roots.
fn circle_factor_classes(p: &IntPolynomial) -> Vec<PolynomialClass> {
    let mut out = Vec::new();
    for (s, _) in p.to_rational().square_free_decomposition() {
        let s: RatPolynomial = s.monic();
        if unit_circle_root_count(&s) == 0 {
            continue;
        }
        if let Some(si) = IntPolynomial::try_from_rational(&s) {
            if let Ok(c) = polynomial_class(&si) {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
    }
    out
}

pub fn dynamical_degrees(f: &TorusEndomorphism) -> Result<DynamicalDegrees> {
    dynamical_degrees_with(f, &default_precision())
}

/// [`dynamical_degrees`] with magnitude enclosures of width at most
/// `precision`.
pub fn dynamical_degrees_with(f: &TorusEndomorphism, precision: &BigRational) -> Result<DynamicalDegrees> {
    f.require_surjective()?;
    let ed = eigen_data(f)?;
    let mags = root_magnitudes(&ed.h1_charpoly, precision)?;
    Ok(degrees_from(&ed, &mags, f.dim()))
}

fn degrees_from(ed: &EigenData, mags: &CertifiedMagnitudeMultiset, n: usize) -> DynamicalDegrees {
    let expanded = mags.expanded();
    let mut degrees = Vec::with_capacity(n + 1);
    let (mut lo, mut hi) = (BigRational::one(), BigRational::one());
    degrees.push(DegreeEntry { j: 0, approx: 1.0, lower: lo.clone(), upper: hi.clone() });
    for j in 1..=n {
        for e in &expanded[2 * (j - 1)..2 * j] {
            lo *= &e.lower;
            hi *= &e.upper;
        }
        let approx = (to_f64(&lo) + to_f64(&hi)) / 2.0;
        degrees.push(DegreeEntry { j, approx, lower: lo.clone(), upper: hi.clone() });
    }
    let sides = mags.side_counts();
    let (a, c) = (sides.above_one / 2, sides.on_circle / 2);
    let classes = circle_factor_classes(&ed.h1_charpoly);
    let mut pairs = Vec::new();
    for j in 0..n {
        let exact = a < j + 1 && j < a + c;
        let coincide = degrees[j].overlaps(&degrees[j + 1]);
        if exact {
            pairs.push(EqualPair { j, intervals_coincide: coincide, exact, circle_factor_classes: classes.clone() });
        }
    }
    DynamicalDegrees {
        degrees,
        equal_consecutive_pairs: pairs,
        analytic_above_one: a,
        analytic_on_circle: c,
        analytic_below_one: sides.below_one / 2,
    }
}

/// Enclosure of `log λ_1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Entropy {
    pub lower: f64,
    pub upper: f64,
    pub approx: f64,
}

/// Topological entropy `log λ_1`, with a certified enclosure.
pub fn entropy(d: &DynamicalDegrees) -> Option<Entropy> {
    let l1 = d.degrees.get(1)?;
    let (lo, hi) = (to_f64(&l1.lower), to_f64(&l1.upper));
    let slack = |x: f64| 4.0 * f64::EPSILON * x.abs().max(1.0);
    let lower = if lo > 0.0 { lo.ln() - slack(lo.ln()) } else { f64::NEG_INFINITY };
    let upper = hi.ln() + slack(hi.ln());
    Some(Entropy { lower, upper, approx: l1.approx.ln() })
}

/// Class of the radical of the H¹ characteristic polynomial.
pub fn h1_poly_class(h1: &IntPolynomial) -> Result<PolynomialClass> {
    let rad = h1.to_rational().radical().monic();
    let rad = IntPolynomial::try_from_rational(&rad)
        .ok_or_else(|| Error::InvariantViolation("radical of h1 is not integral".into()))?;
    polynomial_class(&rad)
}

/// Machine-readable flags attached to a report.
pub const FLAG_NOT_PROJECTIVE: &str = "not-verified-projective";
pub const FLAG_EQUAL_DEGREES_NOT_UNITY_FREE: &str = "equal-degrees-while-not-unity-free";
pub const FLAG_SERRE_INCONSISTENT: &str = "serre-inconsistent";
pub const FLAG_RADICAND: &str = "complex-structure-over-real-quadratic-field";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub dimension: usize,
    pub surjective: bool,
    pub isogeny: bool,
    #[serde(serialize_with = "ser_big")]
    pub det: BigInt,
    pub finite_order: Option<u64>,
    pub unity_free: Option<bool>,
    pub u_f: Option<usize>,
    /// Smallest iterate fixing a positive-dimensional subtorus pointwise,
    /// with the real rank of that subtorus.
    pub fixed_subtorus: Option<FixedSubtorusSummary>,
    pub amplified: Option<AmplifiedVerdict>,
    pub polarized: Option<PolarizedVerdict>,
    pub serre_consistent: bool,
    pub dynamical_degrees: Vec<DegreeEntry>,
    pub equal_consecutive_pairs: Vec<usize>,
    pub equal_pair_evidence: Vec<EqualPair>,
    pub entropy: Option<Entropy>,
    #[serde(serialize_with = "ser_big")]
    pub lefschetz: BigInt,
    pub h1_poly_class: Option<PolynomialClass>,
    pub h1_charpoly: IntPolynomial,
    pub analytic_charpoly: Option<Poly<QuadComplex>>,
    pub h1_magnitudes: Option<CertifiedMagnitudeMultiset>,
    pub ns_rank: usize,
    pub ns_action_charpoly: Option<Poly<BigRational>>,
    pub ns_has_eigenvalue_one: Option<bool>,
    pub projective_witness: Option<AmpleWitness>,
    pub flags: Vec<String>,
    pub notes: Vec<String>,
    pub errors: Vec<ReportError>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AmpleWitness {
    #[serde(serialize_with = "ser::rational_vec")]
    pub class: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportError {
    pub operation: &'static str,
    pub code: &'static str,
    pub message: String,
}

fn record<T>(errors: &mut Vec<ReportError>, op: &'static str, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            errors.push(ReportError { operation: op, code: e.code(), message: e.to_string() });
            None
        }
    }
}

pub fn full_report(f: &TorusEndomorphism) -> ClassificationReport {
    full_report_with(f, &ClassifyOptions::default())
}

pub fn full_report_with(f: &TorusEndomorphism, opts: &ClassifyOptions) -> ClassificationReport {
    let ctx = TorusContext::new(f.torus(), opts);
    full_report_in(f, &ctx, opts)
}

pub fn full_report_in(f: &TorusEndomorphism, ctx: &TorusContext, opts: &ClassifyOptions) -> ClassificationReport {
    let mut errors = Vec::new();
    let mut flags = Vec::new();
    let mut notes = Vec::new();
    let n = f.dim();
    let surjective = f.is_surjective();
    let h1 = f.matrix().charpoly_int().expect("square");
    let ed = record(&mut errors, "eigen_data", eigen_data(f));
    let mags = record(&mut errors, "root_magnitudes", root_magnitudes(&h1, &opts.precision));

    if f.torus().radicand() != 1 {
        flags.push(FLAG_RADICAND.to_string());
        notes.push(format!(
            "J has entries in Q(sqrt {}); analytic coefficients lie in Q(sqrt {})(i)",
            f.torus().radicand(),
            f.torus().radicand()
        ));
    }
    if !ctx.projective() {
        flags.push(FLAG_NOT_PROJECTIVE.to_string());
        notes.push("no ample class found: amplified/polarized verdicts are inconclusive".into());
    }

    let (mut finite_order_v, mut unity, mut u_f, mut fixed) = (None, None, None, None);
    let (mut amp, mut pol, mut degrees) = (None, None, None);
    let (mut ns_charpoly, mut ns_one) = (None, None);
    if surjective {
        if let Some(ed) = &ed {
            finite_order_v = record(&mut errors, "finite_order", finite_order_from(f, ed)).flatten();
            unity = Some(ed.u_count == 0);
            u_f = Some(ed.u_count);
            if let Some(m) = &mags {
                degrees = Some(degrees_from(ed, m, n));
            }
        }
        fixed = record(&mut errors, "fixed_subtorus", fixed_subtorus(f))
            .map(|o| o.map(|fs| FixedSubtorusSummary { k: fs.k, rank: fs.subtorus.rank() }));
        if let Some(action) = record(&mut errors, "ns_action", ns_action_in(f, &ctx.ns)) {
            ns_one = Some(ns_has_unit_eigenvalue(&action));
            ns_charpoly = record(&mut errors, "ns_action", action.charpoly());
        }
        amp = match &ed {
            Some(ed) => record(&mut errors, "amplified", amplified_with(f, ctx, opts, ed)),
            None => None,
        };
        if let Some(m) = &mags {
            pol = record(&mut errors, "polarized", polarized_in(f, ctx, m, opts));
        }
    } else {
        errors.push(ReportError {
            operation: "classify",
            code: Error::NotSurjective.code(),
            message: Error::NotSurjective.to_string(),
        });
    }
    let serre_consistent = pol.as_ref().is_none_or(|p| p.serre_consistent);
    if !serre_consistent {
        flags.push(FLAG_SERRE_INCONSISTENT.to_string());
    }
    let entropy = degrees.as_ref().and_then(entropy);
    if let (Some(false), Some(d)) = (unity, &degrees) {
        if !d.equal_consecutive_pairs.is_empty() {
            flags.push(FLAG_EQUAL_DEGREES_NOT_UNITY_FREE.to_string());
            let vals: Vec<String> = d.degrees.iter().map(|e| format!("{:.6}", e.approx)).collect();
            notes.push(format!(
                "not unity-free, and dynamical degrees ({}) are not pairwise distinct (equal at j = {:?}); \
                 this contradicts the reading that such maps have distinct degrees",
                vals.join(", "),
                d.pair_indices()
            ));
        }
    }
    let h1_class = if surjective { record(&mut errors, "h1_poly_class", h1_poly_class(&h1)) } else { None };
    ClassificationReport {
        dimension: n,
        surjective,
        isogeny: f.is_isogeny(),
        det: f.det(),
        finite_order: finite_order_v,
        unity_free: unity,
        u_f,
        fixed_subtorus: fixed.flatten(),
        amplified: amp,
        polarized: pol,
        serre_consistent,
        equal_consecutive_pairs: degrees.as_ref().map(|d| d.pair_indices()).unwrap_or_default(),
        equal_pair_evidence: degrees.as_ref().map(|d| d.equal_consecutive_pairs.clone()).unwrap_or_default(),
        dynamical_degrees: degrees.map(|d| d.degrees).unwrap_or_default(),
        entropy,
        lefschetz: lefschetz_number(f),
        h1_poly_class: h1_class,
        h1_charpoly: h1,
        analytic_charpoly: ed.map(|e| e.analytic_charpoly),
        h1_magnitudes: mags,
        ns_rank: ctx.ns.rank,
        ns_action_charpoly: ns_charpoly,
        ns_has_eigenvalue_one: ns_one,
        projective_witness: ctx.ample.witness.clone().map(|class| AmpleWitness { class }),
        flags,
        notes,
        errors,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: &'static str,
    pub detail: String,
}

fn violation(rule: &'static str, detail: impl Into<String>) -> Violation {
    Violation { rule, detail: detail.into() }
}

/// Report-level consistency rules. "Inconclusive" never violates anything.
pub fn check_report(r: &ClassificationReport) -> Vec<Violation> {
    let mut v = Vec::new();
    let amp = r.amplified.as_ref().map(|a| a.verdict);
    let pol = r.polarized.as_ref().map(|p| p.verdict);
    if pol == Some(Verdict::Yes) && amp != Some(Verdict::Yes) {
        v.push(violation("polarized=>amplified", format!("amplified = {amp:?}")));
    }
    if amp == Some(Verdict::Yes) && r.unity_free != Some(true) {
        v.push(violation("amplified=>unity-free", format!("unity_free = {:?}", r.unity_free)));
    }
    if r.unity_free == Some(true) && r.finite_order.is_some() {
        v.push(violation("unity-free=>infinite-order", format!("order {:?}", r.finite_order)));
    }
    if let Some(u) = r.unity_free {
        if u == r.fixed_subtorus.is_some() {
            v.push(violation(
                "fixed-subtorus<=>not-unity-free",
                format!("unity_free = {u}, fixed subtorus = {:?}", r.fixed_subtorus),
            ));
        }
    }
    if r.dimension == 2 && r.unity_free == Some(true) && amp == Some(Verdict::No) {
        v.push(violation("surface-unity-free=>amplified", "amplified = no"));
    }
    if let Some(a) = &r.amplified {
        if a.verdict == Verdict::No && r.ns_has_eigenvalue_one == Some(false) {
            v.push(violation("not-amplified=>ns-eigenvalue-1", "1 is not an NS eigenvalue"));
        }
    }
    if !r.serre_consistent {
        v.push(violation("serre", "ample q-eigenclass with certified magnitude mismatch"));
    }
    if let (Some(p), Some(m)) = (&r.polarized, &r.h1_magnitudes) {
        if let (Verdict::Yes, Some(q)) = (p.verdict, &p.q) {
            if !serre_test(m, q).passed {
                v.push(violation("polarized=>serre", format!("q = {q}")));
            }
            let qr = BigRational::from_integer(q.clone());
            for d in &r.dynamical_degrees {
                let qj = num_traits::pow(qr.clone(), d.j);
                if !d.contains(&qj) {
                    v.push(violation("polarized=>lambda_j=q^j", format!("j = {}", d.j)));
                }
            }
        }
    }
    if let Some(first) = r.dynamical_degrees.first() {
        if !first.lower.is_one() || !first.upper.is_one() {
            v.push(violation("lambda_0=1", "λ_0 != 1"));
        }
    }
    if r.surjective {
        if let Some(last) = r.dynamical_degrees.last() {
            let det = BigRational::from_integer(r.det.abs());
            if !last.contains(&det) {
                v.push(violation("lambda_n=|det M|", format!("|det M| = {det} outside λ_n")));
            }
        }
    }
    for p in &r.equal_pair_evidence {
        if !p.intervals_coincide {
            v.push(violation("equal-pair-intervals", format!("j = {}", p.j)));
        }
    }
    v
}

/// Builds the report for `f` and checks the implication chain on it.
pub fn verify_chain(f: &TorusEndomorphism) -> Vec<Violation> {
    check_report(&full_report(f))
}

pub fn verify_chain_in(
    f: &TorusEndomorphism,
    ctx: &TorusContext,
    opts: &ClassifyOptions,
) -> (ClassificationReport, Vec<Violation>) {
    let r = full_report_in(f, ctx, opts);
    let v = check_report(&r);
    (r, v)
}

/// Per-iterate verdicts gathered by [`verify_iterates`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterateRow {
    pub k: u64,
    pub unity_free: bool,
    pub amplified: Verdict,
    pub polarized: Verdict,
    #[serde(serialize_with = "ser_opt_big")]
    pub q: Option<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterateCheck {
    pub rows: Vec<IterateRow>,
    /// Pairs `(a, b)`, `kmax >= a > b >= 0`, with `det(M^a - M^b) = 0`,
    /// i.e. `{x : f^a(x) = f^b(x)}` infinite.
    pub infinite_difference_sets: Vec<(u64, u64)>,
    pub violations: Vec<Violation>,
}

/// `Σ_{i<k} (f^i)^* L`: transports an amplified witness of `f` to `f^k`.
fn transported_witness(f: &TorusEndomorphism, l: &[BigRational], k: u64) -> Vec<BigRational> {
    let p = pullback_matrix(f);
    let mut term = l.to_vec();
    let mut sum = vec![BigRational::zero(); l.len()];
    for _ in 0..k {
        for (s, t) in sum.iter_mut().zip(&term) {
            *s += t;
        }
        term = p.mul_vec(&term);
    }
    sum
}

pub fn verify_iterates(f: &TorusEndomorphism, kmax: u64) -> Result<IterateCheck> {
    let opts = ClassifyOptions::default();
    let ctx = TorusContext::new(f.torus(), &opts);
    verify_iterates_in(f, kmax, &ctx, &opts)
}

pub fn verify_iterates_in(
    f: &TorusEndomorphism,
    kmax: u64,
    ctx: &TorusContext,
    opts: &ClassifyOptions,
) -> Result<IterateCheck> {
    f.require_surjective()?;
    let t = f.torus();
    let ed = eigen_data(f)?;
    let base_uf = ed.u_count == 0;
    let base_amp = amplified_with(f, ctx, opts, &ed)?;
    let mags = root_magnitudes(&ed.h1_charpoly, &opts.precision)?;
    let base_pol = polarized_in(f, ctx, &mags, opts)?;
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for k in 1..=kmax {
        let g = f.iterate(k)?;
        let ged = eigen_data(&g)?;
        let uf = ged.u_count == 0;
        if uf != base_uf {
            violations.push(violation("unity-free-stable", format!("k = {k}")));
        }
        let mut amp = amplified_with(&g, ctx, opts, &ged)?.verdict;
        if base_amp.verdict == Verdict::Yes && amp != Verdict::Yes {
            if let Some(l) = &base_amp.witness {
                let lk = transported_witness(f, l, k);
                if is_ample(t, &difference_class(&g, &lk))? {
                    amp = Verdict::Yes;
                }
            }
            if amp != Verdict::Yes {
                violations.push(violation("amplified-stable", format!("k = {k}: {amp:?}")));
            }
        }
        let gm = mags.power(k as u32);
        let gpol = polarized_in(&g, ctx, &gm, opts)?;
        let mut pol = gpol.verdict;
        let mut q = gpol.q.clone();
        if let (Verdict::Yes, Some(bq), Some(w)) = (base_pol.verdict, &base_pol.q, &base_pol.witness) {
            let qk = bq.pow(k as u32);
            if pol != Verdict::Yes {
                let qr = BigRational::from_integer(qk.clone());
                let scaled: Vec<BigRational> = w.iter().map(|x| x * &qr).collect();
                if pullback(&g, w) == scaled && is_ample(t, w)? {
                    pol = Verdict::Yes;
                    q = Some(qk.clone());
                }
            }
            if pol != Verdict::Yes || q.as_ref() != Some(&qk) {
                violations.push(violation("polarized-stable", format!("k = {k}: q = {q:?}, expected {qk}")));
            }
        }
        if amp == Verdict::Yes && !uf {
            violations.push(violation("amplified=>unity-free", format!("iterate k = {k}")));
        }
        rows.push(IterateRow { k, unity_free: uf, amplified: amp, polarized: pol, q });
    }
    let mut infinite = Vec::new();
    for a in 1..=kmax {
        for b in 0..a {
            if difference_det(f, a, b).is_zero() {
                infinite.push((a, b));
            }
        }
    }
    if base_amp.verdict == Verdict::Yes && !infinite.is_empty() {
        violations.push(violation("amplified=>finite-difference-sets", format!("det(M^a - M^b) = 0 for {infinite:?}")));
    }
    Ok(IterateCheck { rows, infinite_difference_sets: infinite, violations })
}

/// Duality for automorphisms: `λ_j(f) = λ_{n-j}(f^{-1})`, by interval
/// overlap. Returns the failing indices.
pub fn automorphism_duality_failures(f: &TorusEndomorphism) -> Result<Vec<usize>> {
    if !f.det().abs().is_one() {
        return Err(Error::domain("duality check needs an automorphism"));
    }
    let inv = f
        .matrix()
        .to_rational()
        .inverse()
        .and_then(|m| m.to_integer())
        .ok_or_else(|| Error::InvariantViolation("unimodular inverse not integral".into()))?;
    let g = make_endo(f.torus(), inv, vec![BigRational::zero(); f.torus().rank()])?;
    let df = dynamical_degrees(f)?;
    let dg = dynamical_degrees(&g)?;
    let n = f.dim();
    Ok((0..=n).filter(|&j| !df.degrees[j].overlaps(&dg.degrees[n - j])).collect())
}

/// Text rendering of a report.
pub fn render_text(r: &ClassificationReport) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    let yn = |v: Option<bool>| match v {
        Some(true) => "yes".to_string(),
        Some(false) => "no".to_string(),
        None => "n/a".to_string(),
    };
    let verdict = |v: Verdict| match v {
        Verdict::Yes => "yes",
        Verdict::No => "no",
        Verdict::Inconclusive => "inconclusive",
    };
    let _ = writeln!(s, "dimension:        {}", r.dimension);
    let _ = writeln!(s, "det M:            {}", r.det);
    let _ = writeln!(s, "surjective:       {}", yn(Some(r.surjective)));
    let _ = writeln!(s, "isogeny:          {}", yn(Some(r.isogeny)));
    let _ = writeln!(
        s,
        "finite order:     {}",
        r.finite_order.map_or("none (infinite order)".to_string(), |k| k.to_string())
    );
    let _ =
        writeln!(s, "unity-free:       {} (u_f = {})", yn(r.unity_free), r.u_f.map_or("n/a".into(), |u| u.to_string()));
    if let Some(fs) = &r.fixed_subtorus {
        let _ = writeln!(s, "fixed subtorus:   real rank {} fixed pointwise by f^{}", fs.rank, fs.k);
    }
    if let Some(a) = &r.amplified {
        let _ = writeln!(s, "amplified:        {} [{:?}]", verdict(a.verdict), a.path);
    }
    if let Some(p) = &r.polarized {
        let q = p.q.as_ref().map_or(String::new(), |q| format!(", q = {q}"));
        let _ = writeln!(s, "polarized:        {} [{:?}{q}]", verdict(p.verdict), p.path);
    }
    let _ = writeln!(s, "serre consistent: {}", yn(Some(r.serre_consistent)));
    let _ = writeln!(s, "h1 charpoly:      {}", r.h1_charpoly);
    if let Some(a) = &r.analytic_charpoly {
        let _ = writeln!(s, "analytic charpoly: {a}");
    }
    if let Some(c) = &r.h1_poly_class {
        let _ = writeln!(s, "h1 class:         {}", serde_plain_class(*c));
    }
    let _ = writeln!(s, "lefschetz:        {}", r.lefschetz);
    let _ = writeln!(s, "NS rank:          {}", r.ns_rank);
    if let Some(c) = &r.ns_action_charpoly {
        let _ = writeln!(s, "NS action charpoly: {c}");
    }
    for d in &r.dynamical_degrees {
        let _ = writeln!(s, "lambda_{}:         {:.9}  [{}, {}]", d.j, d.approx, to_f64(&d.lower), to_f64(&d.upper));
    }
    if !r.equal_consecutive_pairs.is_empty() {
        let _ = writeln!(s, "equal consecutive degrees at j = {:?}", r.equal_consecutive_pairs);
    }
    if let Some(e) = &r.entropy {
        let _ = writeln!(s, "entropy (log lambda_1): {:.9}", e.approx);
    }
    for f in &r.flags {
        let _ = writeln!(s, "flag: {f}");
    }
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    for e in &r.errors {
        let _ = writeln!(s, "error [{}] {}: {}", e.code, e.operation, e.message);
    }
    s
}

fn serde_plain_class(c: PolynomialClass) -> &'static str {
    match c {
        PolynomialClass::CyclotomicProduct => "cyclotomic-product",
        PolynomialClass::Salem => "salem",
        PolynomialClass::OffCircleReciprocal => "off-circle-reciprocal",
        PolynomialClass::Other => "other",
    }
}
