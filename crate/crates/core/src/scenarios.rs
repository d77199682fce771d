//! Builders for CM elliptic curves, their products, endomorphisms given by
//! matrices over a CM order, the named worked examples, and seeded random
//! samples.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::endo::{make_endo, TorusEndomorphism};
use crate::error::{Error, Result};
use crate::exactnum::scalar::rat;
use crate::matlin::{IntMatrix, Matrix, RationalMatrix};
use crate::torus::{make_subtorus, make_torus_quadratic, ComplexTorus, Subtorus};

/// An imaginary quadratic order `Z[α]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CMOrder {
    /// `Z[i]`.
    Gaussian,
    /// `Z[ω]`, `ω² + ω + 1 = 0`.
    Eisenstein,
    /// `Z[sqrt(-d)]`, `d >= 1`.
    Quadratic(u32),
}

impl fmt::Display for CMOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CMOrder::Gaussian => write!(f, "gaussian"),
            CMOrder::Eisenstein => write!(f, "eisenstein"),
            CMOrder::Quadratic(d) => write!(f, "quadratic({d})"),
        }
    }
}

impl std::str::FromStr for CMOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "gaussian" => return Ok(CMOrder::Gaussian),
            "eisenstein" => return Ok(CMOrder::Eisenstein),
            _ => {}
        }
        let inner = s
            .strip_prefix("quadratic(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix("quadratic:"))
            .ok_or_else(|| Error::domain(format!("unknown CM order '{s}'")))?;
        let d: u32 = inner
            .trim()
            .trim_start_matches('-')
            .parse()
            .map_err(|_| Error::domain(format!("bad quadratic order '{s}'")))?;
        CMOrder::quadratic(d)
    }
}

impl CMOrder {
    pub fn quadratic(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain("quadratic(-d) needs d >= 1"));
        }
        Ok(CMOrder::Quadratic(d))
    }

    /// Multiplication by `α` on the basis `(1, α)`.
    pub fn generator(&self) -> IntMatrix {
        match *self {
            CMOrder::Gaussian => IntMatrix::from_i64(&[&[0, -1], &[1, 0]]),
            CMOrder::Eisenstein => IntMatrix::from_i64(&[&[0, -1], &[1, -1]]),
            CMOrder::Quadratic(d) => IntMatrix::from_i64(&[&[0, -i64::from(d)], &[1, 0]]),
        }
    }

    /// `α² = c0 + c1 α`.
    fn square_of_generator(&self) -> (BigRational, BigRational) {
        match *self {
            CMOrder::Gaussian => (rat(-1, 1), rat(0, 1)),
            CMOrder::Eisenstein => (rat(-1, 1), rat(-1, 1)),
            CMOrder::Quadratic(d) => (rat(-i64::from(d), 1), rat(0, 1)),
        }
    }

    /// `J` on the basis `(1, α)`: `i = (2ω + 1)/sqrt 3` resp. `sqrt(-d)/sqrt d`.
    fn complex_structure(&self) -> (RationalMatrix, RationalMatrix, u32) {
        let g = self.generator().to_rational();
        match *self {
            CMOrder::Gaussian => (g, RationalMatrix::zeros(2, 2), 1),
            CMOrder::Eisenstein => {
                let b = (&g.scale(&rat(2, 1)) + &RationalMatrix::identity(2)).scale(&rat(1, 3));
                (RationalMatrix::zeros(2, 2), b, 3)
            }
            CMOrder::Quadratic(d) => (RationalMatrix::zeros(2, 2), g.scale(&rat(1, i64::from(d))), d),
        }
    }
}

pub fn elliptic_curve(order: CMOrder) -> ComplexTorus {
    let (a, b, d) = order.complex_structure();
    let t = make_torus_quadratic(a, b, d).expect("CM complex structure squares to -I");
    let g = order.generator().to_rational();
    assert!(t.commutes_with(&g), "CM action must be holomorphic");
    t
}

pub fn product(tori: &[ComplexTorus]) -> Result<ComplexTorus> {
    ComplexTorus::product(tori)
}

/// `E^n` for the curve of `order`.
pub fn power(order: CMOrder, n: usize) -> Result<ComplexTorus> {
    product(&vec![elliptic_curve(order); n])
}

/// `a + b α` with rational coordinates; only integral elements lie in the
/// order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CMElement {
    pub a: BigRational,
    pub b: BigRational,
}

impl CMElement {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        CMElement { a, b }
    }

    pub fn int(a: i64, b: i64) -> Self {
        CMElement { a: rat(a, 1), b: rat(b, 1) }
    }

    pub fn zero() -> Self {
        CMElement::int(0, 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        CMElement { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn mul(&self, o: &Self, order: CMOrder) -> Self {
        let (c0, c1) = order.square_of_generator();
        let bd = &self.b * &o.b;
        CMElement { a: &self.a * &o.a + &bd * c0, b: &self.a * &o.b + &self.b * &o.a + &bd * c1 }
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// `a I + b g` as an integer 2x2 matrix.
    pub fn realify(&self, order: CMOrder) -> Result<IntMatrix> {
        if !self.is_integral() {
            return Err(Error::domain(format!("{self} does not lie in the order {order}")));
        }
        let g = order.generator();
        Ok(&IntMatrix::identity(2).scale(&self.a.to_integer()) + &g.scale(&self.b.to_integer()))
    }
}

impl fmt::Display for CMElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*alpha", self.a, self.b)
    }
}

/// Square matrix over the order.
pub type CMMatrix = Vec<Vec<CMElement>>;

pub fn cm_matrix_mul(x: &CMMatrix, y: &CMMatrix, order: CMOrder) -> CMMatrix {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n).map(|j| (0..n).fold(CMElement::zero(), |acc, k| acc.add(&x[i][k].mul(&y[k][j], order)))).collect()
        })
        .collect()
}

/// Realification of an `n x n` matrix over the order as a `2n x 2n`
/// integer matrix.
pub fn realify_matrix(order: CMOrder, b: &CMMatrix) -> Result<IntMatrix> {
    let n = b.len();
    if b.iter().any(|row| row.len() != n) {
        return Err(Error::domain("CM matrix must be square"));
    }
    let mut m = IntMatrix::zeros(2 * n, 2 * n);
    for (i, row) in b.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let r = e.realify(order)?;
            for a in 0..2 {
                for c in 0..2 {
                    m.set(2 * i + a, 2 * j + c, r.get(a, c).clone());
                }
            }
        }
    }
    Ok(m)
}

/// The endomorphism of `E^n` given by `B` (translation zero).
pub fn cm_matrix_endo(order: CMOrder, b: &CMMatrix) -> Result<TorusEndomorphism> {
    let n = b.len();
    if n == 0 {
        return Err(Error::domain("empty CM matrix"));
    }
    let m = realify_matrix(order, b)?;
    let t = power(order, n)?;
    make_endo(&t, m, vec![BigRational::zero(); 2 * n])
}

fn int_cm_matrix(rows: &[&[(i64, i64)]]) -> CMMatrix {
    rows.iter().map(|r| r.iter().map(|&(a, b)| CMElement::int(a, b)).collect()).collect()
}

fn int_diag(entries: &[(i64, i64)]) -> CMMatrix {
    let n = entries.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { CMElement::int(entries[i].0, entries[i].1) } else { CMElement::zero() })
                .collect()
        })
        .collect()
}

/// A named worked example.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Example {
    pub name: &'static str,
    pub description: &'static str,
    #[serde(skip)]
    pub endo: TorusEndomorphism,
    /// Named sublattices (integer column lists) for quotient/orbit commands.
    #[serde(skip)]
    pub sublattices: BTreeMap<String, IntMatrix>,
}

fn surface_sublattices() -> BTreeMap<String, IntMatrix> {
    BTreeMap::from([
        ("first_factor".to_string(), IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]])),
        ("second_factor".to_string(), IntMatrix::from_i64(&[&[0, 0], &[0, 0], &[1, 0], &[0, 1]])),
        ("diagonal".to_string(), IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[1, 0], &[0, 1]])),
    ])
}

fn example(name: &'static str, description: &'static str, order: CMOrder, b: CMMatrix) -> Example {
    let endo = cm_matrix_endo(order, &b).expect("built-in example is valid");
    let sublattices = if b.len() == 2 {
        surface_sublattices()
    } else {
        let d = 2 * b.len();
        BTreeMap::from([("first_factor".to_string(), Matrix::from_fn(d, 2, |i, j| BigInt::from(u8::from(i == j))))])
    };
    Example { name, description, endo, sublattices }
}

/// The named examples, keyed by name.
pub fn paper_examples() -> BTreeMap<&'static str, Example> {
    use CMOrder::*;
    let mut out = BTreeMap::new();
    let mut add = |e: Example| {
        out.insert(e.name, e);
    };
    add(example("mult_2_1", "[2] x [1] on E x E, E = C/Z[i]", Gaussian, int_diag(&[(2, 0), (1, 0)])));
    add(example("mult_2_3", "[2] x [3] on E x E, E = C/Z[i]", Gaussian, int_diag(&[(2, 0), (3, 0)])));
    add(example(
        "e4_auto",
        "automorphism (e2, e3, e4, -e1 + 3e2 + 4e3 + 3e4) of E^4, E = C/Z[i]",
        Gaussian,
        int_cm_matrix(&[
            &[(0, 0), (0, 0), (0, 0), (-1, 0)],
            &[(1, 0), (0, 0), (0, 0), (3, 0)],
            &[(0, 0), (1, 0), (0, 0), (4, 0)],
            &[(0, 0), (0, 0), (1, 0), (3, 0)],
        ]),
    ));
    add(example(
        "shear",
        "(a1, a2) -> (a1 + a2, a2) on E x E, E = C/Z[i]",
        Gaussian,
        int_cm_matrix(&[&[(1, 0), (1, 0)], &[(0, 0), (1, 0)]]),
    ));
    add(example("gtz_diag", "(1 + 2i) x (2 + i) on E x E, E = C/Z[i]", Gaussian, int_diag(&[(1, 2), (2, 1)])));
    add(example(
        "salem_surface",
        "[[2, 1], [1, 1]] acting on E x E, E = C/Z[i]",
        Gaussian,
        int_cm_matrix(&[&[(2, 0), (1, 0)], &[(1, 0), (1, 0)]]),
    ));
    add(example("mult_by_i", "multiplication by i on E = C/Z[i]", Gaussian, int_diag(&[(0, 1)])));
    add(example("mult_2", "[2] on E = C/Z[i]", Gaussian, int_diag(&[(2, 0)])));
    add(example("mult_2_2", "[2] x [2] on E x E, E = C/Z[i]", Gaussian, int_diag(&[(2, 0), (2, 0)])));
    add(example(
        "mult_by_omega",
        "multiplication by a cube root of unity on E = C/Z[omega]",
        Eisenstein,
        int_diag(&[(0, 1)]),
    ));
    let mixed = product(&[elliptic_curve(Gaussian), elliptic_curve(Eisenstein)]).expect("compatible fields");
    let endo = make_endo(&mixed, IntMatrix::diag(&[2, 2, 3, 3].map(BigInt::from)), vec![BigRational::zero(); 4])
        .expect("scalar maps are holomorphic");
    add(Example {
        name: "mixed_2_3",
        description: "[2] x [3] on E_i x E_omega (Picard number 2)",
        endo,
        sublattices: surface_sublattices(),
    });
    out
}

pub fn paper_example(name: &str) -> Result<Example> {
    paper_examples().remove(name).ok_or_else(|| Error::NotFound(format!("no example named '{name}'")))
}

pub const RANDOM_REJECTION_BUDGET: usize = 1000;

/// A random `n x n` matrix over the order with coefficients in `[-H, H]`,
/// rejecting singular draws; deterministic in `seed`.
pub fn random_cm_matrix(n: usize, order: CMOrder, height: u32, seed: u64) -> Result<CMMatrix> {
    if n == 0 || n > 4 {
        return Err(Error::domain(format!("random_endo supports 1 <= n <= 4, got {n}")));
    }
    if height == 0 {
        return Err(Error::domain("height bound must be at least 1"));
    }
    let h = i64::from(height);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_REJECTION_BUDGET {
        let b: CMMatrix = (0..n)
            .map(|_| (0..n).map(|_| CMElement::int(rng.gen_range(-h..=h), rng.gen_range(-h..=h))).collect())
            .collect();
        let m = realify_matrix(order, &b)?;
        if !m.det_int()?.is_zero() {
            return Ok(b);
        }
    }
    Err(Error::Resource(format!("no nonsingular sample after {RANDOM_REJECTION_BUDGET} draws")))
}

pub fn random_endo(n: usize, order: CMOrder, height: u32, seed: u64) -> Result<TorusEndomorphism> {
    cm_matrix_endo(order, &random_cm_matrix(n, order, height, seed)?)
}

/// An endomorphism together with a subtorus it maps into itself.
#[derive(Clone, Debug)]
pub struct InvariantPair {
    pub endo: TorusEndomorphism,
    pub subtorus: Subtorus,
}

/// A random endomorphism of `E^n` with an invariant subtorus of random
/// dimension `k`, `1 <= k < n`: a block upper-triangular matrix over the
/// order, preserving `E^k x 0`, conjugated by a random unimodular matrix over
/// the order so the subtorus sits in general position.
pub fn random_invariant_pair(n: usize, order: CMOrder, height: u32, seed: u64) -> Result<InvariantPair> {
    if !(2..=4).contains(&n) {
        return Err(Error::domain(format!("invariant pairs need 2 <= n <= 4, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..n);
    let b = random_cm_matrix(n, order, height, rng.gen())?;
    let b: CMMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i >= k && j < k { CMElement::zero() } else { b[i][j].clone() }).collect())
        .collect();
    let mut u: CMMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { CMElement::int(1, 0) } else { CMElement::zero() }).collect())
        .collect();
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = CMElement::int(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
        let row_j = u[j].clone();
        for (x, y) in u[i].iter_mut().zip(&row_j) {
            *x = x.add(&y.mul(&c, order));
        }
    }
    let ur = realify_matrix(order, &u)?;
    let ur_inv = ur
        .to_rational()
        .inverse()
        .and_then(|m| m.to_integer())
        .ok_or_else(|| Error::InvariantViolation("elementary product is not unimodular".into()))?;
    let m = &(&ur * &realify_matrix(order, &b)?) * &ur_inv;
    let t = power(order, n)?;
    let endo = make_endo(&t, m, vec![BigRational::zero(); 2 * n])?;
    let w = ur.select(&(0..2 * n).collect::<Vec<_>>(), &(0..2 * k).collect::<Vec<_>>());
    let subtorus = make_subtorus(&t, &w)?;
    Ok(InvariantPair { endo, subtorus })
}

/// Per-sample seed for the `index`-th draw of a sweep (SplitMix64 mix).
pub fn sample_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
