use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Commutative ring element with exact arithmetic.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Debug
        + Display
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
{
}

/// Field element: every nonzero element is invertible.
pub trait FieldScalar: Scalar + Div<Output = Self> {
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl FieldScalar for BigRational {}
impl FieldScalar for f64 {}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Parses `"p"` or `"p/q"` into a reduced rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Representative of `q mod 1` in `[0, 1)`.
pub fn frac_mod1(q: &BigRational) -> BigRational {
    q - q.floor()
}

pub fn abs_rat(q: &BigRational) -> BigRational {
    q.abs()
}

/// Rational lower and upper bounds for `sqrt(q)`, `q >= 0`, accurate to
/// `2^-bits`. Exact when `q` is the square of a rational.
pub fn sqrt_bounds(q: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(!q.is_negative(), "sqrt of negative rational");
    if q.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    let (n, d) = (q.numer(), q.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        let r = BigRational::new(sn, sd);
        return (r.clone(), r);
    }
    let scale = BigInt::one() << (2 * bits as usize);
    let scaled = q * BigRational::from_integer(scale);
    let lo_int = scaled.floor().to_integer().sqrt();
    let ceil = scaled.ceil().to_integer();
    let mut hi_int = ceil.sqrt();
    if &hi_int * &hi_int < ceil {
        hi_int += 1;
    }
    let den = BigInt::one() << bits as usize;
    (BigRational::new(lo_int, den.clone()), BigRational::new(hi_int, den))
}

/// Rounds `q` to the nearest multiple of `2^-bits`.
pub fn round_dyadic(q: &BigRational, bits: u32) -> BigRational {
    let den = BigInt::one() << bits as usize;
    let scaled = q * BigRational::from_integer(den.clone());
    BigRational::new(scaled.round().to_integer(), den)
}

pub fn to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| if q.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

pub fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

/// Serde helpers writing rationals as `"p/q"` strings.
pub mod ser {
    use num_rational::BigRational;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn rational_vec<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&q.to_string())?;
        }
        seq.end()
    }

    pub fn rational_vecs<S: Serializer>(v: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for row in v {
            let row: Vec<String> = row.iter().map(ToString::to_string).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }

    pub fn opt_rational_vec<S: Serializer>(v: &Option<Vec<BigRational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => rational_vec(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn opt_rational<S: Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(q) => rational(q, s),
            None => s.serialize_none(),
        }
    }
}
