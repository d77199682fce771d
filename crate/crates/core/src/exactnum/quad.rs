use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::scalar::FieldScalar;

/// Element `a + b sqrt(d)` of a real quadratic field, `d >= 2` squarefree.
///
/// Elements with `b = 0` are rational and carry `d = 0`, so they combine with
/// any field. Combining two irrational elements with different radicands is a
/// logic error and panics; callers validate radicands at construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealQuad {
    a: BigRational,
    b: BigRational,
    d: u32,
}

fn merge_radicand(x: u32, y: u32) -> u32 {
    match (x, y) {
        (0, y) => y,
        (x, 0) => x,
        (x, y) if x == y => x,
        (x, y) => panic!("mixed quadratic fields sqrt({x}) and sqrt({y})"),
    }
}

impl RealQuad {
    pub fn new(a: BigRational, b: BigRational, d: u32) -> Self {
        if b.is_zero() || d == 0 {
            assert!(b.is_zero() || d != 0, "irrational part without radicand");
            RealQuad { a, b: BigRational::zero(), d: 0 }
        } else {
            assert!(d >= 2, "radicand must be >= 2");
            RealQuad { a, b, d }
        }
    }

    pub fn rational(a: BigRational) -> Self {
        RealQuad { a, b: BigRational::zero(), d: 0 }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    /// Radicand, or 0 for rational elements.
    pub fn radicand(&self) -> u32 {
        self.d
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn conj(&self) -> Self {
        RealQuad { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let db2 = &self.b * &self.b * BigRational::from_integer(self.d.into());
        if a2 > db2 {
            sa
        } else {
            sb
        }
    }

    pub fn to_f64(&self) -> f64 {
        super::scalar::to_f64(&self.a) + super::scalar::to_f64(&self.b) * f64::from(self.d).sqrt()
    }
}

fn sign(q: &BigRational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

impl From<BigRational> for RealQuad {
    fn from(a: BigRational) -> Self {
        RealQuad::rational(a)
    }
}

impl Zero for RealQuad {
    fn zero() -> Self {
        RealQuad::rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for RealQuad {
    fn one() -> Self {
        RealQuad::rational(BigRational::one())
    }
}

impl Add for RealQuad {
    type Output = RealQuad;
    fn add(self, o: RealQuad) -> RealQuad {
        let d = merge_radicand(self.d, o.d);
        RealQuad::new(self.a + o.a, self.b + o.b, d)
    }
}

impl Sub for RealQuad {
    type Output = RealQuad;
    fn sub(self, o: RealQuad) -> RealQuad {
        let d = merge_radicand(self.d, o.d);
        RealQuad::new(self.a - o.a, self.b - o.b, d)
    }
}

impl Neg for RealQuad {
    type Output = RealQuad;
    fn neg(self) -> RealQuad {
        RealQuad { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Mul for RealQuad {
    type Output = RealQuad;
    fn mul(self, o: RealQuad) -> RealQuad {
        let d = merge_radicand(self.d, o.d);
        let cross = if d == 0 { BigRational::zero() } else { &self.b * &o.b * BigRational::from_integer(d.into()) };
        let a = &self.a * &o.a + cross;
        let b = &self.a * &o.b + &self.b * &o.a;
        RealQuad::new(a, b, d)
    }
}

impl Div for RealQuad {
    type Output = RealQuad;
    fn div(self, o: RealQuad) -> RealQuad {
        assert!(!o.is_zero(), "division by zero in Q(sqrt d)");
        let norm = &o.a * &o.a - &o.b * &o.b * BigRational::from_integer(o.d.into());
        let inv = RealQuad::new(&o.a / &norm, -(&o.b / &norm), o.d);
        self * inv
    }
}

impl FieldScalar for RealQuad {}

impl fmt::Display for RealQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{}", self.a)?;
            if self.b.is_positive() {
                write!(f, "+")?;
            }
        }
        write!(f, "{}*sqrt{}", self.b, self.d)
    }
}

impl Serialize for RealQuad {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::rat;

    fn q(a: i64, b: i64, d: u32) -> RealQuad {
        RealQuad::new(rat(a, 1), rat(b, 1), d)
    }

    #[test]
    fn field_arithmetic() {
        let x = q(1, 1, 3);
        let y = q(2, -1, 3);
        // (1 + r)(2 - r) = 2 - r + 2r - 3 = -1 + r
        assert_eq!(x.clone() * y.clone(), q(-1, 1, 3));
        assert_eq!((x.clone() / y.clone()) * y, x);
        let s = q(0, 1, 3);
        assert_eq!(s.clone() * s, q(3, 0, 0));
    }

    #[test]
    fn exact_sign() {
        assert_eq!(q(2, -1, 3).signum(), 1); // 2 - 1.732
        assert_eq!(q(1, -1, 3).signum(), -1);
        assert_eq!(q(-7, 4, 3).signum(), -1); // -7 + 6.93
        assert_eq!(q(0, 0, 0).signum(), 0);
    }

    #[test]
    #[should_panic]
    fn mixed_radicands_panic() {
        let _ = q(0, 1, 2) + q(0, 1, 3);
    }
}
