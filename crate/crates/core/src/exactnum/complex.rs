use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::quad::RealQuad;
use super::scalar::FieldScalar;

/// `re + im * i` over a real field `R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cx<R> {
    pub re: R,
    pub im: R,
}

/// Element of `Q(i)`.
pub type GaussianRational = Cx<BigRational>;

/// Element of `Q(sqrt D, i)`.
pub type QuadComplex = Cx<RealQuad>;

impl<R: FieldScalar> Cx<R> {
    pub fn new(re: R, im: R) -> Self {
        Cx { re, im }
    }

    pub fn real(re: R) -> Self {
        Cx { re, im: R::zero() }
    }

    pub fn i() -> Self {
        Cx { re: R::zero(), im: R::one() }
    }

    pub fn conj(&self) -> Self {
        Cx { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sq(&self) -> R {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }
}

impl<R: FieldScalar> Zero for Cx<R> {
    fn zero() -> Self {
        Cx { re: R::zero(), im: R::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<R: FieldScalar> One for Cx<R> {
    fn one() -> Self {
        Cx { re: R::one(), im: R::zero() }
    }
}

impl<R: FieldScalar> Add for Cx<R> {
    type Output = Cx<R>;
    fn add(self, o: Self) -> Self {
        Cx { re: self.re + o.re, im: self.im + o.im }
    }
}

impl<R: FieldScalar> Sub for Cx<R> {
    type Output = Cx<R>;
    fn sub(self, o: Self) -> Self {
        Cx { re: self.re - o.re, im: self.im - o.im }
    }
}

impl<R: FieldScalar> Neg for Cx<R> {
    type Output = Cx<R>;
    fn neg(self) -> Self {
        Cx { re: -self.re, im: -self.im }
    }
}

impl<R: FieldScalar> Mul for Cx<R> {
    type Output = Cx<R>;
    fn mul(self, o: Self) -> Self {
        let re = self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone();
        let im = self.re * o.im + self.im * o.re;
        Cx { re, im }
    }
}

impl<R: FieldScalar> Div for Cx<R> {
    type Output = Cx<R>;
    fn div(self, o: Self) -> Self {
        let n = o.norm_sq();
        let num = self * o.conj();
        Cx { re: num.re / n.clone(), im: num.im / n }
    }
}

impl<R: FieldScalar> FieldScalar for Cx<R> {}

impl<R: FieldScalar> fmt::Display for Cx<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let im = if self.im == R::one() {
            "i".to_string()
        } else if self.im == -R::one() {
            "-i".to_string()
        } else {
            let s = self.im.to_string();
            if s.contains('+') || s[1..].contains('-') {
                format!("({s})*i")
            } else {
                format!("{s}*i")
            }
        };
        if self.re.is_zero() {
            write!(f, "{im}")
        } else if im.starts_with('-') {
            write!(f, "{}{}", self.re, im)
        } else {
            write!(f, "{}+{}", self.re, im)
        }
    }
}

impl<R: FieldScalar> Serialize for Cx<R> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl From<GaussianRational> for QuadComplex {
    fn from(z: GaussianRational) -> Self {
        Cx { re: RealQuad::rational(z.re), im: RealQuad::rational(z.im) }
    }
}

impl QuadComplex {
    /// The value as a Gaussian rational when no square root is involved.
    pub fn to_gaussian(&self) -> Option<GaussianRational> {
        Some(Cx { re: self.re.as_rational()?.clone(), im: self.im.as_rational()?.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::rat;

    fn g(a: i64, b: i64) -> GaussianRational {
        Cx::new(rat(a, 1), rat(b, 1))
    }

    #[test]
    fn gaussian_field_ops() {
        let z = g(1, 2);
        let w = g(2, 1);
        assert_eq!(z.clone() * w.clone(), g(0, 5));
        assert_eq!((z.clone() / w.clone()) * w, z.clone());
        assert_eq!(z.conj().conj(), z);
        assert_eq!(z.norm_sq(), rat(5, 1));
    }

    #[test]
    fn display_forms() {
        assert_eq!(g(1, 2).to_string(), "1+2*i");
        assert_eq!(g(1, -1).to_string(), "1-i");
        assert_eq!(g(0, 0).to_string(), "0");
        assert_eq!(Cx::new(rat(-1, 2), rat(0, 1)).to_string(), "-1/2");
    }
}
