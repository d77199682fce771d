use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::complex::Cx;
use super::scalar::{FieldScalar, Scalar};

/// Dense univariate polynomial, coefficients in ascending degree order.
/// The coefficient vector never ends in a zero; the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type IntPolynomial = Poly<BigInt>;
pub type RatPolynomial = Poly<BigRational>;

fn small<T: Scalar>(k: usize) -> T {
    let mut acc = T::zero();
    let mut base = T::one();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc + base.clone();
        }
        base = base.clone() + base;
        k >>= 1;
    }
    acc
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `x - r`.
    pub fn linear_root(r: T) -> Self {
        Poly::new(vec![-r, T::one()])
    }

    pub fn monomial(c: T, k: usize) -> Self {
        let mut v = vec![T::zero(); k];
        v.push(c);
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.leading() == T::one()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.clone() * small::<T>(k)).collect())
    }

    /// `x^deg p(1/x)`.
    pub fn reversal(&self) -> Self {
        Poly::new(self.coeffs.iter().rev().cloned().collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Scalar> Zero for Poly<T> {
    fn zero() -> Self {
        Poly::zero()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Scalar> One for Poly<T> {
    fn one() -> Self {
        Poly::one()
    }
}

impl<T: Scalar> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, o: Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<T: Scalar> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, o: Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<T: Scalar> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Self {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<T: Scalar> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: FieldScalar> Poly<T> {
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = self.leading().inv();
        self.scale(&inv)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        let lead_inv = d.leading().inv();
        let mut rem = self.coeffs.clone();
        if rem.len() < d.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() * lead_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free decomposition: `self = c * prod f_i^{m_i}` with each
    /// `f_i` monic, square-free, pairwise coprime. Returns `(f_i, m_i)` with
    /// nonconstant factors only.
    pub fn square_free_decomposition(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.deg() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a = f.gcd(&df);
        let mut b = f.div_rem(&a).0;
        let mut c = df.div_rem(&a).0;
        let mut d = c - b.derivative();
        let mut i = 1;
        loop {
            let g = b.gcd(&d);
            if g.deg() > 0 {
                out.push((g.clone(), i));
            }
            b = b.div_rem(&g).0;
            if b.deg() == 0 {
                break;
            }
            c = d.div_rem(&g).0;
            d = c - b.derivative();
            i += 1;
        }
        out
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self) -> Self {
        self.square_free_decomposition().into_iter().fold(Poly::one(), |acc, (f, _)| acc * f)
    }
}

impl<R: FieldScalar> Poly<Cx<R>> {
    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }
}

impl IntPolynomial {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn to_rational(&self) -> RatPolynomial {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides by the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        self.map(|c| c / &g)
    }

    /// Primitive integer polynomial proportional to a rational one.
    pub fn from_rational_primitive(p: &RatPolynomial) -> Self {
        let l = p.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        p.map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).primitive_part()
    }

    /// Exact integral quotient by a monic divisor, if the division is exact.
    pub fn div_exact_monic(&self, d: &Self) -> Option<Self> {
        assert!(d.is_monic(), "divisor must be monic");
        let dd = d.deg();
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if self.deg() < dd {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem[..dd].iter().all(Zero::is_zero).then(|| Poly::new(quot))
    }

    /// Rational polynomial to integer polynomial when all coefficients are
    /// integers.
    pub fn try_from_rational(p: &RatPolynomial) -> Option<Self> {
        p.coeffs().iter().map(|c| c.is_integer().then(|| c.to_integer())).collect::<Option<Vec<_>>>().map(Poly::new)
    }
}

impl<T: fmt::Display> fmt::Display for Poly<T>
where
    T: Scalar,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let compound = s.contains('+') || s.get(1..).is_some_and(|t| t.contains('-'));
            let body = match k {
                0 => {
                    if compound {
                        format!("({s})")
                    } else {
                        s.clone()
                    }
                }
                _ => {
                    let var = if k == 1 { "x".to_string() } else { format!("x^{k}") };
                    if *c == T::one() {
                        var
                    } else if *c == -T::one() {
                        format!("-{var}")
                    } else if compound {
                        format!("({s})*{var}")
                    } else {
                        format!("{s}*{var}")
                    }
                }
            };
            if first {
                write!(f, "{body}")?;
                first = false;
            } else if let Some(rest) = body.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

impl<T: Scalar> Serialize for Poly<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn trims_and_degree() {
        let p = ip(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(ip(&[0, 0]).is_zero());
        assert_eq!(ip(&[]).degree(), None);
    }

    #[test]
    fn division_and_gcd() {
        let a = ip(&[-1, 0, 1]).to_rational(); // x^2 - 1
        let b = ip(&[-1, 1]).to_rational(); // x - 1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, ip(&[1, 1]).to_rational());
        assert!(r.is_zero());
        let g = ip(&[-1, 0, 1]).to_rational().gcd(&ip(&[1, 2, 1]).to_rational());
        assert_eq!(g, ip(&[1, 1]).to_rational());
    }

    #[test]
    fn yun_decomposition() {
        // (x-1)^2 (x+2)^3 (x^2+1)
        let p = ip(&[-1, 1]).pow(2) * ip(&[2, 1]).pow(3) * ip(&[1, 0, 1]);
        let mut dec = p.to_rational().square_free_decomposition();
        dec.sort_by_key(|(_, m)| *m);
        assert_eq!(dec.len(), 3);
        assert_eq!(dec[0], (ip(&[1, 0, 1]).to_rational(), 1));
        assert_eq!(dec[1], (ip(&[-1, 1]).to_rational(), 2));
        assert_eq!(dec[2], (ip(&[2, 1]).to_rational(), 3));
    }

    #[test]
    fn exact_monic_division() {
        let p = ip(&[1, -1, 1]) * ip(&[-2, 1]);
        assert_eq!(p.div_exact_monic(&ip(&[1, -1, 1])), Some(ip(&[-2, 1])));
        assert_eq!(p.div_exact_monic(&ip(&[1, 1])), None);
    }

    #[test]
    fn display() {
        assert_eq!(ip(&[1, -3, -4, -3, 1]).to_string(), "x^4 - 3*x^3 - 4*x^2 - 3*x + 1");
        assert_eq!(ip(&[-1, 1]).to_string(), "x - 1");
    }
}
