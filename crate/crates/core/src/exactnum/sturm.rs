//! Sturm sequences and exact real-root / unit-circle root counting.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{Poly, RatPolynomial};
use super::scalar::int_rat;

/// Point on the extended real line.
#[derive(Clone, Debug)]
pub enum Point {
    NegInf,
    At(BigRational),
    PosInf,
}

#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<RatPolynomial>,
}

fn sign_at(p: &RatPolynomial, x: &Point) -> i8 {
    let s = |q: BigRational| {
        if q.is_zero() {
            0
        } else if q.is_positive() {
            1
        } else {
            -1
        }
    };
    match x {
        Point::At(v) => s(p.eval(v)),
        Point::PosInf => s(p.leading()),
        Point::NegInf => {
            let l = s(p.leading());
            if p.deg().is_multiple_of(2) {
                l
            } else {
                -l
            }
        }
    }
}

impl SturmChain {
    pub fn new(p: &RatPolynomial) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            chain.push(-r);
        }
        chain.pop();
        SturmChain { chain }
    }

    fn variations(&self, x: &Point) -> usize {
        let signs: Vec<i8> = self.chain.iter().map(|p| sign_at(p, x)).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct real roots in the half-open interval `(a, b]`.
    pub fn count(&self, a: &Point, b: &Point) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// Distinct real roots of `p` in `(a, b]`.
pub fn real_roots_in(p: &RatPolynomial, a: Point, b: Point) -> usize {
    if p.deg() == 0 {
        return 0;
    }
    SturmChain::new(p).count(&a, &b)
}

/// Distinct real roots of `p`.
pub fn real_root_count(p: &RatPolynomial) -> usize {
    real_roots_in(p, Point::NegInf, Point::PosInf)
}

/// For palindromic `p` of even degree `2m`, the degree-`m` polynomial `q` with
/// `p(x) = x^m q(x + 1/x)`.
pub fn trace_polynomial(p: &RatPolynomial) -> RatPolynomial {
    let d = p.deg();
    assert!(d.is_multiple_of(2), "trace polynomial needs even degree");
    let m = d / 2;
    // D_0 = 2, D_1 = y, D_{k+1} = y D_k - D_{k-1}, with D_k(x + 1/x) = x^k + x^-k
    let y: RatPolynomial = Poly::monomial(BigRational::one(), 1);
    let mut dk_prev = Poly::constant(int_rat(2));
    let mut dk = y.clone();
    let mut q = Poly::constant(p.coeff(m));
    for k in 1..=m {
        if k > 1 {
            let next = y.clone() * dk.clone() - dk_prev.clone();
            dk_prev = dk;
            dk = next;
        }
        q = q + dk.scale(&p.coeff(m + k));
    }
    q
}

pub fn is_palindromic(p: &RatPolynomial) -> bool {
    p.reversal() == *p && p.coeff(0) == p.leading()
}

/// Number of distinct roots of `s` on the unit circle, decided exactly.
///
/// Unit-circle roots of a real polynomial are common roots of `s` and its
/// reversal. After removing `x -+ 1`, that common part is palindromic, and its
/// circle roots correspond two-to-one to real roots of the trace polynomial in
/// `(-2, 2)`.
pub fn unit_circle_root_count(s: &RatPolynomial) -> usize {
    if s.deg() == 0 || s.is_zero() {
        return 0;
    }
    let s = s.radical();
    if s.coeff(0).is_zero() {
        let (q, _) = s.div_rem(&Poly::monomial(BigRational::one(), 1));
        return unit_circle_root_count(&q);
    }
    let mut g = s.gcd(&s.reversal());
    let mut count = 0;
    for r in [BigRational::one(), -BigRational::one()] {
        if g.eval(&r).is_zero() {
            count += 1;
            g = g.div_rem(&Poly::linear_root(r)).0;
        }
    }
    if g.deg() == 0 {
        return count;
    }
    debug_assert!(is_palindromic(&g));
    let q = trace_polynomial(&g);
    let two = int_rat(2);
    count + 2 * real_roots_in(&q, Point::At(-two.clone()), Point::At(two))
}
