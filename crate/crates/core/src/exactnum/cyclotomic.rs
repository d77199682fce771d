//! Cyclotomic polynomials and exact root-of-unity counting.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::poly::IntPolynomial;
use crate::error::{Error, Result};

pub fn euler_phi(n: u64) -> u64 {
    let mut m = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

fn mobius(n: u64) -> i8 {
    let mut m = n;
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// Multiplies by `x^d - 1` in place.
fn mul_xd_minus_1(c: &mut Vec<BigInt>, d: usize) {
    let old = c.clone();
    c.resize(old.len() + d, BigInt::zero());
    for (k, v) in c.iter_mut().enumerate() {
        let shifted = if k >= d { old[k - d].clone() } else { BigInt::zero() };
        let orig = old.get(k).cloned().unwrap_or_else(BigInt::zero);
        *v = shifted - orig;
    }
}

/// Divides exactly by `x^d - 1` in place (caller guarantees divisibility).
fn div_xd_minus_1(c: &mut Vec<BigInt>, d: usize) {
    // c = q * (x^d - 1)  =>  q_k = q_{k-d} - c_k, read from the bottom.
    let qlen = c.len() - d;
    let mut q = vec![BigInt::zero(); qlen];
    for k in 0..qlen {
        let prev = if k >= d { q[k - d].clone() } else { BigInt::zero() };
        q[k] = prev - &c[k];
    }
    *c = q;
}

/// The `n`-th cyclotomic polynomial, via `prod_{d | n} (x^d - 1)^{mu(n/d)}`.
pub fn cyclotomic_poly(n: u64) -> IntPolynomial {
    assert!(n >= 1, "cyclotomic index must be positive");
    let divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut c = vec![BigInt::one()];
    for &d in &divisors {
        if mobius(n / d) == 1 {
            mul_xd_minus_1(&mut c, d as usize);
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            div_xd_minus_1(&mut c, d as usize);
        }
    }
    IntPolynomial::new(c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclotomicFactor {
    /// Order of the roots of unity, i.e. the index of `Phi_n`.
    pub order: u64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclotomicCount {
    /// Roots of unity among the roots, with multiplicity.
    pub count: usize,
    pub factors: Vec<CyclotomicFactor>,
}

impl CyclotomicCount {
    pub fn orders(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|f| f.order)
    }
}

/// Every `n` with `phi(n) <= deg`. Uses `phi(n) >= sqrt(n / 2)`.
pub fn orders_up_to_degree(deg: usize) -> impl Iterator<Item = u64> {
    let bound = 2 * (deg as u64) * (deg as u64) + 2;
    (1..=bound).filter(move |&n| euler_phi(n) <= deg as u64)
}

/// Counts the roots of unity among the roots of `p` by dividing out every
/// `Phi_n` with `phi(n) <= deg p` as often as it divides.
pub fn cyclotomic_root_count(p: &IntPolynomial) -> Result<CyclotomicCount> {
    if p.is_zero() {
        return Err(Error::domain("cyclotomic_root_count of the zero polynomial"));
    }
    let mut rest = p.clone();
    let mut factors = Vec::new();
    let mut count = 0;
    for n in orders_up_to_degree(p.deg()) {
        if euler_phi(n) as usize > rest.deg() {
            continue;
        }
        let phi_n = cyclotomic_poly(n);
        let mut mult = 0;
        while let Some(q) = rest.div_exact_monic(&phi_n) {
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            count += mult * phi_n.deg();
            factors.push(CyclotomicFactor { order: n, multiplicity: mult });
        }
    }
    Ok(CyclotomicCount { count, factors })
}

/// True iff every root of the monic integer polynomial `p` lies on the unit
/// circle (equivalently, by Kronecker, `p` is a product of cyclotomics).
pub fn is_kronecker(p: &IntPolynomial) -> Result<bool> {
    if !p.is_monic() {
        return Err(Error::domain("is_kronecker requires a monic polynomial"));
    }
    Ok(cyclotomic_root_count(p)?.count == p.deg())
}
