//! Classification of monic integer polynomials by the position of their roots
//! relative to the unit circle.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::cyclotomic::is_kronecker;
use super::poly::{IntPolynomial, RatPolynomial};
use super::sturm::{real_roots_in, unit_circle_root_count, Point};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolynomialClass {
    CyclotomicProduct,
    Salem,
    OffCircleReciprocal,
    Other,
}

/// Root-location counts, with multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootCensus {
    pub on_circle: usize,
    pub real_above_one: usize,
    pub real_in_zero_one: usize,
}

pub fn root_census(p: &RatPolynomial) -> RootCensus {
    let mut census = RootCensus::default();
    for (s, m) in p.square_free_decomposition() {
        census.on_circle += m * unit_circle_root_count(&s);
        census.real_above_one += m * real_roots_in(&s, Point::At(BigRational::one()), Point::PosInf);
        // (0, 1): exclude 1 itself by counting (0, 1] minus [root at 1]
        let upto_one = real_roots_in(&s, Point::At(BigRational::zero()), Point::At(BigRational::one()));
        let at_one = usize::from(s.eval(&BigRational::one()).is_zero());
        census.real_in_zero_one += m * (upto_one - at_one);
    }
    census
}

fn is_reciprocal(p: &IntPolynomial) -> bool {
    let r = p.reversal();
    r == *p || r == -p.clone()
}

/// Classifies a monic integer polynomial with nonzero constant term.
pub fn polynomial_class(p: &IntPolynomial) -> Result<PolynomialClass> {
    if !p.is_monic() {
        return Err(Error::domain("polynomial_class requires a monic polynomial"));
    }
    if p.coeff(0).is_zero() {
        return Err(Error::domain("polynomial_class requires a nonzero constant term"));
    }
    if is_kronecker(p)? {
        return Ok(PolynomialClass::CyclotomicProduct);
    }
    if !is_reciprocal(p) {
        return Ok(PolynomialClass::Other);
    }
    let census = root_census(&p.to_rational());
    let deg = p.deg();
    if census.real_above_one == 1
        && census.real_in_zero_one == 1
        && census.on_circle == deg - 2
        && census.on_circle >= 1
    {
        return Ok(PolynomialClass::Salem);
    }
    if census.on_circle == 0 {
        return Ok(PolynomialClass::OffCircleReciprocal);
    }
    Ok(PolynomialClass::Other)
}
