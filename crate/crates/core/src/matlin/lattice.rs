//! Primitive sublattices of `Z^d`, saturation, basis completion, and
//! restriction/quotient of linear maps along invariant sublattices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

use super::matrix::{IntMatrix, RationalMatrix};
use super::smith::{hermite_rows, smith_form};

/// A primitive sublattice, stored by a canonical (Hermite-reduced) basis in
/// the columns of `basis`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Sublattice {
    pub ambient_rank: usize,
    pub basis: IntMatrix,
}

fn canonical(basis: &IntMatrix) -> IntMatrix {
    let h = hermite_rows(&basis.transpose()).transpose();
    if h.cols() == 0 {
        IntMatrix::zeros(basis.rows(), 0)
    } else {
        h
    }
}

/// Primitive hull of the column span of `s`: `span_Q(s) ∩ Z^d`.
pub fn saturate(s: &IntMatrix) -> Result<Sublattice> {
    let sm = smith_form(s);
    let r = sm.rank();
    if r != s.cols() {
        return Err(Error::domain(format!("saturate needs full column rank: rank {r} < {} columns", s.cols())));
    }
    Ok(Sublattice::from_primitive_unchecked(&column_span_basis(s)))
}

/// A primitive basis of `span_Q(columns of s) ∩ Z^d`, for any `s`.
fn column_span_basis(s: &IntMatrix) -> IntMatrix {
    let sm = smith_form(s);
    let r = sm.rank();
    // S = U^{-1} D V^{-1}, so the span is that of the first r columns of U^{-1}
    let uinv = sm.u.to_rational().inverse().and_then(|m| m.to_integer()).expect("unimodular inverse is integral");
    uinv.block(0, s.rows(), 0, r)
}

/// Saturated span of arbitrary integer columns (rank may be deficient).
pub fn span_saturation(s: &IntMatrix) -> Sublattice {
    Sublattice::from_primitive_unchecked(&column_span_basis(s))
}

/// The kernel lattice `{x ∈ Z^d : A x = 0}` (automatically primitive).
pub fn integer_kernel(a: &IntMatrix) -> Sublattice {
    let sm = smith_form(a);
    let r = sm.rank();
    let d = a.cols();
    Sublattice::from_primitive_unchecked(&sm.v.block(0, d, r, d))
}

impl Sublattice {
    fn from_primitive_unchecked(basis: &IntMatrix) -> Self {
        Sublattice { ambient_rank: basis.rows(), basis: canonical(basis) }
    }

    /// Validates that `basis` has full column rank and is primitive.
    pub fn new(basis: IntMatrix) -> Result<Self> {
        let sm = smith_form(&basis);
        if sm.rank() != basis.cols() {
            return Err(Error::domain("sublattice basis is not of full column rank"));
        }
        if sm.invariant_factors().iter().any(|d| !d.is_one()) {
            return Err(Error::domain("sublattice basis is not primitive"));
        }
        Ok(Sublattice::from_primitive_unchecked(&basis))
    }

    pub fn zero(ambient_rank: usize) -> Self {
        Sublattice { ambient_rank, basis: IntMatrix::zeros(ambient_rank, 0) }
    }

    pub fn full(ambient_rank: usize) -> Self {
        Sublattice { ambient_rank, basis: IntMatrix::identity(ambient_rank) }
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        self.basis.to_cols()
    }

    /// Whether the rational vector `v` lies in `span_Q(self)`.
    pub fn spans_rational(&self, v: &[BigRational]) -> bool {
        self.basis.to_rational().solve(v).is_some()
    }

    /// First basis column `j` with `A · b_j ∉ span_Q(self)`, if any.
    pub fn first_non_invariant_column(&self, a: &RationalMatrix) -> Option<usize> {
        let b = self.basis.to_rational();
        (0..self.rank()).find(|&j| b.solve(&a.mul_vec(&b.col(j))).is_none())
    }

    pub fn is_invariant_under(&self, a: &RationalMatrix) -> bool {
        self.first_non_invariant_column(a).is_none()
    }

    /// Saturated image `span_Q(M · self) ∩ Z^d`.
    pub fn image(&self, m: &IntMatrix) -> Sublattice {
        span_saturation(&(m * &self.basis))
    }

    /// A unimodular matrix whose first `rank` columns are this basis.
    pub fn complete_basis(&self) -> IntMatrix {
        let d = self.ambient_rank;
        let r = self.rank();
        let sm = smith_form(&self.basis);
        // U B V = [I_r; 0]  =>  B = U^{-1}[:, :r] V^{-1}
        let uinv = sm.u.to_rational().inverse().and_then(|m| m.to_integer()).expect("unimodular inverse is integral");
        let vinv = sm.v.to_rational().inverse().and_then(|m| m.to_integer()).expect("unimodular inverse is integral");
        let p = &uinv * &IntMatrix::block_diag(&[vinv, IntMatrix::identity(d - r)]);
        debug_assert_eq!(p.block(0, d, 0, r), self.basis);
        p
    }
}

/// Result of splitting a linear map along an invariant sublattice.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestrictQuotient {
    /// The map on the sublattice, in its basis.
    pub restricted: RationalMatrix,
    /// The induced map on the quotient lattice.
    pub quotient: RationalMatrix,
    /// Unimodular `P` whose first columns are the sublattice basis;
    /// `P^{-1} A P` is block upper triangular.
    pub change_of_basis: IntMatrix,
}

pub fn restrict_and_quotient(a: &RationalMatrix, w: &Sublattice) -> Result<RestrictQuotient> {
    if !a.is_square() || a.rows() != w.ambient_rank {
        return Err(Error::domain("restrict_and_quotient: dimension mismatch"));
    }
    if let Some(column) = w.first_non_invariant_column(a) {
        return Err(Error::InvarianceViolation { column });
    }
    let d = a.rows();
    let r = w.rank();
    let p = w.complete_basis();
    let pr = p.to_rational();
    let pinv = pr.inverse().expect("unimodular");
    let b = &(&pinv * a) * &pr;
    debug_assert!(b.block(r, d, 0, r).is_zero());
    Ok(RestrictQuotient { restricted: b.block(0, r, 0, r), quotient: b.block(r, d, r, d), change_of_basis: p })
}

/// Whether two integer vectors are equal up to the zero test.
pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::IntPolynomial;

    #[test]
    fn saturate_examples() {
        let s = saturate(&IntMatrix::from_i64(&[&[2], &[0]])).unwrap();
        assert_eq!(s.basis, IntMatrix::from_i64(&[&[1], &[0]]));
        let s = saturate(&IntMatrix::from_i64(&[&[2], &[4]])).unwrap();
        assert_eq!(s.basis, IntMatrix::from_i64(&[&[1], &[2]]));
        let s = saturate(&IntMatrix::from_i64(&[&[2, 0], &[0, 3], &[0, 3]])).unwrap();
        assert_eq!(s.basis, IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, 1]]));
        assert_eq!(saturate(&s.basis).unwrap(), s);
        assert!(saturate(&IntMatrix::from_i64(&[&[1, 2], &[1, 2]])).is_err());
    }

    #[test]
    fn kernel_and_completion() {
        let k = integer_kernel(&IntMatrix::from_i64(&[&[2, 4, 6]]));
        assert_eq!(k.rank(), 2);
        let p = k.complete_basis();
        assert_eq!(p.det_int().unwrap().magnitude(), BigInt::one().magnitude());
        assert!(Sublattice::new(IntMatrix::from_i64(&[&[2], &[0]])).is_err());
    }

    #[test]
    fn restrict_quotient_examples() {
        let axis = Sublattice::new(IntMatrix::from_i64(&[&[1], &[0]])).unwrap();
        let a = RationalMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let rq = restrict_and_quotient(&a, &axis).unwrap();
        assert_eq!(rq.restricted, RationalMatrix::from_i64(&[&[2]]));
        assert_eq!(rq.quotient, RationalMatrix::from_i64(&[&[3]]));
        let shear = RationalMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        let rq = restrict_and_quotient(&shear, &axis).unwrap();
        assert_eq!(rq.restricted, RationalMatrix::from_i64(&[&[1]]));
        assert_eq!(rq.quotient, RationalMatrix::from_i64(&[&[1]]));
        let cat = RationalMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert!(matches!(restrict_and_quotient(&cat, &axis), Err(Error::InvarianceViolation { column: 0 })));
        let p = IntPolynomial::from_i64(&[1, -2, 1]).to_rational();
        assert_eq!(rq.restricted.charpoly().unwrap() * rq.quotient.charpoly().unwrap(), p);
    }
}
