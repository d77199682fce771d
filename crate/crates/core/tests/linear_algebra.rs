//! Properties of the exact matrix layer: exterior powers, Smith form,
//! saturation and restriction to invariant sublattices.

use abdyn::matlin::{
    exterior_power, integer_kernel, k_subsets, restrict_and_quotient, saturate, smith_form, IntMatrix, RationalMatrix,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn int_matrix(d: usize, lo: i64, hi: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(lo..=hi, d * d).prop_map(move |v| IntMatrix::from_fn(d, d, |i, j| BigInt::from(v[i * d + j])))
}

/// Product of random elementary matrices: unimodular by construction.
fn unimodular(d: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..d, 1..d, -2i64..=2), 2 * d).prop_map(move |ops| {
        let mut u = IntMatrix::identity(d);
        for (i, off, c) in ops {
            let j = (i + off) % d;
            let mut e = IntMatrix::identity(d);
            e.set(i, j, BigInt::from(c));
            u = &u * &e;
        }
        u
    })
}

/// Sum of the principal `k x k` minors: the `k`-th elementary symmetric
/// function of the eigenvalues, computed without exterior powers.
fn principal_minor_sum(a: &RationalMatrix, k: usize) -> num_rational::BigRational {
    k_subsets(a.rows(), k)
        .iter()
        .map(|s| a.select(s, s).det().unwrap())
        .fold(num_rational::BigRational::zero(), |acc, x| acc + x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exterior_power_is_multiplicative(a in int_matrix(4, -3, 3), b in int_matrix(4, -3, 3), k in 1usize..=4) {
        let (a, b) = (a.to_rational(), b.to_rational());
        let lhs = exterior_power(&(&a * &b), k).unwrap();
        let rhs = &exterior_power(&a, k).unwrap() * &exterior_power(&b, k).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exterior_power_trace_is_a_charpoly_coefficient(a in int_matrix(4, -3, 3), k in 1usize..=4) {
        let a = a.to_rational();
        let w = exterior_power(&a, k).unwrap();
        prop_assert_eq!(w.trace(), principal_minor_sum(&a, k));
        // and det(Λ^k A) = det(A)^{C(d-1, k-1)}
        let e = k_subsets(3, k - 1).len();
        prop_assert_eq!(w.det().unwrap(), num_traits::pow(a.det().unwrap(), e));
    }

    #[test]
    fn smith_form_diagonalizes(a in (2usize..=4, 2usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(-6i64..=6, r * c).prop_map(move |v| IntMatrix::from_fn(r, c, |i, j| BigInt::from(v[i * c + j])))
    })) {
        let s = smith_form(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        prop_assert!(s.u.det_int().unwrap().abs().is_one());
        prop_assert!(s.v.det_int().unwrap().abs().is_one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!(!w[0].is_negative());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        // the product of invariant factors is the gcd-of-maximal-minors chain:
        // for square matrices it is |det|
        if a.rows() == a.cols() {
            let prod = f.iter().fold(BigInt::one(), |acc, x| acc * x);
            prop_assert_eq!(prod, a.det_int().unwrap().abs());
        }
    }

    #[test]
    fn saturation_is_idempotent_and_contains_the_span(
        cols in prop::collection::vec(prop::collection::vec(-5i64..=5, 4), 1..=3),
        scale in 1i64..=4,
    ) {
        let s = IntMatrix::from_fn(4, cols.len(), |i, j| BigInt::from(cols[j][i] * scale));
        prop_assume!(s.to_rational().rank() == cols.len());
        let sat = saturate(&s).unwrap();
        prop_assert_eq!(sat.rank(), cols.len());
        prop_assert_eq!(saturate(&sat.basis).unwrap(), sat.clone());
        for c in s.to_cols() {
            let v: Vec<_> = c.iter().map(|x| num_rational::BigRational::from_integer(x.clone())).collect();
            prop_assert!(sat.spans_rational(&v));
        }
        // primitive: the basis has trivial elementary divisors
        prop_assert!(smith_form(&sat.basis).invariant_factors().iter().all(One::is_one));
        // the saturation of the scaled lattice equals that of the unscaled one
        let unscaled = IntMatrix::from_fn(4, cols.len(), |i, j| BigInt::from(cols[j][i]));
        prop_assert_eq!(saturate(&unscaled).unwrap(), sat);
    }

    #[test]
    fn charpoly_is_invariant_under_unimodular_conjugation(a in int_matrix(4, -4, 4), u in unimodular(4)) {
        let uinv = u.to_rational().inverse().unwrap().to_integer().unwrap();
        let b = &(&u * &a) * &uinv;
        prop_assert_eq!(a.charpoly_int().unwrap(), b.charpoly_int().unwrap());
    }

    #[test]
    fn restriction_and_quotient_split_the_charpoly(
        blocks in (1usize..=3).prop_flat_map(|r| (Just(r), prop::collection::vec(-3i64..=3, 16))),
        p in unimodular(4),
    ) {
        let (r, entries) = blocks;
        // block upper triangular in the standard basis: preserves span(e_1..e_r)
        let b = IntMatrix::from_fn(4, 4, |i, j| {
            if i >= r && j < r { BigInt::zero() } else { BigInt::from(entries[i * 4 + j]) }
        });
        let pinv = p.to_rational().inverse().unwrap().to_integer().unwrap();
        let a = &(&p * &b) * &pinv;
        let w = saturate(&p.select(&[0, 1, 2, 3], &(0..r).collect::<Vec<_>>())).unwrap();
        let rq = restrict_and_quotient(&a.to_rational(), &w).unwrap();
        let prod = rq.restricted.charpoly().unwrap() * rq.quotient.charpoly().unwrap();
        prop_assert_eq!(prod, a.to_rational().charpoly().unwrap());
        prop_assert!(rq.restricted.to_integer().is_some());
        prop_assert!(rq.quotient.to_integer().is_some());
    }
}

#[test]
fn non_invariant_sublattices_are_rejected() {
    let a = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]).to_rational();
    let w = saturate(&IntMatrix::from_i64(&[&[1], &[0]])).unwrap();
    let err = restrict_and_quotient(&a, &w).unwrap_err();
    assert_eq!(err.code(), "invariance-violation");
}

#[test]
fn integer_kernel_is_primitive() {
    // kernel of [2 4 6] is rank 2 and primitive
    let k = integer_kernel(&IntMatrix::from_i64(&[&[2, 4, 6]]));
    assert_eq!(k.rank(), 2);
    assert!(smith_form(&k.basis).invariant_factors().iter().all(One::is_one));
    for c in k.columns() {
        assert!((BigInt::from(2) * &c[0] + BigInt::from(4) * &c[1] + BigInt::from(6) * &c[2]).is_zero());
    }
}
