//! Fixed points, periodic points and torsion dynamics, checked against
//! brute-force enumeration on small torsion levels.

use abdyn::dynamics::{
    fixed_points, is_fixed, lefschetz_number, periodic_count, subtorus_orbit, torsion_dynamics, torsion_fixed_count,
    FixedPointSet, OrbitVerdict, PeriodicCount, DEFAULT_ORBIT_BOUND, DEFAULT_TORSION_BUDGET,
};
use abdyn::endo::{make_endo, TorusEndomorphism};
use abdyn::exactnum::scalar::{frac_mod1, rat};
use abdyn::matlin::{k_subsets, IntMatrix};
use abdyn::scenarios::{paper_example, random_endo, random_invariant_pair, CMOrder};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn order() -> impl Strategy<Value = CMOrder> {
    prop_oneof![Just(CMOrder::Gaussian), Just(CMOrder::Eisenstein), Just(CMOrder::Quadratic(2))]
}

/// All points of `(1/m Z / Z)^d` as integer residues.
fn torsion_points(d: usize, m: i64) -> Vec<Vec<i64>> {
    let total = (m as usize).pow(d as u32);
    (0..total)
        .map(|mut idx| {
            (0..d)
                .map(|_| {
                    let r = (idx % m as usize) as i64;
                    idx /= m as usize;
                    r
                })
                .collect()
        })
        .collect()
}

/// `M^k x + (M^{k-1} + … + 1) τ ≡ x (mod m)` for `τ` given in `1/m` units.
fn brute_force_period_dividing(m: &IntMatrix, tau_units: &[i64], level: i64, k: u64) -> usize {
    let d = m.rows();
    let mm = BigInt::from(level);
    let step = |x: &[BigInt]| -> Vec<BigInt> {
        m.mul_vec(x).iter().zip(tau_units).map(|(a, t)| (a + BigInt::from(*t)).mod_floor(&mm)).collect()
    };
    torsion_points(d, level)
        .into_iter()
        .filter(|x| {
            let x: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
            let mut y = x.clone();
            for _ in 0..k {
                y = step(&y);
            }
            y == x
        })
        .count()
}

/// `Σ_k (-1)^k tr Λ^k M` via principal minors.
fn alternating_trace(m: &IntMatrix) -> BigInt {
    let d = m.rows();
    let r = m.to_rational();
    let mut total = BigRational::zero();
    for k in 0..=d {
        let tr: BigRational =
            if k == 0 { rat(1, 1) } else { k_subsets(d, k).iter().map(|s| r.select(s, s).det().unwrap()).sum() };
        total += if k % 2 == 0 { tr } else { -tr };
    }
    total.to_integer()
}

fn with_tau_units(f: &TorusEndomorphism, tau: &[i64], level: i64) -> TorusEndomorphism {
    let tau: Vec<BigRational> = tau.iter().map(|&t| rat(t, level)).collect();
    make_endo(f.torus(), f.matrix().clone(), tau).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lefschetz_number_is_the_alternating_trace(order in order(), n in 1usize..=3, seed in any::<u64>()) {
        let f = random_endo(n, order, 3, seed).unwrap();
        prop_assert_eq!(lefschetz_number(&f), alternating_trace(f.matrix()));
    }

    #[test]
    fn fixed_point_sets_are_exact(
        order in order(),
        n in 1usize..=2,
        seed in any::<u64>(),
        tau in prop::collection::vec(-3i64..=3, 4),
    ) {
        let f = with_tau_units(&random_endo(n, order, 2, seed).unwrap(), &tau[..2 * n], 4);
        let l = lefschetz_number(&f);
        match fixed_points(&f) {
            FixedPointSet::Finite { count, points, complete } => {
                prop_assert_eq!(count.clone(), l.abs());
                if complete {
                    prop_assert_eq!(BigInt::from(points.len()), count);
                    for p in &points {
                        prop_assert!(is_fixed(&f, p));
                        prop_assert!(p.iter().all(|x| frac_mod1(x) == *x));
                    }
                    let mut dedup = points.clone();
                    dedup.dedup();
                    prop_assert_eq!(dedup.len(), points.len());
                }
            }
            FixedPointSet::CosetFamily { subtorus, transversal, .. } => {
                prop_assert!(l.is_zero());
                prop_assert!(subtorus.rank() > 0);
                for p in &transversal {
                    prop_assert!(is_fixed(&f, p));
                }
            }
            FixedPointSet::Empty => prop_assert!(l.is_zero()),
        }
    }

    #[test]
    fn torsion_fixed_points_match_brute_force(
        order in order(),
        n in 1usize..=2,
        seed in any::<u64>(),
        level in 1i64..=5,
    ) {
        let f = random_endo(n, order, 2, seed).unwrap();
        let expected = brute_force_period_dividing(f.matrix(), &vec![0; 2 * n], level, 1);
        prop_assert_eq!(torsion_fixed_count(&f, level as u64), BigInt::from(expected));
        let g = torsion_dynamics(&f, level as u64, DEFAULT_TORSION_BUDGET).unwrap();
        prop_assert_eq!(g.fixed_nodes as usize, expected);
    }

    #[test]
    fn torsion_graph_periods_match_brute_force(
        order in order(),
        seed in any::<u64>(),
        level in 2i64..=4,
        tau in prop::collection::vec(0i64..4, 2),
        k in 1u64..=4,
    ) {
        let f = with_tau_units(&random_endo(1, order, 3, seed).unwrap(), &tau, level);
        let g = torsion_dynamics(&f, level as u64, DEFAULT_TORSION_BUDGET).unwrap();
        let tau_units: Vec<i64> = tau.iter().map(|t| t.rem_euclid(level)).collect();
        let expected = brute_force_period_dividing(f.matrix(), &tau_units, level, k);
        prop_assert_eq!(g.period_dividing(k) as usize, expected);
        prop_assert_eq!(g.node_count, (level as u64).pow(2));
        let tails: u64 = g.tail_histogram.values().sum();
        prop_assert_eq!(tails, g.node_count);
        // a map invertible mod m permutes the torsion points
        if f.det().gcd(&BigInt::from(level)) == BigInt::from(1) {
            prop_assert_eq!(g.periodic_nodes, g.node_count);
        }
    }

    #[test]
    fn periodic_counts_are_difference_determinants(
        order in order(),
        n in 1usize..=2,
        seed in any::<u64>(),
        k in 1u64..=4,
    ) {
        let f = random_endo(n, order, 2, seed).unwrap();
        prop_assume!(f.is_surjective());
        let d = 2 * n;
        let det = (&f.matrix().pow(k) - &IntMatrix::identity(d)).det_int().unwrap();
        let got = periodic_count(&f, k).unwrap();
        if det.is_zero() {
            prop_assert_eq!(got, PeriodicCount::Infinite);
        } else {
            prop_assert_eq!(got, PeriodicCount::Finite(det.abs()));
        }
    }

    #[test]
    fn invariant_subtori_have_trivial_orbits(order in order(), n in 2usize..=3, seed in any::<u64>()) {
        let pair = random_invariant_pair(n, order, 2, seed).unwrap();
        prop_assume!(pair.endo.is_surjective());
        let orbit = subtorus_orbit(&pair.endo, &pair.subtorus, DEFAULT_ORBIT_BOUND).unwrap();
        prop_assert_eq!(orbit.verdict, OrbitVerdict::Invariant);
        prop_assert_eq!(orbit.sequence.len(), 2);
    }
}

#[test]
fn rational_points_of_the_doubling_map_are_preperiodic() {
    // on E x E, multiplication by 2: odd-level torsion is periodic, and
    // 2-power torsion collapses onto 0
    let f = paper_example("mult_2_2").unwrap().endo;
    let g = torsion_dynamics(&f, 4, DEFAULT_TORSION_BUDGET).unwrap();
    assert_eq!(g.periodic_nodes, 1);
    assert_eq!(g.fixed_nodes, 1);
    assert_eq!(g.tail_histogram.get(&1).copied(), Some(16 - 1));
    assert_eq!(g.tail_histogram.get(&2).copied(), Some(256 - 16));
    let g = torsion_dynamics(&f, 5, DEFAULT_TORSION_BUDGET).unwrap();
    assert_eq!(g.periodic_nodes, 625);
    // 2 has order 4 mod 5, so every nonzero point has period 4
    assert_eq!(g.cycle_histogram.get(&4).copied(), Some(624 / 4));
}

#[test]
fn torsion_budget_is_checked_before_work() {
    let f = paper_example("mult_2").unwrap().endo;
    let err = torsion_dynamics(&f, 1000, 1000).unwrap_err();
    assert_eq!(err.code(), "resource");
}

#[test]
fn escaping_orbits_of_the_shear() {
    // the diagonal of E x E under (x, y) -> (x + y, y) drifts forever
    let ex = paper_example("shear").unwrap();
    let s = abdyn::torus::make_subtorus(ex.endo.torus(), &ex.sublattices["diagonal"]).unwrap();
    let orbit = subtorus_orbit(&ex.endo, &s, 16).unwrap();
    assert!(matches!(orbit.verdict, OrbitVerdict::EscapingWithinBound { bound: 16 }), "{:?}", orbit.verdict);
    let first = abdyn::torus::make_subtorus(ex.endo.torus(), &ex.sublattices["first_factor"]).unwrap();
    assert_eq!(subtorus_orbit(&ex.endo, &first, 16).unwrap().verdict, OrbitVerdict::Invariant);
}
