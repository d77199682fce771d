//! Acceptance suite: one PASS/FAIL line per criterion. Expected values come
//! from oracles computed here, independently of the library paths under test.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use abdyn::classify::{
    full_report, serre_test, AmplifiedPath, ClassificationReport, PolarizedPath, Verdict,
    FLAG_EQUAL_DEGREES_NOT_UNITY_FREE,
};
use abdyn::dynamics::{
    lefschetz_number, subtorus_orbit, torsion_dynamics, torsion_fixed_count, OrbitVerdict, DEFAULT_ORBIT_BOUND,
    DEFAULT_TORSION_BUDGET,
};
use abdyn::endo::{eigen_split, fixed_subtorus, unity_free, TorusEndomorphism};
use abdyn::exactnum::scalar::{rat, to_f64};
use abdyn::exactnum::RatPolynomial;
use abdyn::matlin::{exterior_power, k_subsets, restrict_and_quotient, IntMatrix};
use abdyn::scenarios::{paper_example, random_endo, random_invariant_pair, sample_seed, CMOrder};
use abdyn::torus::{is_ample, make_subtorus};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn report(name: &str) -> ClassificationReport {
    full_report(&paper_example(name).unwrap().endo)
}

fn within(elapsed: Duration, limit: Duration) -> Outcome {
    if elapsed < limit {
        Ok(String::new())
    } else {
        Err(format!("took {elapsed:?}, limit {limit:?}"))
    }
}

/// `f^*ω` computed from the exterior square of `Mᵀ`.
fn pullback(f: &TorusEndomorphism, omega: &[BigRational]) -> Vec<BigRational> {
    exterior_power(&f.matrix().transpose().to_rational(), 2).unwrap().mul_vec(omega)
}

/// Points `x ∈ (Z/m)^d` with `M x ≡ x (mod m)`, by enumeration.
fn brute_force_fixed(m: &IntMatrix, level: u64) -> u64 {
    let d = m.rows();
    let total = level.pow(d as u32);
    let mb = BigInt::from(level);
    let mut count = 0;
    for idx in 0..total {
        let mut rem = idx;
        let x: Vec<BigInt> = (0..d)
            .map(|_| {
                let r = rem % level;
                rem /= level;
                BigInt::from(r)
            })
            .collect();
        let y = m.mul_vec(&x);
        if y.iter().zip(&x).all(|(a, b)| ((a - b) % &mb).is_zero()) {
            count += 1;
        }
    }
    count
}

/// `Σ (-1)^k Σ_{|S| = k} det M[S, S]`: the alternating sum of the traces of
/// the exterior powers, through principal minors.
fn alternating_minor_sum(m: &IntMatrix) -> BigRational {
    let r = m.to_rational();
    let d = r.rows();
    let mut total = rat(1, 1);
    for k in 1..=d {
        let tr: BigRational = k_subsets(d, k).iter().map(|s| r.select(s, s).det().unwrap()).sum();
        total += if k % 2 == 0 { tr } else { -tr };
    }
    total
}

/// Largest real root of `p` in `[lo, hi]` by bisection (sign change assumed).
fn bisect(p: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if (p(lo) < 0.0) == (p(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / 2.0
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let r = report("mult_2_3");
    let elapsed = start.elapsed();
    // [2] x [3] acts on H^{1,1} by the products λ_i · conj(λ_j) of the
    // analytic eigenvalues 2 and 3
    let analytic = [2i64, 3];
    let mut oracle = RatPolynomial::one();
    for a in analytic {
        for b in analytic {
            oracle = oracle * RatPolynomial::linear_root(rat(a * b, 1));
        }
    }
    ensure!(r.ns_action_charpoly.as_ref() == Some(&oracle), "NS action charpoly {:?}", r.ns_action_charpoly);
    let amp = r.amplified.as_ref().unwrap();
    ensure!(amp.verdict == Verdict::Yes, "amplified = {:?}", amp.verdict);
    ensure!(amp.path == AmplifiedPath::NoUnitEigenvalueOnNs, "amplified path {:?}", amp.path);
    ensure!(r.polarized.as_ref().unwrap().verdict == Verdict::No, "polarized is not no");
    ensure!(r.unity_free == Some(true), "unity-free = {:?}", r.unity_free);
    ensure!(r.finite_order.is_none(), "finite order {:?}", r.finite_order);
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("NS eigenvalues {{4, 6, 6, 9}}, amplified via (a), polarized no, {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let r = report("e4_auto");
    let elapsed = start.elapsed();
    ensure!(r.unity_free == Some(true) && r.u_f == Some(0), "unity-free {:?}, u_f {:?}", r.unity_free, r.u_f);
    let pair = r.equal_pair_evidence.iter().find(|p| p.j == 1);
    ensure!(pair.is_some(), "no equality certified at j = 1: {:?}", r.equal_consecutive_pairs);
    let pair = pair.unwrap();
    ensure!(pair.exact && pair.intervals_coincide, "pair at j = 1: {pair:?}");
    // α = largest root of the analytic quartic; λ_1 = α²
    let quartic = |x: f64| (((x - 3.0) * x - 4.0) * x - 3.0) * x + 1.0;
    let alpha = bisect(quartic, 3.0, 10.0);
    let oracle = alpha * alpha;
    let l1 = &r.dynamical_degrees[1];
    ensure!((l1.approx - oracle).abs() <= 1e-3, "λ_1 = {} but α² = {oracle}", l1.approx);
    ensure!(
        to_f64(&l1.lower) - 1e-9 <= oracle && oracle <= to_f64(&l1.upper) + 1e-9,
        "α² = {oracle} outside [{}, {}]",
        to_f64(&l1.lower),
        to_f64(&l1.upper)
    );
    ensure!(r.det.abs() == BigInt::from(1), "|det M| = {}", r.det.abs());
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!("u_f = 0, λ_1 = λ_2 ≈ {:.7} (oracle α² = {oracle:.7}), |det| = 1, {elapsed:.2?}", l1.approx))
}

fn criterion_3() -> Outcome {
    let f = paper_example("mult_2_1").unwrap().endo;
    let r = full_report(&f);
    ensure!(r.unity_free == Some(false) && r.u_f == Some(1), "unity-free {:?}, u_f {:?}", r.unity_free, r.u_f);
    ensure!(r.amplified.as_ref().unwrap().verdict == Verdict::No, "amplified is not no");
    let fs = fixed_subtorus(&f).unwrap();
    ensure!(fs.is_some(), "no fixed subtorus");
    let fs = fs.unwrap();
    ensure!(fs.k == 1 && fs.subtorus.rank() == 2, "fixed subtorus k = {}, rank {}", fs.k, fs.subtorus.rank());
    // the fixed lattice is ker(M - I) = the second factor
    let m = f.matrix();
    for c in fs.subtorus.lattice.columns() {
        ensure!(m.mul_vec(&c) == c, "column {c:?} is moved");
    }
    // degrees of [2] x [1]: λ_1 = max(4, 1) = 4, λ_2 = |det| = 4
    for (j, expected) in [(0usize, 1i64), (1, 4), (2, 4)] {
        let d = &r.dynamical_degrees[j];
        ensure!(d.lower == rat(expected, 1) && d.upper == rat(expected, 1), "λ_{j} = [{}, {}]", d.lower, d.upper);
    }
    ensure!(r.flags.iter().any(|f| f == FLAG_EQUAL_DEGREES_NOT_UNITY_FREE), "flags {:?}", r.flags);
    Ok("u_f = 1, amplified no, fixed subtorus rank 2 at k = 1, degrees (1, 4, 4) flagged".into())
}

fn criterion_4() -> Outcome {
    let ex = paper_example("gtz_diag").unwrap();
    let f = &ex.endo;
    let r = full_report(f);
    let p = r.polarized.as_ref().unwrap();
    ensure!(p.verdict == Verdict::Yes, "polarized = {:?} via {:?}", p.verdict, p.path);
    ensure!(p.path == PolarizedPath::Witness, "polarized path {:?}", p.path);
    ensure!(p.q == Some(BigInt::from(5)), "q = {:?}", p.q);
    let w = p.witness.clone().unwrap();
    ensure!(is_ample(f.torus(), &w).unwrap(), "witness is not ample");
    let scaled: Vec<BigRational> = w.iter().map(|x| x * rat(5, 1)).collect();
    ensure!(pullback(f, &w) == scaled, "f^*L != 5L");
    let diagonal = make_subtorus(f.torus(), &ex.sublattices["diagonal"]).unwrap();
    let o = subtorus_orbit(f, &diagonal, DEFAULT_ORBIT_BOUND).unwrap();
    ensure!(o.verdict == OrbitVerdict::EscapingWithinBound { bound: 64 }, "diagonal orbit verdict {:?}", o.verdict);
    Ok("polarized yes, q = 5, f^*L = 5L for an ample L; diagonal escapes within 64".into())
}

fn criterion_5() -> Outcome {
    let width = rat(1, 1_000_000_000);
    let r = report("mult_2_2");
    let p = r.polarized.as_ref().unwrap();
    ensure!(p.q == Some(BigInt::from(4)), "q = {:?}", p.q);
    let mags = r.h1_magnitudes.as_ref().unwrap();
    for e in &mags.entries {
        ensure!(e.contains(&rat(2, 1)), "interval [{}, {}] misses 2", e.lower, e.upper);
        ensure!(e.width() <= width, "width {}", e.width());
    }
    ensure!(serre_test(mags, &BigInt::from(4)).passed, "Serre test rejects [2]");

    let r = report("mult_2_3");
    let mags = r.h1_magnitudes.as_ref().unwrap();
    ensure!(!serre_test(mags, &BigInt::from(6)).passed, "Serre test accepts [2] x [3]");
    let two = mags.entries.iter().find(|e| e.contains(&rat(2, 1)));
    let three = mags.entries.iter().find(|e| e.contains(&rat(3, 1)));
    ensure!(two.is_some() && three.is_some(), "magnitudes 2 and 3 not both certified");
    let (two, three) = (two.unwrap(), three.unwrap());
    ensure!(two.upper < three.lower, "intervals for 2 and 3 overlap");
    ensure!(two.width() <= width && three.width() <= width, "certification too wide");
    ensure!(r.polarized.as_ref().unwrap().path == PolarizedPath::Serre, "[2] x [3] not rejected by Serre");
    Ok("[2]: q = 4, all magnitudes contain 2; [2] x [3]: magnitudes 2 ≠ 3, rejected".into())
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let orders = [CMOrder::Gaussian, CMOrder::Eisenstein];
    for i in 0..200u64 {
        let n = 2 + (i % 3) as usize;
        let pair = random_invariant_pair(n, orders[(i % 2) as usize], 2, sample_seed(6, i)).unwrap();
        let m = pair.endo.matrix();
        let basis = &pair.subtorus.lattice.basis;
        let rq =
            restrict_and_quotient(&m.to_rational(), &pair.subtorus.lattice).map_err(|e| format!("sample {i}: {e}"))?;
        // the restriction really is M on the subtorus basis
        ensure!(
            &m.to_rational() * &basis.to_rational() == &basis.to_rational() * &rq.restricted,
            "sample {i}: restriction does not intertwine"
        );
        let whole = m.charpoly_int().unwrap().to_rational();
        let product = rq.restricted.charpoly().unwrap() * rq.quotient.charpoly().unwrap();
        ensure!(whole == product, "sample {i}: charpoly does not factor");
        let split = eigen_split(&pair.endo, &pair.subtorus).map_err(|e| format!("sample {i}: {e}"))?;
        ensure!(split.delta.clone() * split.quotient.clone() == split.gamma, "sample {i}: Γ != Δ(Γ − Δ)");
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!("200/200 invariant pairs factor exactly, {elapsed:.2?}"))
}

fn criterion_7() -> Outcome {
    let mut not_unity_free = 0;
    let mut total = 0;
    for n in 1..=2usize {
        for order in [CMOrder::Gaussian, CMOrder::Eisenstein] {
            for i in 0..125u64 {
                let f = random_endo(n, order, 3, sample_seed(7 + n as u64, i)).unwrap();
                let uf = unity_free(&f).unwrap().verdict;
                let fs = fixed_subtorus(&f).unwrap().is_some();
                // roots of unity of degree <= 2n over Q have order <= 12
                let d = 2 * n;
                let brute =
                    (1..=12u64).any(|k| (&f.matrix().pow(k) - &IntMatrix::identity(d)).det_int().unwrap().is_zero());
                ensure!(
                    fs == !uf && brute == fs,
                    "n = {n}, {order}, sample {i}: unity-free {uf}, fixed subtorus {fs}, brute {brute}"
                );
                not_unity_free += usize::from(!uf);
                total += 1;
            }
        }
    }
    Ok(format!("{total} samples agree ({not_unity_free} not unity-free)"))
}

fn criterion_8() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_abdyn");
    let start = Instant::now();
    let o = Command::new(bin)
        .args(["sweep", "--count", "500", "--dim", "2", "--seed", "7"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let out = String::from_utf8_lossy(&o.stdout).to_string();
    ensure!(o.status.code() == Some(0), "exit {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
    ensure!(out.contains("samples: 1000, samples with violations: 0"), "summary: {out}");
    within(elapsed, Duration::from_secs(120))?;
    // negative control: a corrupted oracle must be caught
    let bad = Command::new(bin)
        .args(["sweep", "--count", "3", "--dim", "2", "--seed", "7", "--corrupt-oracle"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(bad.status.code() == Some(1), "corrupted oracle exit {:?}", bad.status.code());
    Ok(format!("1000 samples, 0 violations, {elapsed:.2?}; corrupted oracle exits 1"))
}

fn criterion_9() -> Outcome {
    let mut tested = 0;
    let mut i = 0u64;
    while tested < 100 {
        let n = 1 + (i % 2) as usize;
        let order = if i % 4 < 2 { CMOrder::Gaussian } else { CMOrder::Eisenstein };
        let f = random_endo(n, order, 3, sample_seed(9, i)).unwrap();
        i += 1;
        if lefschetz_number(&f).is_zero() {
            continue;
        }
        tested += 1;
        for m in 2..=5u64 {
            let graph = torsion_dynamics(&f, m, DEFAULT_TORSION_BUDGET).unwrap();
            let smith = torsion_fixed_count(&f, m);
            let brute = brute_force_fixed(f.matrix(), m);
            ensure!(
                smith == BigInt::from(brute) && graph.fixed_nodes == brute,
                "sample {i}, m = {m}: Smith {smith}, graph {}, brute force {brute}",
                graph.fixed_nodes
            );
        }
    }
    Ok(format!("100 samples × m ∈ {{2, 3, 4, 5}} agree ({i} drawn)"))
}

fn criterion_10() -> Outcome {
    for i in 0..100u64 {
        let n = 1 + (i % 3) as usize;
        let order = if i % 2 == 0 { CMOrder::Gaussian } else { CMOrder::Eisenstein };
        let f = random_endo(n, order, 3, sample_seed(10, i)).unwrap();
        let det = BigRational::from_integer(lefschetz_number(&f));
        let m = f.matrix().to_rational();
        let mut via_exterior = rat(1, 1);
        for k in 1..=2 * n {
            let t = exterior_power(&m, k).unwrap().trace();
            via_exterior += if k % 2 == 0 { t } else { -t };
        }
        let via_minors = alternating_minor_sum(f.matrix());
        ensure!(det == via_exterior && det == via_minors, "sample {i}: {det} vs {via_exterior} vs {via_minors}");
    }
    Ok("100 samples: det(I − M) = Σ(−1)^k tr Λ^k M".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("[2]x[3]: NS eigenvalues, amplified, not polarized", criterion_1),
        ("E^4 automorphism: unity-free, λ_1 = λ_2 = α²", criterion_2),
        ("[2]x[1]: not unity-free, fixed subtorus, degrees (1, 4, 4)", criterion_3),
        ("(1+2i)x(2+i): polarized with q = 5, escaping diagonal", criterion_4),
        ("Serre magnitude test", criterion_5),
        ("eigenvalue split along invariant subtori", criterion_6),
        ("fixed subtorus <=> not unity-free", criterion_7),
        ("implication-chain sweep", criterion_8),
        ("torsion fixed points vs Smith form", criterion_9),
        ("Lefschetz alternating trace", criterion_10),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2}. {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2}. {title}: {why}", i + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
