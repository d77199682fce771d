//! The focused subcommands. Each returns a document rendered either as JSON
//! or as text, plus any property violations found while producing it.

use std::fmt::Write;

use abdyn::classify::{check_report, dynamical_degrees_with, entropy, full_report_with, render_text, ClassifyOptions};
use abdyn::dynamics::{
    check_torsion_level, fixed_points, lefschetz_number, subtorus_orbit, torsion_dynamics, torsion_fixed_count,
    FixedPointSet, OrbitVerdict, DEFAULT_ORBIT_BOUND, DEFAULT_TORSION_BUDGET,
};
use abdyn::endo::eigen_split;
use abdyn::exactnum::roots::default_precision;
use abdyn::exactnum::scalar::{parse_rational, to_f64};
use abdyn::scenarios::paper_examples;
use abdyn::torus::{make_subtorus, AMPLE_SEARCH_BUDGET};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::failure::Failure;
use crate::scenario::Scenario;

/// A rendered result.
pub struct Output {
    pub json: Value,
    pub text: String,
    /// Property violations detected while computing the result.
    pub violations: Vec<String>,
}

impl Output {
    fn new(json: Value, text: String) -> Self {
        Output { json, text, violations: Vec::new() }
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

/// Parses a positive rational precision such as `1/1000000000`.
pub fn parse_precision(s: &str) -> Result<BigRational, Failure> {
    match parse_rational(s) {
        Some(p) if p.is_positive() => Ok(p),
        _ => Err(Failure::parse(format!("precision '{s}' must be a positive \"p/q\" rational"))),
    }
}

/// Parses a torsion level written as a decimal integer or as `a^b`.
pub fn parse_level(s: &str) -> Result<BigInt, Failure> {
    let bad = || Failure::parse(format!("level '{s}' is not an integer or a power 'a^b'"));
    let s = s.trim();
    match s.split_once('^') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().parse().map_err(|_| bad())?;
            Ok(a.pow(b))
        }
        None => s.parse().map_err(|_| bad()),
    }
}

pub fn classify(
    sc: &Scenario,
    precision: Option<BigRational>,
    budget: Option<usize>,
    seed: u64,
) -> Result<Output, Failure> {
    let opts = ClassifyOptions {
        precision: precision.or_else(|| sc.precision.clone()).unwrap_or_else(default_precision),
        ample_budget: budget.or(sc.budgets.ample).unwrap_or(AMPLE_SEARCH_BUDGET),
        seed,
    };
    let report = full_report_with(&sc.endo, &opts);
    let violations = check_report(&report).iter().map(|v| format!("{}: {}", v.rule, v.detail)).collect();
    Ok(Output { json: to_json(&report), text: render_text(&report), violations })
}

pub fn degrees(sc: &Scenario, precision: Option<BigRational>) -> Result<Output, Failure> {
    let precision = precision.or_else(|| sc.precision.clone()).unwrap_or_else(default_precision);
    let d = dynamical_degrees_with(&sc.endo, &precision)?;
    let h = entropy(&d);
    let mut text = String::new();
    for e in &d.degrees {
        let _ = writeln!(text, "lambda_{} = {:.12}  in [{}, {}]", e.j, e.approx, to_f64(&e.lower), to_f64(&e.upper));
    }
    for p in &d.equal_consecutive_pairs {
        let _ = writeln!(
            text,
            "lambda_{} = lambda_{}  (exact: {}, intervals coincide: {})",
            p.j,
            p.j + 1,
            p.exact,
            p.intervals_coincide
        );
    }
    if let Some(h) = &h {
        let _ = writeln!(text, "entropy = {:.12}  in [{}, {}]", h.approx, h.lower, h.upper);
    }
    let mut json = to_json(&d);
    json["entropy"] = to_json(&h);
    Ok(Output::new(json, text))
}

const TEXT_POINT_LIMIT: usize = 64;

fn point_text(p: &[BigRational]) -> String {
    let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn fixed_points_cmd(sc: &Scenario, k: u64) -> Result<Output, Failure> {
    let g = sc.endo.iterate(k)?;
    let set = fixed_points(&g);
    let l = lefschetz_number(&g);
    let mut text = String::new();
    let _ = writeln!(text, "iterate: {k}");
    let _ = writeln!(text, "lefschetz number det(I - M^{k}): {l}");
    let points = match &set {
        FixedPointSet::Finite { count, points, complete } => {
            let _ = writeln!(text, "fixed points: {count}{}", if *complete { "" } else { " (not listed)" });
            points.as_slice()
        }
        FixedPointSet::CosetFamily { subtorus, transversal, components, complete } => {
            let _ = writeln!(
                text,
                "fixed points: infinite, {components} translates of a subtorus of real rank {}{}",
                subtorus.rank(),
                if *complete { "" } else { " (not listed)" }
            );
            transversal.as_slice()
        }
        FixedPointSet::Empty => {
            let _ = writeln!(text, "fixed points: none");
            &[]
        }
    };
    for p in points.iter().take(TEXT_POINT_LIMIT) {
        let _ = writeln!(text, "  {}", point_text(p));
    }
    if points.len() > TEXT_POINT_LIMIT {
        let _ = writeln!(text, "  ... {} more", points.len() - TEXT_POINT_LIMIT);
    }
    let json = json!({
        "iterate": k,
        "lefschetz": l.to_string(),
        "fixed_points": to_json(&set),
    });
    Ok(Output::new(json, text))
}

/// Resolves the torsion budget and rejects levels that cannot fit it on
/// any torus (every torus has lattice rank at least 2), before a scenario is
/// loaded.
pub fn torsion_precheck(level: &BigInt, budget: Option<u64>) -> Result<(), Failure> {
    check_torsion_level(2, level, budget.unwrap_or(DEFAULT_TORSION_BUDGET))?;
    Ok(())
}

pub fn torsion(sc: &Scenario, level: &BigInt, budget: Option<u64>) -> Result<Output, Failure> {
    let budget = budget.or(sc.budgets.torsion).unwrap_or(DEFAULT_TORSION_BUDGET);
    let f = &sc.endo;
    check_torsion_level(f.torus().rank(), level, budget)?;
    let m = level.to_u64().expect("checked against the budget");
    let g = torsion_dynamics(f, m, budget)?;
    let mut violations = Vec::new();
    let smith = f.tau().iter().all(Zero::is_zero).then(|| torsion_fixed_count(f, m));
    if let Some(s) = &smith {
        if *s != BigInt::from(g.fixed_nodes) {
            violations.push(format!(
                "torsion-fixed-count: orbit graph has {} fixed nodes, Smith form predicts {s}",
                g.fixed_nodes
            ));
        }
    }
    let mut text = String::new();
    let _ = writeln!(text, "level: {m}");
    let _ = writeln!(text, "torsion points: {}", g.node_count);
    let _ = writeln!(text, "fixed points: {}", g.fixed_nodes);
    if let Some(s) = &smith {
        let _ = writeln!(text, "fixed points (Smith form): {s}");
    }
    let _ = writeln!(text, "periodic points: {}", g.periodic_nodes);
    let _ = writeln!(text, "cycles (length: count):");
    for (l, c) in &g.cycle_histogram {
        let _ = writeln!(text, "  {l}: {c}");
    }
    let _ = writeln!(text, "tails (length: points):");
    for (l, c) in &g.tail_histogram {
        let _ = writeln!(text, "  {l}: {c}");
    }
    let mut json = to_json(&g);
    json["smith_fixed_count"] = to_json(&smith.map(|s| s.to_string()));
    Ok(Output { json, text, violations })
}

fn sublattice<'a>(sc: &'a Scenario, name: &str) -> Result<&'a abdyn::matlin::IntMatrix, Failure> {
    sc.sublattices.get(name).ok_or_else(|| {
        let known: Vec<&str> = sc.sublattices.keys().map(String::as_str).collect();
        Failure::validation("not-found", format!("no sublattice named '{name}' (known: {})", known.join(", ")))
    })
}

pub fn quotient(sc: &Scenario, name: &str) -> Result<Output, Failure> {
    let s = make_subtorus(sc.endo.torus(), sublattice(sc, name)?)?;
    let split = eigen_split(&sc.endo, &s)?;
    // eigen_split fails unless the identity holds; re-check what is printed
    let identity = split.delta.clone() * split.quotient.clone() == split.gamma;
    let h1_identity = split.h1_sub.clone() * split.h1_quotient.clone() == sc.endo.matrix().charpoly_int()?;
    let mut violations = Vec::new();
    if !identity || !h1_identity {
        violations.push("eigen-split: characteristic polynomials do not factor".to_string());
    }
    let mut text = String::new();
    let _ = writeln!(text, "sublattice: {name} (complex dimension {})", s.dim());
    let _ = writeln!(text, "Gamma (f):            {}", split.gamma);
    let _ = writeln!(text, "Delta (subtorus):     {}", split.delta);
    let _ = writeln!(text, "Gamma - Delta (quot): {}", split.quotient);
    let _ = writeln!(text, "h1 on subtorus:       {}", split.h1_sub);
    let _ = writeln!(text, "h1 on quotient:       {}", split.h1_quotient);
    let _ = writeln!(text, "product identity:     {}", if identity && h1_identity { "holds" } else { "FAILS" });
    let json = json!({
        "sublattice": name,
        "dimension": s.dim(),
        "gamma": to_json(&split.gamma),
        "delta": to_json(&split.delta),
        "quotient": to_json(&split.quotient),
        "h1_sub": to_json(&split.h1_sub),
        "h1_quotient": to_json(&split.h1_quotient),
        "m_sub": to_json(&split.m_sub),
        "m_quotient": to_json(&split.m_quotient),
        "product_identity": identity && h1_identity,
    });
    Ok(Output { json, text, violations })
}

pub fn orbit(sc: &Scenario, name: &str, bound: Option<usize>) -> Result<Output, Failure> {
    let bound = bound.or(sc.budgets.orbit).unwrap_or(DEFAULT_ORBIT_BOUND);
    let s = make_subtorus(sc.endo.torus(), sublattice(sc, name)?)?;
    let o = subtorus_orbit(&sc.endo, &s, bound)?;
    let verdict = match &o.verdict {
        OrbitVerdict::Invariant => "invariant".to_string(),
        OrbitVerdict::Periodic { period } => format!("periodic with period {period}"),
        OrbitVerdict::EscapingWithinBound { bound } => {
            format!("escaping within {bound} iterations (no return observed)")
        }
    };
    let mut text = String::new();
    let _ = writeln!(text, "sublattice: {name}");
    let _ = writeln!(text, "verdict: {verdict}");
    let _ = writeln!(text, "orbit terms computed: {}", o.sequence.len());
    let json = json!({
        "sublattice": name,
        "bound": bound,
        "verdict": to_json(&o.verdict),
        "sequence": to_json(&o.sequence),
    });
    Ok(Output::new(json, text))
}

pub fn examples() -> Output {
    let mut text = String::new();
    let mut list = Vec::new();
    for (name, e) in paper_examples() {
        let subs: Vec<&String> = e.sublattices.keys().collect();
        let _ = writeln!(text, "{name:<14} n={}  {}", e.endo.dim(), e.description);
        list.push(json!({
            "name": name,
            "description": e.description,
            "dimension": e.endo.dim(),
            "sublattices": subs,
        }));
    }
    Output::new(Value::Array(list), text)
}
