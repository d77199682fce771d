//! Randomized check of the implication chain over CM samples.

use std::collections::BTreeMap;
use std::fmt::Write;

use abdyn::classify::{check_report, full_report_in, verify_iterates_in, ClassifyOptions, TorusContext, Verdict};
use abdyn::endo::TorusEndomorphism;
use abdyn::scenarios::{power, random_endo, sample_seed, CMOrder};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::commands::Output;
use crate::failure::Failure;
use crate::scenario::ScenarioFile;

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub count: u64,
    pub dims: Vec<usize>,
    pub orders: Vec<CMOrder>,
    pub seed: u64,
    pub height: u32,
    pub kmax: u64,
    pub ample_budget: Option<usize>,
    /// Negative control: flips every unity-free verdict before checking, so
    /// a working checker must report violations.
    pub corrupt_oracle: bool,
}

/// Verdict cell of one sample.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Cell {
    pub dim: usize,
    pub order: String,
    pub unity_free: String,
    pub amplified: String,
    pub polarized: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleViolation {
    pub dim: usize,
    pub order: String,
    pub index: u64,
    pub sample_seed: u64,
    pub violations: Vec<String>,
    pub scenario: ScenarioFile,
}

fn verdict_name(v: Option<Verdict>) -> String {
    match v {
        Some(Verdict::Yes) => "yes",
        Some(Verdict::No) => "no",
        Some(Verdict::Inconclusive) => "inconclusive",
        None => "n/a",
    }
    .to_string()
}

/// Seed of the sample stream for one (dimension, order) cell.
fn cell_seed(seed: u64, dim: usize, order_index: usize) -> u64 {
    sample_seed(sample_seed(seed, dim as u64), order_index as u64)
}

struct SampleResult {
    cell: Cell,
    violations: Vec<String>,
    sample_seed: u64,
    endo: TorusEndomorphism,
}

fn run_sample(
    dim: usize,
    order: CMOrder,
    s: u64,
    cfg: &SweepConfig,
    ctx: &TorusContext,
    opts: &ClassifyOptions,
) -> Result<SampleResult, Failure> {
    let f = random_endo(dim, order, cfg.height, s)?;
    let mut report = full_report_in(&f, ctx, opts);
    if cfg.corrupt_oracle {
        report.unity_free = report.unity_free.map(|u| !u);
    }
    let mut violations: Vec<String> =
        check_report(&report).iter().map(|v| format!("{}: {}", v.rule, v.detail)).collect();
    for e in &report.errors {
        if e.code == "invariant-violation" {
            violations.push(format!("{}: {}", e.operation, e.message));
        }
    }
    match verify_iterates_in(&f, cfg.kmax, ctx, opts) {
        Ok(it) => violations.extend(it.violations.iter().map(|v| format!("{}: {}", v.rule, v.detail))),
        Err(e) => violations.push(format!("verify_iterates: {e}")),
    }
    let cell = Cell {
        dim,
        order: order.to_string(),
        unity_free: match report.unity_free {
            Some(true) => "yes".into(),
            Some(false) => "no".into(),
            None => "n/a".into(),
        },
        amplified: verdict_name(report.amplified.as_ref().map(|a| a.verdict)),
        polarized: verdict_name(report.polarized.as_ref().map(|p| p.verdict)),
    };
    Ok(SampleResult { cell, violations, sample_seed: s, endo: f })
}

pub fn sweep(cfg: &SweepConfig) -> Result<Output, Failure> {
    let opts = ClassifyOptions {
        ample_budget: cfg.ample_budget.unwrap_or(abdyn::torus::AMPLE_SEARCH_BUDGET),
        ..ClassifyOptions::default()
    };
    let mut cells: BTreeMap<Cell, u64> = BTreeMap::new();
    let mut failures: Vec<SampleViolation> = Vec::new();
    let mut samples = 0u64;
    for &dim in &cfg.dims {
        for (oi, &order) in cfg.orders.iter().enumerate() {
            let ctx = TorusContext::new(&power(order, dim)?, &opts);
            let base = cell_seed(cfg.seed, dim, oi);
            let results: Vec<Result<SampleResult, Failure>> = (0..cfg.count)
                .into_par_iter()
                .map(|i| run_sample(dim, order, sample_seed(base, i), cfg, &ctx, &opts))
                .collect();
            for (i, r) in results.into_iter().enumerate() {
                let r = r?;
                samples += 1;
                *cells.entry(r.cell).or_default() += 1;
                if !r.violations.is_empty() {
                    failures.push(SampleViolation {
                        dim,
                        order: order.to_string(),
                        index: i as u64,
                        sample_seed: r.sample_seed,
                        violations: r.violations,
                        scenario: ScenarioFile::from_endo(&r.endo, &BTreeMap::new()),
                    });
                }
            }
        }
    }

    let mut text = String::new();
    let _ = writeln!(
        text,
        "sweep: seed {}, {} samples per cell, height {}, iterates up to {}",
        cfg.seed, cfg.count, cfg.height, cfg.kmax
    );
    let _ = writeln!(
        text,
        "{:<4} {:<14} {:<11} {:<13} {:<13} {:>6}",
        "dim", "order", "unity-free", "amplified", "polarized", "count"
    );
    for (c, n) in &cells {
        let _ = writeln!(
            text,
            "{:<4} {:<14} {:<11} {:<13} {:<13} {:>6}",
            c.dim, c.order, c.unity_free, c.amplified, c.polarized, n
        );
    }
    let _ = writeln!(text, "samples: {samples}, samples with violations: {}", failures.len());
    for f in &failures {
        let _ = writeln!(text, "violation in dim {} {} sample {} (seed {}):", f.dim, f.order, f.index, f.sample_seed);
        for v in &f.violations {
            let _ = writeln!(text, "  {v}");
        }
        let _ = writeln!(text, "  scenario: {}", serde_json::to_string(&f.scenario).expect("serializable"));
    }
    let json = json!({
        "seed": cfg.seed,
        "count": cfg.count,
        "height": cfg.height,
        "kmax": cfg.kmax,
        "cells": cells.iter().map(|(c, n)| {
            let mut v = serde_json::to_value(c).expect("serializable");
            v["count"] = json!(n);
            v
        }).collect::<Vec<_>>(),
        "samples": samples,
        "violations": failures,
    });
    let violations = failures
        .iter()
        .map(|f| format!("dim {} {} sample {}: {}", f.dim, f.order, f.index, f.violations.join("; ")))
        .collect();
    Ok(Output { json, text, violations })
}
