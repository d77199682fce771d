//! `abdyn`: exact dynamics of endomorphisms of CM complex tori.
//!
//! Exit codes: 0 success, 1 property violation, 2 parse error,
//! 3 domain or validation error, 4 resource limit.

mod commands;
mod failure;
mod scenario;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use abdyn::scenarios::{paper_example, CMOrder};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::Output;
use crate::failure::{Failure, EXIT_OK, EXIT_VIOLATION};
use crate::scenario::{Budgets, Scenario, ScenarioFile};

#[derive(Parser, Debug)]
#[command(name = "abdyn", version, about = "Exact dynamics of endomorphisms of CM complex tori")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Where the scenario comes from: a file or a built-in example.
#[derive(Args, Debug)]
struct Input {
    /// Scenario file (JSON).
    #[arg(conflicts_with = "example")]
    path: Option<PathBuf>,
    /// Built-in example name (see `abdyn examples`).
    #[arg(long)]
    example: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full classification report.
    Classify {
        #[command(flatten)]
        input: Input,
        /// Width bound for certified magnitudes, as "p/q".
        #[arg(long)]
        precision: Option<String>,
        /// Candidate budget for ample-class searches.
        #[arg(long)]
        budget: Option<usize>,
        /// Seed for the random phase of ample-class searches.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Dynamical degrees with certified enclosures.
    Degrees {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        precision: Option<String>,
    },
    /// Fixed points of an iterate.
    FixedPoints {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        iterate: u64,
    },
    /// Orbit graph on the m-torsion points.
    Torsion {
        #[command(flatten)]
        input: Input,
        /// Torsion level m, as an integer or a power such as 10^9.
        #[arg(long)]
        level: String,
        /// Maximum number of torsion points.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Eigenvalue split along an invariant subtorus.
    Quotient {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        sublattice: String,
    },
    /// Orbit of a subtorus under the map.
    Orbit {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        sublattice: String,
        /// Maximum number of iterations.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Check the implication chain on random samples.
    Sweep {
        /// Samples per (dimension, order) cell.
        #[arg(long, default_value_t = 500)]
        count: u64,
        /// Complex dimensions (repeatable; default 1 and 2).
        #[arg(long)]
        dim: Vec<usize>,
        /// CM orders (repeatable; default gaussian and eisenstein).
        #[arg(long)]
        order: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Coefficient height bound of the sampled matrices.
        #[arg(long, default_value_t = 3)]
        height: u32,
        /// Largest iterate checked per sample.
        #[arg(long, default_value_t = 4)]
        kmax: u64,
        /// Candidate budget for ample-class searches.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, hide = true)]
        corrupt_oracle: bool,
    },
    /// List the built-in examples.
    Examples,
}

fn load(input: &Input) -> Result<Scenario, Failure> {
    match (&input.path, &input.example) {
        (_, Some(name)) => {
            let e = paper_example(name)?;
            Ok(Scenario { endo: e.endo, sublattices: e.sublattices, budgets: Budgets::default(), precision: None })
        }
        (Some(path), None) => {
            let shown = path.display().to_string();
            let text = std::fs::read_to_string(path).map_err(|e| Failure::io(&shown, &e))?;
            let file = ScenarioFile::parse(&text).map_err(|f| Failure::parse(format!("{shown}: {}", f.message)))?;
            file.validate()
        }
        (None, None) => Err(Failure::parse("no scenario given: pass a file path or --example NAME")),
    }
}

fn parse_orders(names: &[String]) -> Result<Vec<CMOrder>, Failure> {
    if names.is_empty() {
        return Ok(vec![CMOrder::Gaussian, CMOrder::Eisenstein]);
    }
    names.iter().map(|s| s.parse::<CMOrder>().map_err(Failure::from)).collect()
}

fn run(command: Command) -> Result<Output, Failure> {
    use commands::*;
    match command {
        Command::Classify { input, precision, budget, seed } => {
            let precision = precision.as_deref().map(parse_precision).transpose()?;
            classify(&load(&input)?, precision, budget, seed)
        }
        Command::Degrees { input, precision } => {
            let precision = precision.as_deref().map(parse_precision).transpose()?;
            degrees(&load(&input)?, precision)
        }
        Command::FixedPoints { input, iterate } => {
            if iterate == 0 {
                return Err(Failure::validation("domain", "--iterate must be at least 1"));
            }
            fixed_points_cmd(&load(&input)?, iterate)
        }
        Command::Torsion { input, level, budget } => {
            let level = parse_level(&level)?;
            torsion_precheck(&level, budget)?;
            torsion(&load(&input)?, &level, budget)
        }
        Command::Quotient { input, sublattice } => quotient(&load(&input)?, &sublattice),
        Command::Orbit { input, sublattice, budget } => orbit(&load(&input)?, &sublattice, budget),
        Command::Sweep { count, dim, order, seed, height, kmax, budget, corrupt_oracle } => {
            let dims = if dim.is_empty() { vec![1, 2] } else { dim };
            let cfg = sweep::SweepConfig {
                count,
                dims,
                orders: parse_orders(&order)?,
                seed,
                height,
                kmax,
                ample_budget: budget,
                corrupt_oracle,
            };
            sweep::sweep(&cfg)
        }
        Command::Examples => Ok(examples()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli.command) {
        Ok(out) => {
            match format {
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"))
                }
                Format::Text => print!("{}", out.text),
            }
            if out.violations.is_empty() {
                ExitCode::from(EXIT_OK)
            } else {
                for v in &out.violations {
                    eprintln!("abdyn: violation: {v}");
                }
                ExitCode::from(EXIT_VIOLATION)
            }
        }
        Err(f) => {
            match format {
                Format::Json => {
                    eprintln!("{}", serde_json::to_string(&serde_json::json!({ "error": f })).expect("serializable"))
                }
                Format::Text => eprintln!("abdyn: {f}"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
