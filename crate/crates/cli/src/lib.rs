//! Command-line harness: generation, bound reports, product checks, Tucker
//! certificates and reduction checks, with an optional result cache.

pub mod cache;
pub mod commands;
pub mod instance;

use std::fmt;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "kneser-lab", version, about = "Exact chromatic numbers and lower bounds for Kneser hypergraphs and their products")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for random generators and sampled certification.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// JSONL result cache.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Emit flat CSV rows instead of JSON.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Recompute cached results and compare.
    #[arg(long, global = true)]
    pub recheck: bool,
    /// Search-node limit per coloring decision and pattern limit per
    /// certification property.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a generated hypergraph as JSON.
    Gen {
        /// `name:k=v,...` or `name k=v ...`
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// χ(KG^r(H)) against the defect and alternation lower bounds.
    Bound {
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
        #[arg(long)]
        r: Option<usize>,
    },
    /// χ of a product of Kneser hypergraphs against the bounds and the
    /// pullback upper bound.
    Product {
        /// One base-hypergraph spec per factor.
        #[arg(required = true, num_args = 1..)]
        factors: Vec<String>,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Build the Tucker labeling from a coloring and check its hypotheses.
    Certify(CertifyArgs),
    /// Check the reduction inequality for one hypergraph.
    VerifyReduction {
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long = "colors", short = 'C')]
        c: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Defect)]
        variant: VariantArg,
    },
    /// r-alternation number (or its value at one permutation).
    Alt {
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
        #[arg(long)]
        r: usize,
        /// Comma-separated permutation of 1..=n.
        #[arg(long)]
        perm: Option<String>,
        /// Strong alternation number (r = 2 only).
        #[arg(long)]
        strong: bool,
    },
    /// r-colorability defect.
    Defect {
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
        #[arg(long)]
        r: usize,
    },
    /// Chromatic number of the generated hypergraph itself.
    Chromatic {
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
    },
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// One base-hypergraph spec per factor; factor 1 must minimize the
    /// defect (or n - alt).
    #[arg(long = "factor", required = true)]
    pub factors: Vec<String>,
    #[arg(long)]
    pub p: usize,
    #[arg(long, value_enum, default_value_t = ColoringSource::Formula)]
    pub coloring: ColoringSource,
    /// Coloring JSON (`[c1, c2, ...]` or `{"colors": [...], "num_colors": C}`)
    /// for `--coloring file`.
    #[arg(long)]
    pub coloring_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = VariantArg::Defect)]
    pub variant: VariantArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,
    /// Patterns per property in sampled mode.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Where to write the certificate.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ColoringSource {
    File,
    /// The standard optimal coloring of each complete-k-subset factor,
    /// pulled back from the factor of least chromatic number.
    Formula,
    Solver,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantArg {
    Defect,
    Alternation,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Exhaustive,
    Sampled,
}

/// A command's result: the JSON report, its CSV rows, and the names of any
/// violated invariants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Output {
    pub report: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub violations: Vec<String>,
}

impl Output {
    pub fn render(&self, csv_mode: bool) -> Result<String> {
        if !csv_mode {
            return Ok(serde_json::to_string_pretty(&self.report)? + "\n");
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    pub fn exit_code(&self) -> i32 {
        if self.violations.is_empty() {
            EXIT_OK
        } else {
            EXIT_INVARIANT
        }
    }
}

/// A mathematical invariant failed outside a report (for example a cached
/// result disagreeing with a fresh computation).
#[derive(Debug)]
pub struct InvariantViolation(pub String);

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invariant violated: {}", self.0)
    }
}

impl std::error::Error for InvariantViolation {}

pub fn exit_code_for(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<InvariantViolation>().is_some() {
        return EXIT_INVARIANT;
    }
    match err.downcast_ref::<kneser_lab::Error>() {
        Some(kneser_lab::Error::CapExceeded { .. }) => EXIT_BUDGET,
        _ => EXIT_INPUT,
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    if let Some(n) = cli.global.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    commands::dispatch(&cli.global, &cli.command)
}
