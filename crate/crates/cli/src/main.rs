//! `prtail`: PageRank and in-degree tail experiments from the command line.
//!
//! Every subcommand writes plain text/CSV outputs plus a `manifest.json`
//! into `--out`. Exit codes: 0 success, 2 parameter error, 3 I/O or parse
//! error, 4 numeric non-convergence.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "prtail", version, about = "Power-law tails of PageRank and in-degree")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// PageRank of an edge-list graph, with CCDFs and tail fits.
    Pagerank(PagerankArgs),
    /// Monte-Carlo solution of the stochastic PageRank equation.
    Model(ModelArgs),
    /// Growing network with preferential and uniform attachment.
    GenerateGn(GrowArgs),
    /// Observed vs predicted tail offsets over a grid of damping factors.
    Compare(CompareArgs),
    /// Predicted tail factor over a grid of damping factors.
    Factor(FactorArgs),
    /// Numerical Laplace-Stieltjes transform of R.
    Lst(LstArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum DanglingArg {
    Redistribute,
    Drop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum TailFamily {
    Constant,
    Logarithmic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum IntervalArg {
    Pareto,
    Exponential,
}

#[derive(Debug, Args, Serialize)]
struct PagerankArgs {
    /// SNAP-style edge list ("src dst" per line, '#' comments).
    graph: PathBuf,
    /// Damping factor(s), comma separated.
    #[arg(long = "c", value_delimiter = ',', default_value = "0.85")]
    c: Vec<f64>,
    /// L1 change per node at which power iteration stops.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    #[arg(long, value_enum, default_value_t = DanglingArg::Redistribute)]
    dangling: DanglingArg,
    /// Keep repeated edges instead of merging them.
    #[arg(long)]
    keep_duplicates: bool,
    /// Fraction of the largest values used by tail fits.
    #[arg(long, default_value_t = 0.1)]
    xmin_fraction: f64,
    #[arg(long, default_value = "out")]
    #[serde(skip)]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct ModelShared {
    /// Out-degree of every page.
    #[arg(long, default_value_t = 8.2)]
    d: f64,
    /// Tail index of the interval T.
    #[arg(long, default_value_t = 1.1)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = TailFamily::Constant)]
    slowly_varying: TailFamily,
    /// Pool size of the population-dynamics iteration.
    #[arg(long, default_value_t = 1_000_000)]
    pool: usize,
    #[arg(long, default_value_t = 30)]
    generations: usize,
    /// Number of N(T) draws for the in-degree reference (default: pool).
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.005)]
    ks_threshold: f64,
    #[arg(long, default_value_t = 0.1)]
    xmin_fraction: f64,
    #[arg(long, default_value = "out")]
    #[serde(skip)]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct ModelArgs {
    #[arg(long = "c", default_value_t = 0.85)]
    c: f64,
    #[command(flatten)]
    #[serde(flatten)]
    shared: ModelShared,
}

#[derive(Debug, Args, Serialize)]
struct CompareArgs {
    /// Damping factors, comma separated.
    #[arg(long = "c", value_delimiter = ',')]
    c: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    shared: ModelShared,
}

#[derive(Debug, Args, Serialize)]
struct GrowArgs {
    /// Probability that a link ignores in-degrees.
    #[arg(long, default_value_t = 0.2)]
    beta: f64,
    #[arg(long, default_value_t = 8)]
    d: usize,
    /// Final node count.
    #[arg(long, default_value_t = 50_000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.1)]
    xmin_fraction: f64,
    #[arg(long, default_value = "out")]
    #[serde(skip)]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct FactorArgs {
    /// Damping factors (default 0.01, 0.02, ..., 0.99).
    #[arg(long = "c", value_delimiter = ',')]
    c: Vec<f64>,
    #[arg(long, default_value_t = 8.2)]
    d: f64,
    #[arg(long, default_value_t = 1.1)]
    alpha: f64,
    #[arg(long, default_value = "out")]
    #[serde(skip)]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct LstArgs {
    #[arg(long = "c", default_value_t = 0.85)]
    c: f64,
    #[arg(long, default_value_t = 8.2)]
    d: f64,
    #[arg(long, default_value_t = 1.1)]
    alpha: f64,
    /// Law of T; exponential ignores --alpha.
    #[arg(long, value_enum, default_value_t = IntervalArg::Pareto)]
    interval: IntervalArg,
    #[arg(long, default_value_t = 2048)]
    points: usize,
    #[arg(long, default_value_t = 1e-6)]
    s_min: f64,
    #[arg(long, default_value_t = 1e2)]
    s_max: f64,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 1000)]
    max_sweeps: usize,
    #[arg(long, default_value = "out")]
    #[serde(skip)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Pagerank(a) => commands::pagerank(a),
        Command::Model(a) => commands::model(a),
        Command::GenerateGn(a) => commands::generate_gn(a),
        Command::Compare(a) => commands::compare(a),
        Command::Factor(a) => commands::factor(a),
        Command::Lst(a) => commands::lst(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("prtail: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
