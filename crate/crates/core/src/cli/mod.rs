//! Command-line front end: `profile`, `index`, `scan`, `evolve`, `gplot`.
//!
//! Settings resolve as flags > config file > defaults. The config file is
//! flat `key = value` text; keys mostly match the long flag names with `_`
//! for `-` (the tolerance keys are `zero_tol_rel`, `gap_tol_rel`, `b_tol`, `tol`).

mod commands;
mod config;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::run;
pub use config::ConfigFile;
pub use report::{fmt_num, json_num, round_sig};

#[derive(Parser, Debug)]
#[command(name = "wavestab", version, about = "Linear stability of traveling waves via the quadratic pencil index")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a wave profile (CSV x,phi[,psi] and JSON metadata).
    Profile(CommonArgs),
    /// Spectral assumptions, index and verdict at omega = |c| (JSON).
    Index(IndexArgs),
    /// Verdicts over a range of speeds (CSV and JSON summary).
    Scan(ScanArgs),
    /// Time-domain growth rate versus the pencil eigenvalue.
    Evolve(EvolveArgs),
    /// Gnuplot data: G(lambda) traces and omega*(c) curves.
    Gplot(GplotArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Grid points.
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Domain half-length.
    #[arg(long = "L")]
    pub l: Option<f64>,
    #[arg(long = "tol-zero")]
    pub tol_zero: Option<f64>,
    #[arg(long = "tol-gap")]
    pub tol_gap: Option<f64>,
    #[arg(long = "tol-b")]
    pub tol_b: Option<f64>,
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
    #[arg(long = "solver-tol")]
    pub solver_tol: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct IndexArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Verdict at this omega instead of |c|.
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// Also write the root-search trace (trace.txt).
    #[arg(long)]
    pub trace: bool,
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long = "c-lo")]
    pub c_lo: Option<f64>,
    #[arg(long = "c-hi")]
    pub c_hi: Option<f64>,
    #[arg(long)]
    pub dc: Option<f64>,
    /// Skip the unstable-eigenvalue search.
    #[arg(long = "no-roots")]
    pub no_roots: bool,
    /// Skip bisection of the detected threshold.
    #[arg(long = "no-refine")]
    pub no_refine: bool,
}

#[derive(Args, Debug, Clone)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct GplotArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long = "lambda-min")]
    pub lambda_min: Option<f64>,
    #[arg(long = "lambda-max")]
    pub lambda_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Scan CSV files to convert into omega*(c) curves.
    #[arg(long = "scan")]
    pub scan: Vec<PathBuf>,
}
