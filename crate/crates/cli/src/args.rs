use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use zetalab::{Family, TestFunction};

#[derive(Debug, Parser)]
#[command(name = "zetalab", version, about = "Linear statistics of zeta zeros, their explicit formula and the CUE model")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct Global {
    /// key=value file; flags given on the command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Worker threads (output does not depend on this).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Sieve limit for the prime-power table instead of ⌊T^α⌋.
    #[arg(long, global = true)]
    pub prime_limit: Option<u64>,
    /// Added to every ordinate read from a zero file.
    #[arg(long, global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    pub zero_offset: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute, import or audit zero ordinates.
    #[command(subcommand)]
    Zeros(ZerosCommand),
    /// Evaluate the statistic and its explicit-formula parts at one τ.
    #[command(subcommand)]
    Linstat(LinstatCommand),
    /// Averaged moments of the oscillatory prime sum.
    #[command(subcommand)]
    Moments(MomentsCommand),
    /// Diagonal prime sum against the limiting variance.
    #[command(subcommand)]
    Diag(DiagCommand),
    /// Monte-Carlo moments in the CUE model.
    #[command(subcommand)]
    Rmt(RmtCommand),
}

#[derive(Debug, Subcommand)]
pub enum ZerosCommand {
    /// Locate the zeros in [tmin, tmax].
    #[command(args_override_self = true)]
    Find(FindArgs),
    /// Read a zero file.
    #[command(args_override_self = true)]
    Import(ImportArgs),
    /// Compare a zero count with the smooth count.
    #[command(args_override_self = true)]
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum LinstatCommand {
    /// Mean and oscillatory parts, plus the direct sum with --direct or --zeros.
    #[command(args_override_self = true)]
    Eval(LinstatArgs),
    /// All three parts and the residual of the explicit formula.
    #[command(args_override_self = true)]
    Identity(LinstatArgs),
}

#[derive(Debug, Subcommand)]
pub enum MomentsCommand {
    #[command(args_override_self = true)]
    Run(MomentsArgs),
}

#[derive(Debug, Subcommand)]
pub enum DiagCommand {
    #[command(args_override_self = true)]
    Check(DiagArgs),
}

#[derive(Debug, Subcommand)]
pub enum RmtCommand {
    #[command(args_override_self = true)]
    Run(RmtArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyArg {
    /// (1 − v²)^k profile.
    Poly,
    /// exp(1 − 1/(1 − v²)) profile.
    Bump,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct FunctionArgs {
    /// Support of f̂ is [−alpha, alpha].
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = FamilyArg::Poly)]
    pub family: FamilyArg,
    /// Exponent of the polynomial family.
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub scale: f64,
}

impl FunctionArgs {
    pub fn build(&self) -> zetalab::Result<TestFunction> {
        let family = match self.family {
            FamilyArg::Poly => Family::PolynomialSmooth { k: self.k },
            FamilyArg::Bump => Family::InfinitelySmoothBump,
        };
        TestFunction::new(self.alpha, family, self.scale)
    }
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct FindArgs {
    #[arg(long)]
    pub tmin: f64,
    #[arg(long)]
    pub tmax: f64,
    /// Bisection tolerance.
    #[arg(long, default_value_t = zetalab::zeros::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ImportArgs {
    /// Zero file: one ordinate per line, '#' comments.
    #[arg(long)]
    pub path: PathBuf,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Audit an imported file ...
    #[arg(long, conflicts_with_all = ["tmin", "tmax"])]
    pub path: Option<PathBuf>,
    /// ... or freshly computed zeros on [tmin, tmax].
    #[arg(long, requires = "tmax")]
    pub tmin: Option<f64>,
    #[arg(long, requires = "tmin")]
    pub tmax: Option<f64>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct LinstatArgs {
    #[arg(long)]
    pub tau: f64,
    /// Height T setting the scale log T / 2π.
    #[arg(long = "T")]
    pub t: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub function: FunctionArgs,
    /// Zero file for the direct sum (computed when absent).
    #[arg(long)]
    pub zeros: Option<PathBuf>,
    /// Compute the zeros the direct sum needs (eval only; identity always does).
    #[arg(long)]
    pub direct: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GridStep {
    Auto,
    Fixed(f64),
}

impl std::str::FromStr for GridStep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(GridStep::Auto);
        }
        s.parse().map(GridStep::Fixed).map_err(|e| format!("expected 'auto' or a number: {e}"))
    }
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct MomentsArgs {
    #[arg(long = "T")]
    pub t: f64,
    /// H = T^a.
    #[arg(long, default_value_t = 0.5)]
    pub a: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub function: FunctionArgs,
    #[arg(long, default_value_t = 4)]
    pub mmax: usize,
    /// Truncation |τ − T| <= K·H.
    #[arg(long = "K", default_value_t = zetalab::stats::DEFAULT_K)]
    pub truncation_k: f64,
    #[arg(long, default_value = "auto")]
    pub grid_step: GridStep,
    /// Rows of (m, value, prediction, support_ok, error) instead of JSON.
    #[arg(long, conflicts_with = "hist")]
    pub csv: bool,
    /// Add a histogram of Nos(τ) with the Gaussian density.
    #[arg(long)]
    pub hist: bool,
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct DiagArgs {
    /// Heights, comma separated.
    #[arg(long = "T", value_delimiter = ',', default_values_t = [1.0e4, 1.0e6, 1.0e8])]
    pub t: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub function: FunctionArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct RmtArgs {
    /// Matrix dimension.
    #[arg(long = "N", default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub function: FunctionArgs,
    #[arg(long, default_value_t = 4)]
    pub mmax: usize,
    #[arg(long, conflicts_with = "hist")]
    pub csv: bool,
    /// Add a histogram of Z_f with the Gaussian density.
    #[arg(long)]
    pub hist: bool,
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
}
