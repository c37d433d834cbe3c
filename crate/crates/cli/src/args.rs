use std::path::PathBuf;

use betadom::lpp::LppModel;
use betadom::operator::{DEFAULT_LENGTH, DEFAULT_STEP};
use betadom::stats::DEFAULT_LEVEL;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "betadom",
    version,
    about = "Beta-ensemble samplers, couplings and stochastic domination checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Every JSON report embeds the parsed command as its run configuration.
#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Sample the largest Hermite eigenvalue and its edge scaling.
    Hermite(HermiteArgs),
    /// Sample the largest Laguerre eigenvalue and its edge scaling.
    Laguerre(LaguerreArgs),
    /// Coupled Hermite pair; beta2 = m * beta1 / n.
    CoupleHermite(CoupleHermiteArgs),
    /// Coupled Laguerre pair; beta2 = m * beta1 / n.
    CoupleLaguerre(CoupleLaguerreArgs),
    /// Sample TW_{beta,k} from the discretised stochastic operator.
    Tw(TwArgs),
    /// Shared-noise comparison of the rescaled operators.
    TwCouple(TwCoupleArgs),
    /// Admissible p, alpha and s ranges.
    TwRange(TwRangeArgs),
    /// Sample an exponential last-passage time.
    Lpp(LppArgs),
    /// Two-sample check of a last-passage / Laguerre identity in law.
    IdentityCheck(IdentityArgs),
    /// One-sided KS check that column X dominates column Y.
    Dominance(DominanceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct McOpts {
    #[arg(long, default_value_t = 1000)]
    pub reps: u64,
    /// Base seed; replica r uses stream (seed, r).
    #[arg(long, env = "BETADOM_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputOpts {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HermiteArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub beta: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: McOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LaguerreArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub kappa: f64,
    #[arg(long)]
    pub beta: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: McOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CoupleHermiteArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub beta1: f64,
    /// Allowed shortfall of the dominating eigenvalue.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: McOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CoupleLaguerreArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub kappa: f64,
    #[arg(long)]
    pub beta1: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: McOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridOpts {
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    /// Truncation point of the half-line.
    #[arg(long = "length", visible_alias = "L", default_value_t = DEFAULT_LENGTH)]
    pub length: f64,
    /// Finite-difference step.
    #[arg(long = "step", visible_alias = "h", default_value_t = DEFAULT_STEP)]
    pub step: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TwArgs {
    #[arg(long)]
    pub beta: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: McOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(group(ArgGroup::new("rescaling").required(true).args(["p", "s"])))]
pub struct TwCoupleArgs {
    #[arg(long)]
    pub beta1: f64,
    #[arg(long)]
    pub beta2: f64,
    #[arg(long)]
    pub p: Option<f64>,
    /// Exponent with alpha = (beta2/beta1)^s.
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: McOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TwRangeArgs {
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    #[arg(long)]
    pub beta1: f64,
    #[arg(long)]
    pub beta2: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelArg {
    PointToPoint,
    PointToLine,
    Symmetrized,
}

impl From<ModelArg> for LppModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::PointToPoint => LppModel::PointToPoint,
            ModelArg::PointToLine => LppModel::PointToLine,
            ModelArg::Symmetrized => LppModel::Symmetrized,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LppArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: McOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    /// Point-to-point time vs the beta=2 Laguerre (n, n) eigenvalue.
    Johansson,
    /// Point-to-line time vs half the beta=1 Laguerre (2n-1, 2n) eigenvalue.
    Flat,
    /// Symmetrized time on [1, 2n]^2 vs twice the beta=4 Laguerre (n, n-1/2) eigenvalue.
    Baik,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IdentityArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    #[arg(long)]
    pub n: usize,
    #[arg(long = "alpha-level", default_value_t = DEFAULT_LEVEL)]
    pub alpha_level: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: McOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DominanceArgs {
    /// CSV holding the dominating sample.
    #[arg(long)]
    pub x: PathBuf,
    /// CSV holding the dominated sample.
    #[arg(long)]
    pub y: PathBuf,
    /// Column of X; defaults to the first column after `replica`.
    #[arg(long)]
    pub x_column: Option<String>,
    #[arg(long)]
    pub y_column: Option<String>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub x_scale: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x_shift: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub y_scale: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub y_shift: f64,
    #[arg(long = "alpha-level", default_value_t = DEFAULT_LEVEL)]
    pub alpha_level: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputOpts,
}
