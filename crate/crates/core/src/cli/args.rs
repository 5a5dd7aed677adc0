use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::robustness::Norm;
use crate::strategy::StrategyKind;

#[derive(Debug, Parser)]
#[command(name = "quantcert", version, about = "Sampling-based quantitative certification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Subcommands. Everything except `replay` is recorded verbatim in the
/// report's `config` block.
#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "snake_case")]
pub enum Command {
    /// Certify that a failure rate is at most theta.
    Certify(CertifyArgs),
    /// Largest perturbation radius that still certifies Yes.
    Hardness(HardnessArgs),
    /// Monte-Carlo sample-count sweep against Bernoulli oracles.
    Simulate(SimulateArgs),
    /// Tester sample size and threshold for one interval; no sampling.
    Plan(PlanArgs),
    /// Worst-case BinCert sample budget; no sampling.
    Budget(BudgetArgs),
    /// Re-run the config embedded in a previous JSON report.
    #[serde(skip)]
    Replay(ReplayArgs),
}

/// Flags shared by every subcommand. Only the seed, limits, batch size and
/// timing switch enter the recorded config.
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct CommonArgs {
    /// Root seed; QUANTCERT_SEED overrides it, OS entropy is used if neither is set.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub max_samples: Option<u64>,
    #[arg(long, global = true)]
    pub max_wall_ms: Option<u64>,
    #[arg(long, global = true, default_value_t = crate::tester::DEFAULT_BATCH_SIZE)]
    pub batch_size: usize,
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Leave wall_time_ms null so reports are byte-reproducible.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Args, Serialize, Deserialize)]
pub struct QueryArgs {
    #[arg(long)]
    pub theta: f64,
    #[arg(long)]
    pub eta: f64,
    #[arg(long)]
    pub delta: f64,
}

/// Where the inputs of a model-based oracle come from.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct BallArgs {
    /// CSV of comma-separated floats.
    #[arg(long)]
    pub center: Option<PathBuf>,
    /// Row of the center file to use.
    #[arg(long, default_value_t = 0)]
    pub center_row: usize,
    #[arg(long, default_value_t = Norm::Linf, value_parser = parse_norm)]
    pub norm: Norm,
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub query: QueryArgs,
    #[arg(long, value_enum, default_value_t = StrategyKind::BinCert)]
    pub strategy: StrategyKind,
    /// Model JSON; certifies the misclassification density around --center.
    #[arg(long, group = "source")]
    pub model: Option<PathBuf>,
    /// Shell command speaking the line protocol; needs --reference-label.
    #[arg(long, group = "source")]
    pub oracle_cmd: Option<String>,
    /// Synthetic oracle with known success probability.
    #[arg(long, group = "source")]
    pub bernoulli: Option<f64>,
    #[arg(long)]
    pub reference_label: Option<u64>,
    #[command(flatten)]
    pub ball: BallArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct HardnessArgs {
    #[command(flatten)]
    pub query: QueryArgs,
    #[arg(long, value_enum, default_value_t = StrategyKind::BinCert)]
    pub strategy: StrategyKind,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub center: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub center_row: usize,
    #[arg(long, default_value_t = Norm::Linf, value_parser = parse_norm)]
    pub norm: Norm,
    /// Ascending radii to sweep, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["eps_lo", "eps_hi"])]
    pub eps_grid: Option<Vec<f64>>,
    #[arg(long, requires = "eps_hi")]
    pub eps_lo: Option<f64>,
    #[arg(long, requires = "eps_lo")]
    pub eps_hi: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub resolution: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub query: QueryArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "bincert")]
    pub strategy: Vec<StrategyKind>,
    /// `start:end:step` or a comma-separated list.
    #[arg(long, default_value = "0:1:0.05")]
    pub p_grid: String,
    #[arg(long, default_value_t = 500)]
    pub trials: u64,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Args, Serialize, Deserialize)]
pub struct PlanArgs {
    #[arg(long)]
    pub theta1: f64,
    #[arg(long)]
    pub theta2: f64,
    #[arg(long)]
    pub delta: f64,
    /// Print the JSON report instead of plain lines.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Args, Serialize, Deserialize)]
pub struct BudgetArgs {
    #[command(flatten)]
    pub query: QueryArgs,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct ReplayArgs {
    /// JSON report produced by an earlier run.
    pub report: PathBuf,
    /// Exit 70 unless the regenerated report matches (ignoring wall time).
    #[arg(long)]
    pub verify: bool,
}

fn parse_norm(s: &str) -> Result<Norm, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}
