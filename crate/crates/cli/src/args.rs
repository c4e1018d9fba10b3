use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "indexforge",
    version,
    about = "Objective indicator weighting, composite indices and Monte Carlo weight studies"
)]
pub struct Cli {
    /// Base seed for random generation. Falls back to INDEXFORGE_SEED, then
    /// to a `seed` key in the simulate config file, then to 42.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output file (weigh, index) or directory (simulate, report).
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Report format. weigh and index default to json; simulate prints its
    /// summary to stdout only when a format is given.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute indicator weights for a CSV data set.
    Weigh(WeighArgs),
    /// Compute composite index values and a ranking.
    Index(IndexArgs),
    /// Run a Monte Carlo weight study on a synthetic scenario.
    Simulate(SimulateArgs),
    /// Re-render boxplot SVGs from an existing summary CSV.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// CSV file: header row, first column system id, one column per indicator.
    pub csv: PathBuf,

    /// Comma-separated cost-type indicators to negate before scaling.
    #[arg(long, value_delimiter = ',')]
    pub negate: Vec<String>,

    /// Treat the data as already min-max scaled to [0, 1].
    #[arg(long, conflicts_with = "negate")]
    pub prescaled: bool,
}

#[derive(Debug, Args)]
pub struct WeighArgs {
    #[command(flatten)]
    pub data: DataArgs,

    /// Weighting method: var, ent, pca, critic or dea.
    #[arg(long, short)]
    pub method: String,

    /// Retained principal components for PCA.
    #[arg(long, default_value_t = 1)]
    pub components: usize,

    #[arg(long, default_value_t = indexforge_core::weighting::DEFAULT_ENTROPY_EPSILON)]
    pub entropy_epsilon: f64,

    #[arg(long, default_value_t = indexforge_core::weighting::DEFAULT_DEA_EPSILON)]
    pub dea_epsilon: f64,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    #[command(flatten)]
    pub data: DataArgs,

    /// Weights from a `weigh` JSON report or an `indicator,weight` CSV.
    #[arg(long, conflicts_with = "weights", required_unless_present = "weights")]
    pub weights_file: Option<PathBuf>,

    /// Inline comma-separated weights in indicator order.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Flat TOML file with scenario and study settings; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// normal, normal-mixed, normal-correlated or systemic-correlated.
    #[arg(long)]
    pub scenario: Option<String>,

    #[arg(long)]
    pub systems: Option<usize>,

    #[arg(long)]
    pub indicators: Option<usize>,

    #[arg(long)]
    pub iterations: Option<usize>,

    /// Comma-separated methods (default: all five).
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<String>>,

    /// Retained PCA components (default: 1 for correlated scenarios, else 3).
    #[arg(long)]
    pub pca_components: Option<usize>,

    #[arg(long)]
    pub entropy_epsilon: Option<f64>,

    #[arg(long)]
    pub dea_epsilon: Option<f64>,

    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,

    /// Write one boxplot SVG per method.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// summary.csv written by `simulate`.
    pub summary: PathBuf,
}
