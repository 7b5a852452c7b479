use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qcrb",
    version,
    about = "Quantum multiparameter Cramér-Rao bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the ladder of bounds for one model.
    Bounds(BoundsArgs),
    /// Sweep a builtin example over a range of r.
    Sweep(SweepArgs),
    /// Run the randomized self-check suites.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Dim2,
    Dim4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct ModelSource {
    /// Model file (JSON).
    #[arg(long, conflicts_with = "builtin")]
    pub model: Option<PathBuf>,
    /// Builtin example family.
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    /// Mixing parameter of the builtin family.
    #[arg(long, default_value_t = 0.95)]
    pub a: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub source: ModelSource,
    /// Radial parameter of the builtin family.
    #[arg(long, default_value_t = 0.0)]
    pub r: f64,
    /// identity, sld, or a JSON file holding a real matrix.
    #[arg(long, default_value = "sld")]
    pub weight: String,
    /// Extra β values at which to report C^(β).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub beta: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = Builtin::Dim2)]
    pub builtin: Builtin,
    #[arg(long, default_value_t = 0.95)]
    pub a: f64,
    /// Grid as LO:HI:STEP.
    #[arg(long, default_value = "0:0.95:0.05")]
    pub r_range: String,
    /// identity, sld, or a JSON file holding a real matrix.
    #[arg(long, default_value = "sld")]
    pub weight: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Run only this suite.
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
