use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::source::PovmSource;
use crate::sweep::RangeSpec;

#[derive(Debug, Parser)]
#[command(
    name = "qet",
    version,
    about = "Exact two-qubit quantum energy teleportation laboratory"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the property suite; exit 1 on any failure.
    Verify(VerifyArgs),
    /// One protocol run with the optimal feedback policy, as JSON.
    Report(ReportArgs),
    /// Grid sweep over (h, k), written as CSV.
    Sweep(SweepArgs),
    /// Free evolution of B's local energy after the measurement, as CSV.
    Evolve(EvolveArgs),
    /// Numeric maximization of the teleported energy, as JSON.
    Optimize(OptimizeArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random measurements drawn for the ensemble checks; 0 skips them.
    #[arg(long, default_value_t = 1000)]
    pub ensemble: usize,
    /// Test hook: include an invalid builtin measurement.
    #[arg(long, hide = true)]
    pub corrupt_builtin: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub h: f64,
    #[arg(long)]
    pub k: f64,
    /// POVM JSON file, or builtin:projective, builtin:identity, builtin:weak(u).
    #[arg(long)]
    pub povm: PovmSource,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// MIN:MAX:N[:log]
    #[arg(long)]
    pub h: RangeSpec,
    /// MIN:MAX:N[:log]
    #[arg(long)]
    pub k: RangeSpec,
    #[arg(long)]
    pub povm: PovmSource,
    /// Output directory; receives sweep.csv.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[arg(long)]
    pub h: f64,
    #[arg(long)]
    pub k: f64,
    #[arg(long)]
    pub povm: PovmSource,
    #[arg(long = "t-max")]
    pub t_max: f64,
    #[arg(long, default_value_t = 256)]
    pub points: usize,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Over {
    /// Feedback unitaries for the given measurement.
    Policy,
    /// POVM weights with the given measurement's outcome count.
    Weights,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub h: f64,
    #[arg(long)]
    pub k: f64,
    #[arg(long)]
    pub povm: PovmSource,
    #[arg(long, value_enum, default_value_t = Over::Policy)]
    pub over: Over,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
