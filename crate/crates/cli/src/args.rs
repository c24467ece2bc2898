use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use demailly_core::DEFAULT_PRIME;

const AFTER_HELP: &str = "\
Output:
  --format json   one object with keys command, inputs, results, verdicts, version;
                  every number is a decimal string
  --format csv    header row then data rows; for most commands one row whose columns
                  are the dotted JSON keys (inputs.*, results.*, verdicts.*), sorted
                  within each section. `sequence` emits m,alpha,ratio and `sweep` emits
                  n,s,m,condition_holds,sufficient_holds,factor_ok,mss_class,violation
  --format text   human-readable lines (default)

Exit codes:
  0 success, 1 usage or input error, 2 degree cap exceeded or sign indeterminate,
  3 a bound that holds for every point set was violated (software fault)";

#[derive(Debug, Parser)]
#[command(
    name = "demailly",
    version,
    about = "Degree bounds and fat-point interpolation for symbolic powers of point ideals",
    after_help = AFTER_HELP
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Worker threads for parallel sections; output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Both degree bounds and the condition chain for one instance.
    Bounds(InstanceArgs),
    /// Largest m for which the sharper bound's condition holds.
    MaxM(DimArgs),
    /// alpha(I^(m)) for sampled or supplied points.
    Alpha(AlphaArgs),
    /// alpha(I^(m)) and alpha/m for m = 1..=M.
    Sequence(SequenceArgs),
    /// Compute alpha and check it against both bounds.
    Verify(VerifyArgs),
    /// Exact check of the condition chain over a grid of instances.
    Sweep(SweepArgs),
    /// Algebraic certificate coefficients and their signs.
    Certificate(InstanceArgs),
    /// Which of the two sufficient conditions hold.
    Compare(InstanceArgs),
    /// The m = 1 ratio (alpha + n - 1) / n.
    Chudnovsky(PointArgs),
    /// Sample points and print them in the point-set text format.
    Sample(PointArgs),
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub s: BigInt,
    #[arg(long)]
    pub m: BigInt,
}

#[derive(Debug, Args)]
pub struct DimArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub s: BigInt,
}

/// Where the points come from: `--points-file`, or `--n`/`--s` sampled from
/// `--seed` over `GF(--prime)`.
#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Point set in the text format (`n s p` header, one point per line).
    #[arg(long)]
    pub points_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AlphaArgs {
    #[command(flatten)]
    pub points: PointArgs,
    #[arg(long)]
    pub m: u32,
    /// Highest degree to try (default: max(k(m+n-1)+1, delta)).
    #[arg(long)]
    pub cap: Option<u32>,
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    #[command(flatten)]
    pub points: PointArgs,
    #[arg(long = "max-mult")]
    pub max_mult: u32,
    #[arg(long)]
    pub cap: Option<u32>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub points: PointArgs,
    #[arg(long)]
    pub m: u32,
    /// Also run the invariant suite for multiplicities 1..=M.
    #[arg(long)]
    pub invariants: Option<u32>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long = "n-min")]
    pub n_min: u32,
    #[arg(long = "n-max")]
    pub n_max: u32,
    #[arg(long = "s-max")]
    pub s_max: u64,
    #[arg(long = "m-max")]
    pub m_max: u64,
    /// Emit every row, not just the summary (json and csv always stream rows).
    #[arg(long)]
    pub rows: bool,
}
