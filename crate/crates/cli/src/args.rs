//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::grid::GridSpec;

#[derive(Debug, Parser)]
#[command(name = "sure-svt", version, about = "Singular value thresholding with SURE-based threshold selection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a unit-norm test matrix.
    Gen(GenArgs),
    /// Print singular values and numerical rank.
    Svd(SvdArgs),
    /// Evaluate SURE (and optionally Monte-Carlo risk) over a threshold grid.
    Sweep(SweepArgs),
    /// Minimize SURE over a bracket by golden-section search.
    Select(SelectArgs),
    /// Apply SVT or block-wise SVT.
    Denoise(DenoiseArgs),
    /// Run the built-in property suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum FieldArg {
    #[default]
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum EstimatorKind {
    #[default]
    Svt,
    Bsvt,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Ensemble: 1 full rank, 2 rank r/2, 3 rank r/20, 4 sigmoid spectrum.
    #[arg(long)]
    pub kind: u32,
    /// Rows.
    #[arg(long)]
    pub m: usize,
    /// Columns.
    #[arg(long)]
    pub n: usize,
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Scalar field of the entries.
    #[arg(long, value_enum, default_value_t)]
    pub field: FieldArg,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SvdArgs {
    /// MAT1 matrix or SER1 series.
    #[arg(long)]
    pub input: PathBuf,
    /// Singular values at most this fraction of the largest are not counted.
    #[arg(long, default_value_t = 1e-10)]
    pub rank_tol: f64,
}

#[derive(Debug, Clone, Args, Default)]
pub struct NoiseArgs {
    /// Noise standard deviation per real coordinate.
    #[arg(long, conflicts_with = "snr")]
    pub tau: Option<f64>,
    /// Signal-to-noise ratio 1/(√(mn)·τ); implies a unit-norm signal.
    #[arg(long)]
    pub snr: Option<f64>,
}

#[derive(Debug, Clone, Args, Default)]
pub struct EstimatorArgs {
    /// Plain SVT or block-wise SVT.
    #[arg(long, value_enum, default_value_t)]
    pub estimator: EstimatorKind,
    /// Block side k for block-wise SVT.
    #[arg(long)]
    pub block_size: Option<usize>,
    /// Image height for block-wise SVT on MAT1 (Casorati) input.
    #[arg(long, requires = "ny")]
    pub nx: Option<usize>,
    /// Image width for block-wise SVT on MAT1 (Casorati) input.
    #[arg(long, requires = "nx")]
    pub ny: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// MAT1 matrix or SER1 series.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Threshold grid lo:hi:count:log|lin.
    #[arg(long)]
    pub grid: GridSpec,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    /// Monte-Carlo trials for the reference risk column (needs --x0).
    #[arg(long, requires = "x0")]
    pub mc: Option<usize>,
    /// Ground truth for the Monte-Carlo risk.
    #[arg(long, requires = "mc")]
    pub x0: Option<PathBuf>,
    /// Master seed of the Monte-Carlo noise draws.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// MAT1 matrix or SER1 series.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Lower end of the search bracket.
    #[arg(long)]
    pub lo: f64,
    /// Upper end of the search bracket.
    #[arg(long)]
    pub hi: f64,
    /// Final bracket width; defaults to 1e-6·hi.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
}

#[derive(Debug, Args)]
pub struct DenoiseArgs {
    /// MAT1 matrix or SER1 series.
    #[arg(long)]
    pub input: PathBuf,
    /// Fixed threshold.
    #[arg(long, conflicts_with = "auto", required_unless_present = "auto")]
    pub lambda: Option<f64>,
    /// Choose the threshold by minimizing SURE.
    #[arg(long)]
    pub auto: bool,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Lower end of the --auto bracket; defaults to 1e-6·hi.
    #[arg(long)]
    pub lo: Option<f64>,
    /// Upper end of the --auto bracket; defaults to the largest singular value.
    #[arg(long)]
    pub hi: Option<f64>,
    /// Final bracket width for --auto; defaults to 1e-6·hi.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    /// Output file in the input format; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Svd,
    LambdaZero,
    FdOracle,
    SvdDifferential,
    Tiling,
    Continuity,
    Sure,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Seed of the random test matrices.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Comma-separated shapes such as 4x3,5x5,3x6.
    #[arg(long, default_value = "4x3,5x5,3x6")]
    pub sizes: String,
    /// Negative control: flip the sign of the closed form in one suite.
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<Suite>,
}
