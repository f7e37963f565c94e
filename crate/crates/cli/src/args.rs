use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ldpc_distance::distance::{DEFAULT_B_CAP, DEFAULT_DIM_CAP, DEFAULT_ENUM_CAP, DEFAULT_LIST_CAP};
use ldpc_distance::ensembles::DEFAULT_REJECTION_BUDGET;
use ldpc_distance::Ensemble;

pub const THREADS_ENV: &str = "LDPCDIST_THREADS";

/// Distance verification and ensemble analysis for regular LDPC codes.
#[derive(Debug, Clone, Parser)]
#[command(name = "ldpcdist", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Master seed; every random stream is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Emit the run record as a single JSON object on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Output file: alist for `sample`, CSV for `figure`/`bench`, the JSON record otherwise.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Draw a parity-check matrix from A(ℓ,m) or B(ℓ,m).
    Sample(SampleArgs),
    /// Find the minimum distance of a code given as an alist file.
    Distance(DistanceArgs),
    /// Thresholds δ*, θ* and complexity exponents of an ensemble.
    Thresholds(PairArgs),
    /// Complexity-exponent table: generic curves and LDPC points.
    Figure(FigureArgs),
    /// Empirical erasure-correction success rate versus θ.
    ErasureSim(ErasureArgs),
    /// Operation counters of one algorithm over a grid of block lengths.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnsembleArg {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
}

impl From<EnsembleArg> for Ensemble {
    fn from(e: EnsembleArg) -> Self {
        match e {
            EnsembleArg::A => Ensemble::A,
            EnsembleArg::B => Ensemble::B,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Exhaustive,
    Sw,
    Mb,
    Cs,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exhaustive => "exhaustive",
            Algorithm::Sw => "sw",
            Algorithm::Mb => "mb",
            Algorithm::Cs => "cs",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct EnsembleArgs {
    #[arg(long, value_enum, ignore_case = true, default_value = "A")]
    pub ensemble: EnsembleArg,
    #[arg(long)]
    pub ell: usize,
    #[arg(long)]
    pub emm: usize,
    /// Permit column weight 2.
    #[arg(long)]
    pub allow_low_weight: bool,
    /// Configuration-model draws before giving up (ensemble A).
    #[arg(long, default_value_t = DEFAULT_REJECTION_BUDGET)]
    pub max_attempts: u32,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long)]
    pub n: usize,
}

/// Knobs shared by `distance` and `bench`.
#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, value_enum, default_value = "sw")]
    pub alg: Algorithm,
    /// Erased fraction for SW / covering fraction for CS (default: θ* − ε).
    #[arg(long)]
    pub theta: Option<f64>,
    /// Offset below θ* used when --theta is absent.
    #[arg(long, default_value_t = 0.02)]
    pub epsilon: f64,
    /// Largest weight searched (default: n).
    #[arg(long)]
    pub dmax: Option<usize>,
    /// Largest co-rank enumerated per CS trial.
    #[arg(long, default_value_t = DEFAULT_B_CAP)]
    pub bcap: usize,
    /// Largest completion set enumerated per SW window.
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    pub enum_cap: u64,
    /// Largest half-pattern list built by MB.
    #[arg(long, default_value_t = DEFAULT_LIST_CAP)]
    pub list_cap: u64,
    /// Largest dimension accepted by the exhaustive search.
    #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
    pub dim_cap: usize,
    /// Finish every round instead of stopping at the first witness.
    #[arg(long)]
    pub no_early_exit: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DistanceArgs {
    /// Parity-check matrix in alist format.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub ell: u32,
    #[arg(long)]
    pub emm: u32,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    /// Comma-separated ℓ:m pairs.
    #[arg(long, default_value = "7:8,4:5,3:4,3:5,3:6,4:8,3:9,3:12,3:15")]
    pub codes: String,
    /// Spacing of the generic-curve rate grid.
    #[arg(long, default_value_t = 0.005)]
    pub rate_grid: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ErasureArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long)]
    pub n: usize,
    /// Comma-separated erased fractions.
    #[arg(long, default_value = "0.05,0.2,0.35,0.45,0.55,0.6")]
    pub thetas: String,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    /// Reuse one code for all trials instead of a fresh code per trial.
    #[arg(long)]
    pub fixed_code: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Comma-separated block lengths.
    #[arg(long, default_value = "12,16,20,24")]
    pub n_grid: String,
    #[command(flatten)]
    pub search: SearchArgs,
}
