use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "hchit", version, about = "Hitting times of the random walk on the hypercube")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Root seed; every random stream derives from it.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Directory for output files (default: stdout, or "." for presets).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Flat `key = value` file of flag defaults; command-line flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate xi_n(k).
    Xi(XiArgs),
    /// Laplace transform of the hitting time of a point.
    Laplace(LaplaceArgs),
    /// Exact survival table P[H >= t].
    Survival(SurvivalArgs),
    /// Inclusion-exclusion sum over ordered i-tuples of target points.
    InclExcl(InclExclArgs),
    /// Monte Carlo hitting times and KS distance to Exp(1).
    HitMc(HitMcArgs),
    /// Generate a random target set file.
    MakeSet(MakeSetArgs),
    /// Evaluate the exponential-limit hypotheses for a set.
    Check(CheckArgs),
    /// REM two-point function against the arcsine law.
    Rem(RemArgs),
    /// Generalised arcsine distribution function.
    Asl(AslArgs),
    /// Run an experiment preset.
    Preset(PresetArgs),
}

#[derive(Debug, Args)]
pub struct XiArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, conflicts_with = "all")]
    pub k: Option<u32>,
    /// All k in 0..=n (the default).
    #[arg(long)]
    pub all: bool,
    /// Add the exact rational value (n <= 30).
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args)]
pub struct LaplaceArgs {
    #[arg(long)]
    pub n: u32,
    /// Distance from the target; all distances when omitted.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub s: f64,
    #[arg(long)]
    pub m: f64,
}

#[derive(Debug, Args)]
pub struct SurvivalArgs {
    #[arg(long)]
    pub n: Option<u32>,
    /// Use the lumped chain for a single target point at distance --k.
    #[arg(long, requires = "k", conflicts_with_all = ["set", "x"])]
    pub lumped: bool,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, requires = "x")]
    pub set: Option<PathBuf>,
    /// Start vertex in hexadecimal.
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub horizon: u64,
}

#[derive(Debug, Args)]
pub struct InclExclArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub set: PathBuf,
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub i: u32,
    #[arg(long)]
    pub a: f64,
    /// Time scale, or `auto` for 2^n/|B|.
    #[arg(long)]
    pub m: String,
}

#[derive(Debug, Args)]
pub struct HitMcArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub set: PathBuf,
    #[arg(long)]
    pub x: String,
    /// Time scale, or `auto` for 2^n/|B|.
    #[arg(long)]
    pub m: String,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// Censoring cap in steps (default 50 m).
    #[arg(long)]
    pub cap: Option<u64>,
    #[arg(long, default_value_t = 0.05)]
    pub a_step: f64,
    #[arg(long, default_value_t = 5.0)]
    pub a_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetKind {
    Percolation,
    Sample,
}

#[derive(Debug, Args)]
pub struct MakeSetArgs {
    #[arg(value_enum)]
    pub kind: SetKind,
    #[arg(long)]
    pub n: u32,
    /// Density of a percolation cloud.
    #[arg(long, required_if_eq("kind", "percolation"))]
    pub rho: Option<f64>,
    /// Size of a sampled set.
    #[arg(long = "M", required_if_eq("kind", "sample"))]
    pub size: Option<u64>,
    /// Output file (default: stdout).
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub set: PathBuf,
    /// Time scale, or `auto` for 2^n/|B|.
    #[arg(long, default_value = "auto")]
    pub m: String,
    /// Maximize v_n, V_n over all centers instead of a seeded sample.
    #[arg(long)]
    pub exact_stats: bool,
    /// Random centers added to the set's own points when sampling.
    #[arg(long, default_value_t = 4096)]
    pub samples: u64,
    #[arg(long, default_value_t = 0.2)]
    pub size_tol: f64,
    #[arg(long, default_value_t = 0.2)]
    pub xi_tol: f64,
    #[arg(long, default_value_t = 0.2)]
    pub vsum_tol: f64,
    #[arg(long, default_value_t = 0.2)]
    pub vbig_tol: f64,
}

#[derive(Debug, Args)]
pub struct RemArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub alpha: f64,
    /// alpha beta / beta_c.
    #[arg(long)]
    pub beta_ratio: f64,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub theta: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub disorder: usize,
    #[arg(long, default_value_t = 1)]
    pub walks: usize,
    /// Keep one disorder realization.
    #[arg(long)]
    pub quenched: bool,
    /// Step budget per walk.
    #[arg(long, default_value_t = hchit::rem_aging::DEFAULT_STEP_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct AslArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, value_delimiter = ',')]
    pub z: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetName {
    ThmGen,
    ThmPerc,
    ThmSampling,
    CorPerc,
    PropSum,
    LemmaLaplace,
    RemAging,
}

impl PresetName {
    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::ThmGen => "thm-gen",
            PresetName::ThmPerc => "thm-perc",
            PresetName::ThmSampling => "thm-sampling",
            PresetName::CorPerc => "cor-perc",
            PresetName::PropSum => "prop-sum",
            PresetName::LemmaLaplace => "lemma-laplace",
            PresetName::RemAging => "rem-aging",
        }
    }
}

/// Shared preset parameters; each preset reads the ones it needs and
/// supplies its own defaults for the rest.
#[derive(Debug, Args)]
pub struct PresetArgs {
    #[arg(value_enum)]
    pub name: PresetName,
    #[arg(long)]
    pub n: Option<u32>,
    /// Size of a sampled set.
    #[arg(long = "M")]
    pub size: Option<u64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub m: Option<f64>,
    /// Use m = n^3.
    #[arg(long)]
    pub m_cube: bool,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub starts: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta_ratio: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub theta: Option<Vec<f64>>,
    #[arg(long)]
    pub disorder: Option<usize>,
    #[arg(long)]
    pub walks: Option<usize>,
}
