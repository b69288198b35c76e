use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "progc", version, about = "Compression-based programmability coefficient for cellular automata")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render space-time diagrams as PBM images
    Evolve(EvolveArgs),
    /// Compute the coefficient of one system
    Coeff(CoeffArgs),
    /// Compute, rank and cluster all 256 elementary rules
    Sweep(SweepArgs),
    /// Test two rules for behavioural equivalence or c-equivalence
    Compare(CompareArgs),
    /// Re-run the command recorded in a manifest and verify its outputs
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// 1-D cellular automaton (elementary by default)
    Ca,
    /// 2-D outer-totalistic automaton, Game of Life by default
    Life,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Gray,
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Ca)]
    pub model: ModelKind,
    /// Wolfram rule number (1-D models)
    #[arg(long)]
    pub rule: Option<String>,
    /// Colour count of the 1-D rule
    #[arg(long, default_value_t = 2)]
    pub k: u8,
    /// Neighbourhood radius of the 1-D rule
    #[arg(long, default_value_t = 1)]
    pub radius: u8,
    /// Birth/survival rule for `--model life`
    #[arg(long, default_value = "B3/S23")]
    pub life_rule: String,
    /// `cyclic` or `fixed-<colour>` (1-D models; life grids are always toroidal)
    #[arg(long, default_value = "cyclic")]
    pub boundary: String,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Input enumeration scheme
    #[arg(long, value_enum, default_value_t = FamilyKind::Gray)]
    pub family: FamilyKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Probability of a live cell in random inputs
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
}

#[derive(Debug, Clone, Args)]
pub struct MeasureArgs {
    /// Leave the input row out of the compressed payload
    #[arg(long)]
    pub exclude_input: bool,
    /// Divisor of the difference sums: `horizon` (t_max) or `per-point` (t')
    #[arg(long, default_value = "horizon")]
    pub normalization: String,
    /// Zero band; calibrated on the inert rules when omitted
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, Args)]
#[group(id = "inputs", required = true, multiple = false, args = ["input", "gray_inputs", "random_inputs"])]
pub struct EvolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of steps
    #[arg(long)]
    pub t: usize,
    /// Explicit input: colour digits for 1-D, rows of `.`/`#` joined by `/` for life
    #[arg(long)]
    pub input: Option<String>,
    /// Gray-code family of this size
    #[arg(long)]
    pub gray_inputs: Option<usize>,
    /// Random family of this size
    #[arg(long)]
    pub random_inputs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
    /// Row width; defaults to pattern + 2rt for `--input`, 61 for Gray, 40 for random,
    /// and 32 (or the pattern size) for life
    #[arg(long)]
    pub width: Option<usize>,
    /// Grid height for life (defaults to the width)
    #[arg(long)]
    pub height: Option<usize>,
    /// Also write the serialized payload of each evolution
    #[arg(long)]
    pub raw: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct CoeffArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    /// Horizon t_max [default: 200, life 100]
    #[arg(long)]
    pub t: Option<usize>,
    /// Number of inputs [default: 40, life 16]
    #[arg(long)]
    pub n: Option<usize>,
    /// Row width (default 61) or grid width for life (default 32)
    #[arg(long)]
    pub width: Option<usize>,
    /// Grid height for life (defaults to the width)
    #[arg(long)]
    pub height: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[arg(long, default_value_t = 200)]
    pub t: usize,
    #[arg(long, default_value_t = 40)]
    pub n: usize,
    #[arg(long, default_value_t = 61)]
    pub width: usize,
    #[arg(long, default_value = "cyclic")]
    pub boundary: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// First rule number
    #[arg(long)]
    pub a: String,
    /// Second rule number
    #[arg(long)]
    pub b: String,
    #[arg(long, default_value_t = 2)]
    pub k: u8,
    #[arg(long, default_value_t = 1)]
    pub radius: u8,
    /// Tolerance for c-equivalence at every grid point; without it the verdict is exact equality
    #[arg(long)]
    pub c: Option<f64>,
    /// Horizons of the grid (comma-separated)
    #[arg(long, value_delimiter = ',', default_value = "200")]
    pub t: Vec<usize>,
    /// Family sizes of the grid (comma-separated)
    #[arg(long, value_delimiter = ',', default_value = "40")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 61)]
    pub width: usize,
    #[arg(long, default_value = "cyclic")]
    pub boundary: String,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    /// Horizons for `b` when they differ from `a`
    #[arg(long, value_delimiter = ',')]
    pub b_t: Option<Vec<usize>>,
    /// Family sizes for `b` when they differ from `a`
    #[arg(long, value_delimiter = ',')]
    pub b_n: Option<Vec<usize>>,
    #[arg(long)]
    pub b_width: Option<usize>,
    #[arg(long)]
    pub b_boundary: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run
    #[arg(long)]
    pub manifest: PathBuf,
    /// Directory for the regenerated artifacts
    #[arg(long)]
    pub out: PathBuf,
}
