use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "farey-laurent",
    version,
    about = "Continued fractions, Farey maps and tree geometry over F_q((1/t))"
)]
pub struct Cli {
    /// key=value file supplying defaults for long flags; flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Continued fraction expansion and convergents.
    Cf(CfArgs),
    /// Orbit of the geometric Farey map F.
    Geo(StepArgs),
    /// Orbit of the algebraic Farey map F_h.
    Alg(AlgArgs),
    /// Intermediate convergents U/V produced by F_h.
    Intermediates(IntermediateArgs),
    /// Classify a good approximation U/V of f.
    Classify(ClassifyArgs),
    /// Bruhat-Tits tree neighbourhood of the geodesic ]inf, f[.
    Tree(TreeArgs),
    /// Invariance checks and Monte Carlo experiments.
    #[command(subcommand)]
    Ergodic(ErgodicCommand),
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Field size q.
    #[arg(long)]
    pub field: u32,
    /// Ascending coefficients over F_p of the defining polynomial, for q = p^e, e > 1.
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Emit one JSON document (schema 1).
    #[arg(long)]
    pub json: bool,
    /// Write the main output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Re-derive the result along an independent path and compare.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, Args)]
#[group(id = "input", required = true, multiple = false, args = ["rational", "series", "cf"])]
pub struct InputArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Exact input P/Q.
    #[arg(long)]
    pub rational: Option<String>,
    /// Series input {q: 3, top: -1, coeffs: [..], floor: -20}.
    #[arg(long)]
    pub series: Option<String>,
    /// Partial quotients "A1;A2;...".
    #[arg(long)]
    pub cf: Option<String>,
    /// Repeating partial quotients appended after --cf.
    #[arg(long, requires = "cf")]
    pub period: Option<String>,
    /// Precision floor for periodic input.
    #[arg(long, default_value_t = -64, allow_hyphen_values = true)]
    pub floor: i64,
}

#[derive(Debug, Clone, Args)]
pub struct CfArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 20)]
    pub depth: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct StepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 6)]
    pub steps: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct AlgArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// h as "series:0,c1,c2,..." or a rational of degree -1.
    #[arg(long, default_value = "1/t")]
    pub h: String,
    #[arg(long, default_value_t = 6)]
    pub steps: usize,
    /// Also search for s and h with F_h^s(f) = F_J(f).
    #[arg(long)]
    pub find_s: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct IntermediateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "1/t")]
    pub h: String,
    #[arg(long, default_value_t = 5)]
    pub depth: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Numerator U.
    #[arg(long)]
    pub u: String,
    /// Denominator V.
    #[arg(long)]
    pub v: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TreeFormatArg {
    Dot,
    Json,
    Crossings,
}

#[derive(Debug, Clone, Args)]
pub struct TreeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Ball radius around the base vertex (dot/json) or number of convergents (crossings).
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    #[arg(long, value_enum, default_value_t = TreeFormatArg::Dot)]
    pub format: TreeFormatArg,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Subcommand)]
pub enum ErgodicCommand {
    /// Convergence rate of U_ell/V_ell along F_h orbits.
    Rate(RateArgs),
    /// Exact (or Monte Carlo) invariance of a measure.
    Invariance(InvarianceArgs),
    /// Birkhoff averages of partial-quotient degrees.
    Degrees(DegreeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RateMap {
    Alg,
    Artin,
}

#[derive(Debug, Clone, Args)]
pub struct RateArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, value_enum, default_value_t = RateMap::Alg)]
    pub map: RateMap,
    #[arg(long, default_value = "1/t")]
    pub h: String,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Orbit length ell.
    #[arg(long = "len", default_value_t = 500)]
    pub len: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub floor: Option<i64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapArg {
    Geo,
    Alg,
    Artin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    MuG,
    MuGPerturbed,
    MuA,
    Haar,
}

#[derive(Debug, Clone, Args)]
pub struct InvarianceArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, value_enum)]
    pub map: MapArg,
    #[arg(long, default_value = "1/t")]
    pub h: String,
    /// Measure tested; defaults to the map's invariant measure.
    #[arg(long, value_enum)]
    pub measure: Option<MeasureArg>,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Levels |n| <= LEVELS for the geometric map.
    #[arg(long, default_value_t = 3)]
    pub levels: i64,
    /// Run the Monte Carlo chi-square test with this many samples instead.
    #[arg(long)]
    pub mc: Option<usize>,
    /// Measure to sample from in Monte Carlo mode; defaults to --measure.
    #[arg(long, value_enum)]
    pub sample_measure: Option<MeasureArg>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct DegreeArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Number of partial quotients k.
    #[arg(long, default_value_t = 200)]
    pub k: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub floor: Option<i64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}
