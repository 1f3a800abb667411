use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "fdrates",
    version,
    about = "Spectral constants, flows and entropy rates for fast diffusion in self-similar variables",
    after_long_help = "Exit status: 0 on success, 1 when the input is rejected, 2 when a computation fails.\n\
                       FDRATES_THREADS caps the number of worker threads used by sweeps."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exponents, thresholds and the closed-form spectral constants.
    Constants(ConstantsArgs),
    /// Discrete modes of the linearized operator.
    Spectrum(SpectrumArgs),
    /// Numerical check of the sharp constant by sector minimization.
    HpVerify(HpVerifyArgs),
    /// Eigenfunction on the grid nodes, closed form or numerical sector bottom.
    Eigenfunction(EigenfunctionArgs),
    /// Nonlinear flow from a run configuration; writes the entropy trace.
    #[command(after_long_help = crate::config::keys_help())]
    Evolve(RunArgs),
    /// Linear flow in one angular sector; writes the quadratic trace.
    #[command(after_long_help = crate::config::keys_help())]
    EvolveLinear(RunArgs),
    /// Sandwich bounds between entropies and their quadratic parts along a flow.
    #[command(after_long_help = crate::config::keys_help())]
    EntropyReport(RunArgs),
    /// Comparison bound for the entropy along a flow.
    #[command(after_long_help = crate::config::keys_help())]
    Gronwall(GronwallArgs),
    /// Entropy-production quotient along v_n = V_D (1 + f V_D^(1-m) / n).
    Quotient(QuotientArgs),
    /// Barenblatt solution mapped to self-similar variables.
    Rescale(RescaleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// One or more exponents; lists are comma separated and run in parallel.
#[derive(Debug, Clone, Args)]
pub struct ExponentArgs {
    /// Space dimension.
    #[arg(long)]
    pub d: u32,
    /// Diffusion exponent(s), m < 1.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "alpha", required_unless_present = "alpha")]
    pub m: Vec<f64>,
    /// Profile exponent(s) 1/(m-1) < 0.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Vec<f64>,
    /// Relative tolerance recognising m = m_c and m = m_*.
    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ConstantsArgs {
    #[command(flatten)]
    pub exponents: ExponentArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub exponents: ExponentArgs,
    #[arg(long, default_value_t = 3)]
    pub l_max: u32,
    #[arg(long, default_value_t = 3)]
    pub k_max: u32,
    /// Curves for the spectrum picture (continuum, sharp constant, modes) instead of the mode table.
    #[arg(long)]
    pub figure: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GradingArg {
    Sinh,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Natural,
    Asymptotic,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Largest truncation radius.
    #[arg(long = "R", default_value_t = 100.0)]
    pub r_max: f64,
    /// Cells per grid.
    #[arg(long = "N", default_value_t = 1600)]
    pub cells: usize,
    #[arg(long, value_enum, default_value_t = GradingArg::Sinh)]
    pub grading: GradingArg,
    /// Transition radius of the sinh grading.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Asymptotic)]
    pub boundary: BoundaryArg,
}

#[derive(Debug, Clone, Args)]
pub struct HpVerifyArgs {
    #[command(flatten)]
    pub exponents: ExponentArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Largest angular sector minimized over.
    #[arg(long, default_value_t = 3)]
    pub l_max: u32,
    /// The D of the weight (D + r^2)^alpha.
    #[arg(long = "D", default_value_t = 1.0)]
    pub shift: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EigenfunctionArgs {
    #[command(flatten)]
    pub exponents: ExponentArgs,
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Bottom of the discretized sector instead of the closed form.
    #[arg(long)]
    pub numeric: bool,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Run configuration file.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Overrides output.path.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GronwallArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Constant of the relative uniform estimate; calibrated on the trace when absent.
    #[arg(long = "C")]
    pub c_unif: Option<f64>,
    /// Spectral constant in the bound; the sharp constant when absent.
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestFunctionArg {
    /// r^2
    Quadratic,
    /// r^2 / (1 + r^2)
    Saturating,
    /// exp(-r^2/4) + 0.3 r^2 / (4 + r^2)
    Mixed,
}

#[derive(Debug, Clone, Args)]
pub struct QuotientArgs {
    #[command(flatten)]
    pub exponents: ExponentArgs,
    #[arg(long = "f", value_enum, default_value_t = TestFunctionArg::Quadratic)]
    pub function: TestFunctionArg,
    /// Scaling parameters n.
    #[arg(long, value_delimiter = ',', default_values_t = [100.0, 200.0, 400.0, 800.0, 1600.0])]
    pub n: Vec<f64>,
    #[arg(long = "R", default_value_t = 1000.0)]
    pub r_max: f64,
    #[arg(long = "N", default_value_t = 2000)]
    pub cells: usize,
    #[arg(long = "D", default_value_t = 1.0)]
    pub shift: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RescaleArgs {
    #[command(flatten)]
    pub exponents: ExponentArgs,
    /// Time origin: a delay for m > m_c, the extinction time for m < m_c.
    #[arg(long = "T", default_value_t = 1.0)]
    pub t0: f64,
    #[arg(long = "D", default_value_t = 1.0)]
    pub shift: f64,
    /// Original-variable position.
    #[arg(long, default_value_t = 1.0)]
    pub y: f64,
    /// Original times.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.0, 0.25, 0.5])]
    pub tau: Vec<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}
