//! The `kmsec` command-line tool.
//!
//! stdout carries data (one JSON object or one CSV table per invocation),
//! stderr carries diagnostics. Exit codes: 0 ok, 2 usage or input error,
//! 3 numerical non-convergence, 4 validation failure.

mod commands;
mod output;
pub mod presets;

use crate::error::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use presets::Preset;
use std::ffi::OsString;
use std::path::PathBuf;

pub use output::write_atomic;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "kmsec", version, about = "Secrecy metrics over κ-μ fading wiretap channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Probability of strictly positive secrecy capacity at one point
    Spsc(SpscArgs),
    /// Secrecy outage probability (exact or lower bound) at one point
    Sop(SopArgs),
    /// Evaluate SPSC, SOP and SOP lower bound over a parameter grid (CSV)
    Sweep(SweepArgs),
    /// Cross-check series, closed form, quadrature and Monte Carlo
    Validate(ValidateArgs),
    /// Fit κ and μ to an envelope trace
    Fit(FitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    /// Named parameter set; explicit flags override its fields
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// κ of the main channel
    #[arg(long)]
    pub km: Option<f64>,
    /// μ of the main channel
    #[arg(long)]
    pub um: Option<f64>,
    /// κ of the eavesdropper channel
    #[arg(long)]
    pub ke: Option<f64>,
    /// μ of the eavesdropper channel
    #[arg(long)]
    pub ue: Option<f64>,
    /// Main-channel average SNR in dB [default: 0]
    #[arg(long, allow_hyphen_values = true, conflicts_with = "gbar_m_linear")]
    pub gbar_m_db: Option<f64>,
    /// Main-channel average SNR, linear
    #[arg(long)]
    pub gbar_m_linear: Option<f64>,
    /// Eavesdropper average SNR in dB [default: 0]
    #[arg(long, allow_hyphen_values = true, conflicts_with = "gbar_e_linear")]
    pub gbar_e_db: Option<f64>,
    /// Eavesdropper average SNR, linear
    #[arg(long)]
    pub gbar_e_linear: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct RateArgs {
    /// Target secrecy rate in nats [default: the preset's rate, else 0]
    #[arg(long, conflicts_with = "rate_bits")]
    pub rate_nats: Option<f64>,
    /// Target secrecy rate in bits (converted with ln 2)
    #[arg(long)]
    pub rate_bits: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    /// Monte Carlo draws
    #[arg(long, default_value_t = 1_000_000)]
    pub mc_n: usize,
    /// Monte Carlo seed
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpscMethod {
    Auto,
    Series,
    Closed,
    Quadrature,
    Mc,
}

#[derive(Debug, Clone, Args)]
pub struct SpscArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_enum, default_value_t = SpscMethod::Auto)]
    pub method: SpscMethod,
    #[command(flatten)]
    pub mc: McArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Bound {
    Exact,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SopMethod {
    Auto,
    Series,
    Quadrature,
    Mc,
}

#[derive(Debug, Clone, Args)]
pub struct SopArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub rate: RateArgs,
    #[arg(long, value_enum, default_value_t = Bound::Exact)]
    pub bound: Bound,
    /// auto: quadrature for the exact outage, series for the lower bound
    #[arg(long, value_enum, default_value_t = SopMethod::Auto)]
    pub method: SopMethod,
    #[command(flatten)]
    pub mc: McArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVariable {
    #[value(name = "gamma_bar_m_db")]
    GammaBarMDb,
    #[value(name = "gamma_bar_e_db")]
    GammaBarEDb,
    #[value(name = "kappa_m")]
    KappaM,
    #[value(name = "kappa_e")]
    KappaE,
    #[value(name = "mu_m")]
    MuM,
    #[value(name = "mu_e")]
    MuE,
    #[value(name = "rate")]
    Rate,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub rate: RateArgs,
    #[arg(long, value_enum, default_value_t = SweepVariable::GammaBarMDb)]
    pub variable: SweepVariable,
    #[arg(long, allow_hyphen_values = true, default_value_t = -10.0)]
    pub start: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 30.0)]
    pub stop: f64,
    #[arg(long, default_value_t = 41)]
    pub steps: usize,
    /// Add Monte Carlo columns with this many draws per point
    #[arg(long)]
    pub with_mc: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Fail (exit 4) unless SPSC rises and both outages fall along an SNR sweep
    #[arg(long)]
    pub assert_monotone: bool,
    /// Write to this file atomically instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridSize {
    Small,
    Full,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value_t = GridSize::Small)]
    pub grid: GridSize,
    #[arg(long, default_value_t = 200_000)]
    pub mc_n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Perturb the series engine to confirm that the checks can fail
    #[arg(long)]
    pub self_test_break: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputKindArg {
    Envelope,
    Power,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// Trace file: CSV, or binary with the KMUTRC01 header
    #[arg(long)]
    pub input: PathBuf,
    /// Local-mean window in samples (odd); 0 disables normalization
    #[arg(long, default_value_t = 0)]
    pub window: usize,
    #[arg(long, value_enum, default_value_t = InputKindArg::Envelope)]
    pub input_kind: InputKindArg,
    /// Histogram bin width (Freedman–Diaconis by default)
    #[arg(long)]
    pub bin_width: Option<f64>,
    /// Also write envelope, empirical and fitted density columns to this CSV
    #[arg(long)]
    pub emit_pdf_grid: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// A failed command: message plus exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: msg.into(),
        }
    }
    pub fn validation(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            message: msg.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonConvergence { .. } | Error::Quadrature(_) | Error::Optimizer(_) => EXIT_CONVERGENCE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing results to stdout. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Spsc(a) => commands::spsc(&a),
        Command::Sop(a) => commands::sop(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Validate(a) => commands::validate(&a),
        Command::Fit(a) => commands::fit(&a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("kmsec: {}", f.message);
            f.code
        }
    }
}
