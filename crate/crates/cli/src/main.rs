//! `qrand`: rates, sweeps, measurement construction, extraction and verification.

mod commands;
mod csv;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qrand_core::extraction::Bound;
use qrand_core::{EntropyFamily, MeasurementKind};

#[derive(Parser, Debug)]
#[command(name = "qrand", version, about = "Intrinsic randomness of quantum measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Best ε-secure extraction rate for n copies of a state.
    Rate(RateArgs),
    /// Maximal intrinsic randomness over a grid of orders.
    SweepAlpha(SweepAlphaArgs),
    /// Finite-size rate over a log-spaced grid of copy numbers.
    SweepN(SweepNArgs),
    /// Build a measurement and certify it.
    Construct(ConstructArgs),
    /// Sample outcomes and hash them into ε-secure bits.
    Extract(ExtractArgs),
    /// Run the brute-force oracle suites.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ClassArg {
    Pvm,
    Povm,
}

impl From<ClassArg> for MeasurementKind {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Pvm => MeasurementKind::Pvm,
            ClassArg::Povm => MeasurementKind::Povm,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum BoundArg {
    Up,
    Down,
}

impl From<BoundArg> for Bound {
    fn from(b: BoundArg) -> Self {
        match b {
            BoundArg::Up => Bound::Up,
            BoundArg::Down => Bound::Down,
        }
    }
}

impl From<BoundArg> for EntropyFamily {
    fn from(b: BoundArg) -> Self {
        match b {
            BoundArg::Up => EntropyFamily::SandwichedUp,
            BoundArg::Down => EntropyFamily::SandwichedDown,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum GridArg {
    Linear,
    Log,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Mub,
    QubitOpt,
    Uniform,
    UniformExtremal,
}

#[derive(Args, Debug)]
struct RateArgs {
    #[arg(long)]
    state: std::path::PathBuf,
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum, default_value = "povm")]
    class: ClassArg,
    #[arg(long, value_enum, default_value = "up")]
    bound: BoundArg,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SweepAlphaArgs {
    #[arg(long)]
    state: std::path::PathBuf,
    #[arg(long, default_value_t = 0.5)]
    alpha_min: f64,
    #[arg(long, default_value_t = 4.0)]
    alpha_max: f64,
    #[arg(long, default_value_t = 100)]
    points: usize,
    #[arg(long, value_enum, default_value = "down")]
    family: BoundArg,
    #[arg(long, value_enum, default_value = "pvm")]
    class: ClassArg,
    /// Spacing of the α grid.
    #[arg(long, value_enum, default_value = "linear")]
    grid: GridArg,
    #[arg(long)]
    out: std::path::PathBuf,
}

#[derive(Args, Debug)]
struct SweepNArgs {
    #[arg(long)]
    state: std::path::PathBuf,
    /// Comma-separated list of ε values.
    #[arg(long, value_delimiter = ',', required = true)]
    epsilon: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    n_min: u64,
    #[arg(long, default_value_t = 1_000_000)]
    n_max: u64,
    #[arg(long, default_value_t = 50)]
    points: usize,
    #[arg(long, value_enum, default_value = "up")]
    bound: BoundArg,
    #[arg(long, value_enum, default_value = "povm")]
    class: ClassArg,
    #[arg(long)]
    out: std::path::PathBuf,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long)]
    state: std::path::PathBuf,
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Order `α`; accepts `inf`.
    #[arg(long, default_value = "2")]
    alpha: String,
    #[arg(long, value_enum, default_value = "up")]
    family: BoundArg,
    #[arg(long, default_value_t = qrand_core::intrinsic::DEFAULT_DELTA)]
    delta: f64,
    #[arg(long)]
    out: std::path::PathBuf,
}

#[derive(Args, Debug)]
struct ExtractArgs {
    #[arg(long)]
    state: std::path::PathBuf,
    #[arg(long)]
    measurement: std::path::PathBuf,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    epsilon: f64,
    /// Sampling seed, hexadecimal.
    #[arg(long)]
    rng_seed: String,
    /// Toeplitz seed as hex, or `random` to derive it from the sampling seed.
    #[arg(long, default_value = "random")]
    hash_seed: String,
    #[arg(long)]
    out: std::path::PathBuf,
    #[arg(long)]
    meta: std::path::PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// `all` or a comma-separated list of suite names.
    #[arg(long, default_value = "all")]
    suites: String,
    /// Seed, hexadecimal.
    #[arg(long, default_value = "0")]
    seed: String,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            commands::report_error("usage", &e.to_string());
            return ExitCode::from(2);
        }
    };
    if let Err(e) = commands::configure_threads() {
        e.report();
        return ExitCode::from(2);
    }
    let outcome = match cli.command {
        Command::Rate(a) => commands::rate(a),
        Command::SweepAlpha(a) => commands::sweep_alpha(a),
        Command::SweepN(a) => commands::sweep_n(a),
        Command::Construct(a) => commands::construct(a),
        Command::Extract(a) => commands::extract(a),
        Command::Verify(a) => commands::verify(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            e.report();
            ExitCode::from(2)
        }
    }
}
