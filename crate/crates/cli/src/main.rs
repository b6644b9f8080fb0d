//! `stokes-certify`: exposes the coefficient recurrences, the bound
//! certification pipeline, the Stokes-constant enclosures, convergence plot
//! data, and the independent series oracle as subcommands with
//! machine-readable output.
//!
//! Exit codes: 0 success, 2 certification or cross-check failure, 64 usage
//! error, 74 I/O error. Identical configurations produce byte-identical
//! output; every rational travels as an exact `p/q` string, and decimal
//! columns are truncated approximations labeled with a `_dec` suffix or an
//! explicit digit count.

mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use stokes_core::certifier::BConstantMode;
use stokes_core::numerics::{parse_rational, Rational};

const EXIT_CHECK_FAILED: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(
    name = "stokes-certify",
    about = "Exact recurrences, certified bounds, and rigorous Stokes-constant enclosures for 2v'' - t + 1/v^2 = 0",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the coefficient table: n, c_n, d_n, b_n, Q_n
    Coeffs(CommonArgs),
    /// Verify the bound certificate and print it
    Certify(CommonArgs),
    /// Full pipeline: table, certificate, enclosure, Stokes constants
    Stokes(CommonArgs),
    /// Emit convergence plot data on a geometric index subsample
    Convergence(CommonArgs),
    /// Run the independent series cross-checks (order given by --n-max)
    Oracle(OracleArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Largest coefficient index to compute
    #[arg(long, default_value_t = 1000)]
    n_max: usize,
    /// Bits of relative width for transcendental enclosures
    #[arg(long, default_value_t = 128)]
    precision_bits: u32,
    /// Lower hypothesis constant A1 (rational or decimal literal)
    #[arg(long, default_value = "1")]
    a1: String,
    /// Upper hypothesis constant A2 (rational or decimal literal)
    #[arg(long, default_value = "331/250")]
    a2: String,
    /// Which sandwich constant to require
    #[arg(long, value_enum, default_value_t = BModeArg::Both)]
    b_mode: BModeArg,
    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Human)]
    format: FormatArg,
    /// Write output to a file instead of stdout
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args, Clone)]
struct OracleArgs {
    /// Cross-check order (coefficient index; series run to twice this)
    #[arg(long, default_value_t = 50)]
    n_max: usize,
    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Human)]
    format: FormatArg,
    /// Write output to a file instead of stdout
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Negative-control hook: corrupt one engine coefficient copy
    #[arg(long, hide = true)]
    inject_corruption: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BModeArg {
    /// B = 0.6 A2^2 + 0.0144 A2^3
    Formula,
    /// B = 10787/10000
    Literal,
    /// require both, enclose with the formula value
    Both,
}

impl From<BModeArg> for BConstantMode {
    fn from(m: BModeArg) -> Self {
        match m {
            BModeArg::Formula => BConstantMode::Formula,
            BModeArg::Literal => BConstantMode::Literal,
            BModeArg::Both => BConstantMode::Both,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Human,
}

/// Validated run configuration shared by the table-driven subcommands.
struct RunConfig {
    n_max: usize,
    precision_bits: u32,
    a1: Rational,
    a2: Rational,
    b_mode: BConstantMode,
    format: FormatArg,
    out: Option<std::path::PathBuf>,
}

enum CliError {
    Usage(String),
    CheckFailed(String),
    Io(String),
}

impl RunConfig {
    fn from_args(args: &CommonArgs, needs_anchor: bool) -> Result<Self, CliError> {
        if needs_anchor && args.n_max < 8 {
            return Err(CliError::Usage(format!(
                "--n-max must be at least 8 for this command, got {}",
                args.n_max
            )));
        }
        if args.precision_bits < 16 {
            return Err(CliError::Usage(format!(
                "--precision-bits must be at least 16, got {}",
                args.precision_bits
            )));
        }
        let a1 = parse_rational(&args.a1)
            .map_err(|e| CliError::Usage(format!("--a1: {e}")))?;
        let a2 = parse_rational(&args.a2)
            .map_err(|e| CliError::Usage(format!("--a2: {e}")))?;
        if a1 <= Rational::from_integer(0.into()) || a1 >= a2 {
            return Err(CliError::Usage(
                "constants must satisfy 0 < --a1 < --a2".into(),
            ));
        }
        Ok(Self {
            n_max: args.n_max,
            precision_bits: args.precision_bits,
            a1,
            a2,
            b_mode: args.b_mode.into(),
            format: args.format,
            out: args.out.clone(),
        })
    }

    fn decimal_digits(&self) -> usize {
        ((self.precision_bits as usize) * 30_103 / 100_000).max(6)
    }

    fn write(&self, payload: &str) -> Result<(), CliError> {
        emit(self.out.as_deref(), payload)
    }
}

fn emit(out: Option<&std::path::Path>, payload: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let result = match cli.command {
        Command::Coeffs(args) => {
            RunConfig::from_args(&args, false).and_then(|cfg| commands::coeffs(&cfg))
        }
        Command::Certify(args) => {
            RunConfig::from_args(&args, true).and_then(|cfg| commands::certify(&cfg))
        }
        Command::Stokes(args) => {
            RunConfig::from_args(&args, true).and_then(|cfg| commands::stokes(&cfg))
        }
        Command::Convergence(args) => {
            RunConfig::from_args(&args, true).and_then(|cfg| commands::convergence(&cfg))
        }
        Command::Oracle(args) => commands::oracle(&args),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::CheckFailed(message)) => {
            eprintln!("check failed: {message}");
            ExitCode::from(EXIT_CHECK_FAILED)
        }
        Err(CliError::Io(message)) => {
            eprintln!("i/o error: {message}");
            ExitCode::from(EXIT_IO)
        }
    }
}
