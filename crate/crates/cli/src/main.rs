//! `borel-stokes`: Borel sums, Stokes lines, jumps and maximal families from
//! the command line.

mod commands;
mod output;
mod problem;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use borel_stokes::{Error, ErrorKind};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "borel-stokes", version, about = "Borel summation for ∂ₜᵖu = ∂_z^q u with meromorphic data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the kernel C_α along a ray in the τ-plane.
    Kernel(commands::KernelArgs),
    /// Borel sum at one point, or along a grid of |t|.
    Sum(commands::SumArgs),
    /// Terms, optimal truncation and Gevrey order of the formal solution.
    Formal(commands::FormalArgs),
    /// Stokes and anti-Stokes directions.
    Stokes(commands::StokesArgs),
    /// Jump across one Stokes line by one or all routes.
    Jump(commands::JumpArgs),
    /// Maximal family of actual solutions.
    Family(commands::FamilyArgs),
    /// Family verification plus jump agreement; exits 2 if anything fails.
    Verify(commands::VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// A failed run: exit code, short name for stderr, message.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub name: &'static str,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 1, name: "Usage", message: message.into() }
    }

    pub fn io(err: impl fmt::Display) -> Self {
        Self { code: 1, name: "Io", message: err.to_string() }
    }

    /// A check that ran to completion but did not pass.
    pub fn check(message: impl Into<String>) -> Self {
        Self { code: 2, name: "VerificationFailed", message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Usage => 1,
            ErrorKind::NonConvergence => 2,
            ErrorKind::Singular => 3,
            ErrorKind::DomainGuard => 4,
            ErrorKind::NotApplicable => 5,
        };
        Self { code, name: e.name(), message: e.to_string() }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("BOREL_STOKES_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(format!("BOREL_STOKES_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(Failure::io)
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Kernel(a) => commands::kernel(a),
        Command::Sum(a) => commands::sum(a),
        Command::Formal(a) => commands::formal(a),
        Command::Stokes(a) => commands::stokes(a),
        Command::Jump(a) => commands::jump(a),
        Command::Family(a) => commands::family(a),
        Command::Verify(a) => commands::verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}: {}", f.name, f.message);
            ExitCode::from(f.code)
        }
    }
}
