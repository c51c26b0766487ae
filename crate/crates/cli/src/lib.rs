//! The `cbct` command line: table computation, Weil sums, cross-engine checks and sweeps.

pub mod args;
mod commands;
pub mod jobs;
pub mod output;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command};
use cbct_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Io(std::io::Error),
    /// Number of disagreeing entries.
    Mismatch(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Mismatch(_) => EXIT_MISMATCH,
            Failure::Io(_) => EXIT_INVALID,
            Failure::Core(e) => match e {
                Error::Internal(_)
                | Error::RoundingToleranceExceeded { .. }
                | Error::NonRealSum { .. }
                | Error::HomogeneityViolation { .. } => EXIT_MISMATCH,
                _ => EXIT_INVALID,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "i/o: {e}"),
            Failure::Mismatch(n) => write!(f, "{n} entries disagree across engines"),
        }
    }
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool, Failure> {
    let n = match workers {
        Some(0) => return Err(Error::PreconditionViolated("--workers must be at least 1".into()).into()),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")).into())
}

fn dispatch(cmd: &Command) -> Result<(), Failure> {
    let workers = match cmd {
        Command::FieldInfo(a) => a.output.workers,
        Command::Ddt(a) | Command::Bct(a) => a.output.workers,
        Command::Weil(a) => a.output.workers,
        Command::Verify(a) => a.output.workers,
        Command::Sweep(a) => a.output.workers,
    };
    pool(workers)?.install(|| match cmd {
        Command::FieldInfo(a) => commands::field_info(a),
        Command::Ddt(a) => commands::ddt(a),
        Command::Bct(a) => commands::bct(a),
        Command::Weil(a) => commands::weil(a),
        Command::Verify(a) => commands::verify(a),
        Command::Sweep(a) => commands::sweep(a),
    })
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            if !matches!(f, Failure::Mismatch(_)) {
                eprintln!("error: {f}");
            }
            f.exit_code()
        }
    }
}
