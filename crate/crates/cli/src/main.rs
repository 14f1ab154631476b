//! `growthlab`: command-line runner for the growthlab experiments.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 mathematical
//! precondition, 3 budget or size cap.

mod args;
mod commands;
mod input;
mod output;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(growthlab::Error),
    Io(io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Lib(growthlab::Error::Parse(_)) => 1,
            CliError::Lib(e) if e.is_budget() => 3,
            CliError::Lib(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<growthlab::Error> for CliError {
    fn from(e: growthlab::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Sizes the global pool from `GROWTHLAB_THREADS`, if set.
fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("GROWTHLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("GROWTHLAB_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size the thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    init_threads()?;
    let table = commands::run(&cli.command)?;
    let config = serde_json::to_string(cli).expect("config serializes");
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    output::write_csv(&mut out, &config, cli.deterministic, &table)?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("growthlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
