//! `wts`: evaluate, validate, decompose, generate and benchmark weighted
//! tiling systems.
//!
//! Exit status: 0 on success, 2 for unreadable or invalid input, 3 when a
//! budget or width limit is hit, 4 for internal failures.

mod bench;
mod check;
mod decompose;
mod eval;
mod files;
mod generate;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

/// Deep k-tree-terms are parsed and rendered recursively by serde_json.
const WORKER_STACK: usize = 1 << 30;

#[derive(Parser)]
#[command(name = "wts", version, about = "Weighted tiling systems on bounded-degree graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a tiling system on a graph.
    Eval(eval::EvalArgs),
    /// Validate graph, tiling system, term and decomposition files.
    Check(check::CheckArgs),
    /// Compute a decomposition or term for a graph.
    Decompose(decompose::DecomposeArgs),
    /// Write a tiling system and graph for a problem family.
    Generate(generate::GenerateArgs),
    /// Time evaluation over a size-parameterized family and print CSV.
    Bench(bench::BenchArgs),
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] wts_core::Error),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => e.exit_code() as u8,
            CliError::Read { .. } | CliError::Usage(_) => 2,
            CliError::Write { .. } => 4,
        }
    }
}

/// Converts any core error into a [`CliError`].
pub fn core<E: Into<wts_core::Error>>(e: E) -> CliError {
    CliError::Core(e.into())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Eval(a) => eval::run(a),
        Command::Check(a) => check::run(a),
        Command::Decompose(a) => decompose::run(a),
        Command::Generate(a) => generate::run(a),
        Command::Bench(a) => bench::run(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let worker = std::thread::Builder::new()
        .stack_size(WORKER_STACK)
        .spawn(move || run(cli));
    let outcome = match worker {
        Ok(handle) => handle.join(),
        Err(e) => {
            eprintln!("error: cannot start worker thread: {e}");
            return ExitCode::from(4);
        }
    };
    match outcome {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
        Err(_) => ExitCode::from(4),
    }
}
