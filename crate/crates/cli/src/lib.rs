//! `progc`: evolve cellular automata, measure their programmability
//! coefficient, sweep the elementary rules and compare systems.
//!
//! Every command writes its artifacts plus a `manifest.json` into `--out`;
//! `progc replay --manifest <path> --out <dir>` re-runs the recorded command
//! and checks the new artifacts hash-for-hash.
//!
//! Exit codes: 0 success, 2 usage, 3 incomparable results, 4 internal error.
//! `PROGC_WORKERS` overrides the worker-thread count.

pub mod args;
mod commands;
pub mod error;
pub mod manifest;
pub mod pbm;
pub mod report;

use std::ffi::OsString;

use clap::Parser;

pub use args::{Cli, Command};
pub use error::{exit, CliError, CliResult};

/// Environment variable overriding the number of worker threads.
pub const WORKERS_ENV: &str = "PROGC_WORKERS";

/// Runs an already parsed invocation; `argv` is recorded in the manifest.
pub fn execute(cli: Cli, argv: &[String]) -> CliResult<i32> {
    let pool = worker_pool()?;
    pool.install(|| commands::dispatch(cli.command, argv))
}

/// Parses and runs `argv` (program name excluded), reporting clap errors as usage errors.
pub fn run<I, S>(argv: I) -> CliResult<i32>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let full = std::iter::once(OsString::from("progc")).chain(argv.iter().map(OsString::from));
    let cli = Cli::try_parse_from(full).map_err(|e| CliError::usage(e.to_string()))?;
    execute(cli, &argv)
}

fn worker_pool() -> CliResult<rayon::ThreadPool> {
    let threads = match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::usage(format!("{WORKERS_ENV} must be a positive integer, got `{v}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Internal(e.into()))
}
