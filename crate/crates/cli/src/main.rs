mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use config::RunConfig;


#[derive(Debug)]
pub enum CliError {
    /// Malformed arguments or input files: exit 2.
    Parse(String),
    /// A failing evaluator or experiment: exit 3.
    Eval(mhz_core::Error),
    /// Artifact I/O: exit 1.
    Io(String),
}

impl From<mhz_core::Error> for CliError {
    fn from(e: mhz_core::Error) -> Self {
        match e {
            mhz_core::Error::Parse(m) => CliError::Parse(m),
            e => CliError::Eval(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut config = RunConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out) = cli.out {
        config.output_dir = out;
    }
    if let Some(threads) = cli.threads {
        config.threads = threads;
    }
    if config.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build_global()
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    commands::dispatch(cli.command, &config)
}

/// Negative numbers such as `-0.5,2` would otherwise read as flags; a leading
/// space keeps them values and the value parsers trim it.
fn protect_negatives(args: impl Iterator<Item = String>) -> Vec<String> {
    args.map(|a| {
        let numeric =
            a.strip_prefix('-').and_then(|r| r.chars().next()).is_some_and(|c| c.is_ascii_digit() || c == '.');
        if numeric {
            format!(" {a}")
        } else {
            a
        }
    })
    .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(protect_negatives(std::env::args()));
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Parse(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Eval(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(CliError::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
