use std::fs;
use std::path::{Path, PathBuf};

use mhz_core::ComplexValue;
use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

/// Version of every JSON artifact layout.
pub const SCHEMA_VERSION: u32 = 1;

/// {re, im} in place of the two-element array of the complex type.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<ComplexValue> for Complex {
    fn from(z: ComplexValue) -> Self {
        Complex { re: z.re, im: z.im }
    }
}

/// The common wrapper of every JSON artifact.
#[derive(Debug, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema_version: u32,
    pub command: &'a str,
    pub seed: u64,
    pub config_echo: &'a RunConfig,
    #[serde(flatten)]
    pub result: T,
}

impl<'a, T: Serialize> Envelope<'a, T> {
    pub fn new(command: &'a str, config: &'a RunConfig, result: T) -> Self {
        Envelope { schema_version: SCHEMA_VERSION, command, seed: config.seed, config_echo: config, result }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))
    }
}

pub fn artifact_path(config: &RunConfig, name: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(&config.output_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", config.output_dir.display())))?;
    Ok(config.output_dir.join(name))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Writes a CSV file with the given header and pre-formatted rows.
pub fn write_csv(path: &Path, header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}
