use std::path::{Path, PathBuf};

use mhz_core::lab::{EvalSettings, DEFAULT_MAX_SHIFTS};
use mhz_core::EvalPolicy;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable naming a TOML config file.
pub const CONFIG_ENV: &str = "MHZ_CONFIG";

/// Settings shared by every subcommand; every field has a default and the
/// whole struct is echoed into each artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub xi: f64,
    pub policy: EvalPolicy,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// 0 lets the thread pool pick.
    pub threads: usize,
    pub max_shifts: usize,
    pub max_grid_points: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            xi: 0.3,
            policy: EvalPolicy::default(),
            seed: 0,
            output_dir: PathBuf::from("mhz-out"),
            threads: 0,
            max_shifts: DEFAULT_MAX_SHIFTS,
            max_grid_points: 4_000_000,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(RunConfig::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Parse(format!("config {}: {e}", path.display())))
    }

    pub fn eval(&self) -> EvalSettings {
        EvalSettings { xi: self.xi, policy: self.policy }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_toml() {
        let c: RunConfig = toml::from_str("seed = 9\n[policy]\nscale = 2.0\n").unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.policy.scale, 2.0);
        assert_eq!(c.policy.a, EvalPolicy::default().a);
        assert_eq!(c.xi, 0.3);
        assert!(toml::from_str::<RunConfig>("sed = 9").is_err());
    }

    #[test]
    fn round_trip() {
        let c = RunConfig::default();
        let text = toml::to_string(&c).unwrap();
        assert_eq!(toml::from_str::<RunConfig>(&text).unwrap(), c);
    }
}
