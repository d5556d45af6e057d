//! Run configuration: group descriptor, tolerances, budgets, output
//! directory, and the seed for pseudo-random validation points. Loaded
//! from a JSON file, with the output directory overridable through the
//! HTYPE_OUTPUT_DIR environment variable.

use crate::fail::{CliError, CliResult};
use htype_core::GroupDescriptor;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

pub const OUTPUT_DIR_ENV: &str = "HTYPE_OUTPUT_DIR";

/// Smallest node budget any command accepts; the harmonic commands check
/// their grid sizes against the configured budget before running.
pub const MIN_NODE_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub group: GroupDescriptor,
    pub transform_tol: f64,
    pub quad_tol: f64,
    pub node_budget: usize,
    pub output_dir: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            group: GroupDescriptor::Heisenberg { r: 1 },
            transform_tol: 1e-4,
            quad_tol: 1e-8,
            node_budget: 4_000_000,
            output_dir: PathBuf::from("out"),
            seed: 17,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&PathBuf>) -> CliResult<Self> {
        let mut cfg = match path {
            None => RunConfig::default(),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::config(format!("cannot read config {}: {e}", p.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::config(format!("bad config {}: {e}", p.display())))?
            }
        };
        if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
            cfg.output_dir = PathBuf::from(dir);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> CliResult<()> {
        if !(self.transform_tol > 0.0) || !(self.quad_tol > 0.0) {
            return Err(CliError::config(format!(
                "tolerances must be > 0 (transform_tol = {}, quad_tol = {})",
                self.transform_tol, self.quad_tol
            )));
        }
        if self.node_budget < MIN_NODE_BUDGET {
            return Err(CliError::config(format!(
                "node_budget {} below the minimum viable {MIN_NODE_BUDGET}",
                self.node_budget
            )));
        }
        Ok(())
    }

    /// Ensure the output directory exists and resolve a file inside it.
    pub fn out_path(&self, name: &str) -> CliResult<PathBuf> {
        std::fs::create_dir_all(&self.output_dir).map_err(|e| {
            CliError::config(format!(
                "cannot create output dir {}: {e}",
                self.output_dir.display()
            ))
        })?;
        Ok(self.output_dir.join(name))
    }
}

/// Parse a `family:param` group override such as `heisenberg:1`.
pub fn parse_group(s: &str) -> CliResult<GroupDescriptor> {
    let (family, param) = s
        .split_once(':')
        .ok_or_else(|| CliError::config(format!("group `{s}` is not family:param")))?;
    let n: usize = param
        .parse()
        .map_err(|_| CliError::config(format!("group parameter `{param}` is not an integer")))?;
    match family {
        "heisenberg" => Ok(GroupDescriptor::Heisenberg { r: n }),
        "quaternionic" => Ok(GroupDescriptor::Quaternionic { n }),
        other => Err(CliError::config(format!(
            "unknown group family `{other}` (custom groups go through the config file)"
        ))),
    }
}
