//! Optional TOML config. Keys: q, e, modulus, precision, cache_dir, jobs.
//!
//! Settings only pick defaults; command-line flags (and HANKEL_CACHE_DIR) take precedence.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub q: Option<u32>,
    pub e: Option<u32>,
    /// Irreducible modulus in w, e.g. "w^2 + w + 1".
    pub modulus: Option<String>,
    /// Default precision for compute.
    pub precision: Option<i64>,
    pub cache_dir: Option<PathBuf>,
    /// Worker threads.
    pub jobs: Option<usize>,
}

impl Config {
    pub fn load(path: &Path) -> CliResult<Config> {
        let err = |message: String| CliError::Config { path: path.display().to_string(), message };
        let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
        toml::from_str(&text).map_err(|e| err(e.to_string()))
    }
}
