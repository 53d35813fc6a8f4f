//! Scenario configuration, batch execution, and report emission for the
//! walklab laboratory: the process boundary around `walklab-core`.

pub mod bundled;
pub mod config;
pub mod report;
pub mod runner;

use std::path::Path;

use walklab_core::{Error, Result};

use config::ScenarioConfig;

/// Resolves a CLI config argument: a bundled scenario name first, then a
/// filesystem path.
pub fn load_config(arg: &str) -> Result<ScenarioConfig> {
    if let Some(text) = bundled::find(arg) {
        return ScenarioConfig::from_json(text);
    }
    let path = Path::new(arg);
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::Config(format!(
            "`{arg}` is neither a bundled scenario nor a readable file: {e}"
        ))
    })?;
    ScenarioConfig::from_json(&text)
}
