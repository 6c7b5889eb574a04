use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Wall times in seconds.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimes {
    pub build_transforms: f64,
    pub per_step_collision: f64,
    pub total: f64,
}

/// Everything needed to rerun and audit one command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub version: String,
    pub threads: usize,
    pub seed: u64,
    pub times: PhaseTimes,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    /// `<csv>.manifest.json`.
    pub fn path_for(csv: &Path) -> PathBuf {
        let mut name = csv.file_name().map(|s| s.to_os_string()).unwrap_or_default();
        name.push(".manifest.json");
        csv.with_file_name(name)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest is serializable");
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}
