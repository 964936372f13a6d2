use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{CaptureMode, ExperimentConfig};
use crate::error::{Error, Result};
use crate::motion::Dwell;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaptureEntry {
    pub file: String,
    /// Sub-pixel offset `(k, l)` of a grid capture.
    pub offset: Option<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryEntry {
    pub file: String,
    /// How time is distributed between CSV samples when re-reading.
    pub dwell: Dwell,
}

/// Record of a simulation run. File names are relative to the manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub mode: CaptureMode,
    pub f: usize,
    pub highres_dims: (usize, usize),
    pub lowres_dims: (usize, usize),
    pub seed: u64,
    pub target_seed: u64,
    pub noise_seed: u64,
    pub target: String,
    pub captures: Vec<CaptureEntry>,
    pub interlaced: Option<String>,
    pub occupancy: Option<String>,
    pub trajectory: Option<TrajectoryEntry>,
    pub config: ExperimentConfig,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        std::fs::write(&path, text)?;
        Ok(path)
    }
}
