use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bench::{sparse_solver_defaults, LocalizeConfig, SweepConfig, DEFAULT_GLYPH_HEIGHT};
use crate::error::{Error, Result};
use crate::motion::VibrationParams;
use crate::solve::SolverOptions;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    #[default]
    Chars,
    Bars,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TargetConfig {
    pub kind: TargetKind,
    pub dims: (usize, usize),
    pub n_chars: usize,
    pub glyph_height: usize,
    /// Bar-group scales for `bars` targets.
    pub bar_scales: Vec<usize>,
    /// Overrides the master seed for target generation.
    pub seed: Option<u64>,
}

impl Default for TargetConfig {
    fn default() -> Self {
        TargetConfig {
            kind: TargetKind::Chars,
            dims: (128, 128),
            n_chars: 10,
            glyph_height: DEFAULT_GLYPH_HEIGHT,
            bar_scales: vec![8, 4, 2, 1],
            seed: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaptureMode {
    /// All `f²` sub-pixel shifted static captures.
    #[default]
    Grid,
    /// A single capture under `trajectory`.
    Moving,
    /// A single capture under constant-velocity motion along `x`.
    Scan,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrajectoryKind {
    Static,
    #[default]
    Vibration,
    Shifts,
    Walk,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrajectoryConfig {
    pub kind: TrajectoryKind,
    pub vibration: VibrationParams,
    /// Vibration sample count; derived from the path length when absent.
    pub n_samples: Option<usize>,
    /// Number of shifts, or walk positions.
    pub count: usize,
    /// Scan displacement over the exposure, in high-resolution pixels.
    pub velocity: f64,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        TrajectoryConfig {
            kind: TrajectoryKind::Vibration,
            vibration: VibrationParams::default(),
            n_samples: None,
            count: 1000,
            velocity: 8.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CaptureConfig {
    pub mode: CaptureMode,
    pub f: usize,
    pub trajectory: TrajectoryConfig,
    pub noise_sigma: f64,
}

impl Default for CaptureConfig {
    fn default() -> Self {
        CaptureConfig {
            mode: CaptureMode::Grid,
            f: 8,
            trajectory: TrajectoryConfig::default(),
            noise_sigma: 0.0,
        }
    }
}

/// λ grids for the prior comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PriorSweepConfig {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub points: usize,
}

impl Default for PriorSweepConfig {
    fn default() -> Self {
        PriorSweepConfig {
            lambda_min: 1e-5,
            lambda_max: 10.0,
            points: 7,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub n: usize,
    pub f: usize,
    pub widths: (usize, usize),
    pub axis: usize,
    pub eps: f64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            n: 128,
            f: 8,
            widths: (4, 7),
            axis: 28,
            eps: 1e-9,
        }
    }
}

/// A complete, self-describing experiment description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Master seed; every random stream derives from it.
    pub seed: u64,
    pub output_dir: PathBuf,
    pub target: TargetConfig,
    pub capture: CaptureConfig,
    pub solver: SolverOptions,
    pub priors: PriorSweepConfig,
    pub sweep: SweepConfig,
    pub localize: LocalizeConfig,
    pub spectrum: SpectrumConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 1,
            output_dir: PathBuf::from("out"),
            target: TargetConfig::default(),
            capture: CaptureConfig::default(),
            solver: SolverOptions::default(),
            priors: PriorSweepConfig::default(),
            sweep: SweepConfig::default(),
            localize: LocalizeConfig::default(),
            spectrum: SpectrumConfig::default(),
        }
    }
}

impl ExperimentConfig {
    /// Defaults tuned for a named experiment; unknown names get the plain
    /// defaults.
    pub fn preset(name: &str) -> Self {
        let mut cfg = ExperimentConfig::default();
        if name == "fig7" {
            cfg.capture.mode = CaptureMode::Moving;
            cfg.capture.f = 4;
            cfg.solver = sparse_solver_defaults();
        }
        cfg
    }

    /// Seed used for the target.
    pub fn target_seed(&self) -> u64 {
        self.target.seed.unwrap_or(self.seed)
    }

    /// Independent stream derived from the master seed.
    pub fn stream_seed(&self, stream: u64) -> u64 {
        let mut z = self
            .seed
            .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Starts from `base`, merges an optional JSON file over it, then applies
    /// `key.path=value` overrides. Unknown keys are rejected.
    pub fn load(base: ExperimentConfig, file: Option<&Path>, sets: &[String]) -> Result<Self> {
        let mut value = serde_json::to_value(&base).map_err(config_err)?;
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)?;
            let patch: Value = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            merge(&mut value, patch);
        }
        for s in sets {
            apply_override(&mut value, s)?;
        }
        let cfg: ExperimentConfig = serde_json::from_value(value).map_err(config_err)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.solver.validate()?;
        if self.capture.f == 0 {
            return Err(Error::Config("capture.f must be positive".into()));
        }
        let (r, c) = self.target.dims;
        if r == 0 || c == 0 || r % self.capture.f != 0 || c % self.capture.f != 0 {
            return Err(Error::Config(format!(
                "target.dims {:?} must be positive multiples of capture.f={}",
                self.target.dims, self.capture.f
            )));
        }
        if !(self.capture.noise_sigma >= 0.0) {
            return Err(Error::Config("capture.noise_sigma must be >= 0".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

fn config_err(e: serde_json::Error) -> Error {
    Error::Config(e.to_string())
}

/// Recursive object merge; non-object values replace.
fn merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Applies `a.b.c=value`. The value is parsed as JSON, falling back to a
/// plain string.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<()> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{assignment}` is not key=value")))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(Error::Config(format!("bad override path `{path}`")));
    }
    let mut node = root;
    for (i, key) in keys.iter().enumerate() {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| Error::Config(format!("`{}` is not an object", keys[..i].join("."))))?;
        if i + 1 == keys.len() {
            if !obj.contains_key(*key) {
                return Err(Error::Config(format!("unknown config key `{path}`")));
            }
            obj.insert(key.to_string(), value);
            return Ok(());
        }
        node = obj
            .get_mut(*key)
            .ok_or_else(|| Error::Config(format!("unknown config key `{path}`")))?;
        if node.is_null() {
            return Err(Error::Config(format!(
                "`{path}` cannot be set below a null"
            )));
        }
    }
    unreachable!("path has at least one key")
}
