use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bench::{gen_char_target, metrics, CharTarget};
use crate::error::{invalid, Error, Result};
use crate::forward::{capture_moving, SensorSpec};
use crate::motion::{
    occupancy, traj_random_shifts, traj_random_walk, traj_vibration, OccupancyMap, Trajectory,
    VibrationParams,
};
use crate::raster::Image;
use crate::solve::{sparse_reconstruct, Prior, SolverOptions, SolverReport};

/// Camera motion families compared by the sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Vibration,
    Shifts,
    Walk,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Vibration, Family::Shifts, Family::Walk];

    pub fn name(self) -> &'static str {
        match self {
            Family::Vibration => "vibration",
            Family::Shifts => "shifts",
            Family::Walk => "walk",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|fam| fam.name() == s)
            .ok_or_else(|| invalid(format!("unknown trajectory family `{s}`")))
    }
}

/// Parameters of the character-count sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub dims: (usize, usize),
    pub f: usize,
    pub char_counts: Vec<usize>,
    pub families: Vec<Family>,
    pub seeds: Vec<u64>,
    pub vibration: VibrationParams,
    pub n_shifts: usize,
    pub walk_steps: usize,
    pub solver: SolverOptions,
    /// Worker threads; 0 uses all cores.
    pub jobs: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            dims: (128, 128),
            f: 4,
            char_counts: vec![5, 10, 20, 40, 80],
            families: Family::ALL.to_vec(),
            seeds: (0..5).collect(),
            vibration: VibrationParams::default(),
            n_shifts: 1000,
            walk_steps: 1000,
            solver: sparse_solver_defaults(),
            jobs: 0,
        }
    }
}

/// ℓ1 settings used for single-capture recovery of sparse targets.
pub fn sparse_solver_defaults() -> SolverOptions {
    SolverOptions {
        lambda: 1e-4,
        max_iter: 1000,
        inner_iter: 1,
        prior: Prior::L1,
        nonneg: true,
        ..SolverOptions::default()
    }
}

impl SweepConfig {
    /// Trajectory of `family` for the cell seeded by `seed`.
    pub fn trajectory(&self, family: Family, seed: u64) -> Result<Trajectory> {
        match family {
            Family::Vibration => traj_vibration(&self.vibration, self.vibration.default_samples()),
            Family::Shifts => traj_random_shifts(self.n_shifts, self.dims, cell_seed(seed, 1)),
            Family::Walk => traj_random_walk(self.walk_steps, self.dims, cell_seed(seed, 2)),
        }
    }

    fn validate(&self) -> Result<()> {
        SensorSpec::for_target(self.dims, self.f)?;
        self.solver.validate()?;
        if self.char_counts.is_empty() || self.families.is_empty() || self.seeds.is_empty() {
            return Err(invalid("sweep needs at least one count, family and seed"));
        }
        Ok(())
    }
}

/// Decorrelates the trajectory stream from the target stream of a seed.
fn cell_seed(seed: u64, stream: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ stream.wrapping_mul(0xD1B5_4A32_D192_ED03)
}

/// One reconstruction of the sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub family: Family,
    pub n_chars: usize,
    pub seed: u64,
    pub rms: f64,
}

/// Mean RMS over seeds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub family: Family,
    pub n_chars: usize,
    pub mean_rms: f64,
}

/// Everything produced by one sweep cell.
#[derive(Clone, Debug)]
pub struct CellOutput {
    pub target: CharTarget,
    pub trajectory: Trajectory,
    pub occupancy: OccupancyMap,
    pub capture: Image,
    pub estimate: Image,
    pub report: SolverReport,
    pub rms: f64,
}

/// Target, capture and ℓ1 reconstruction for one (family, count, seed).
pub fn simulate_cell(
    cfg: &SweepConfig,
    family: Family,
    n_chars: usize,
    seed: u64,
) -> Result<CellOutput> {
    let spec = SensorSpec::for_target(cfg.dims, cfg.f)?;
    let target = gen_char_target(cfg.dims, n_chars, seed)?;
    let trajectory = cfg.trajectory(family, seed)?;
    let q = occupancy(&trajectory, cfg.dims)?;
    let capture = capture_moving(&target.image, &q, &spec)?;
    let (estimate, report) = sparse_reconstruct(
        std::slice::from_ref(&capture),
        std::slice::from_ref(&q),
        cfg.f,
        &cfg.solver,
    )?;
    let rms = metrics(&estimate, &target.image)?.rms;
    Ok(CellOutput {
        target,
        trajectory,
        occupancy: q,
        capture,
        estimate,
        report,
        rms,
    })
}

/// Reconstruction RMS for a single cell.
pub fn run_cell(cfg: &SweepConfig, family: Family, n_chars: usize, seed: u64) -> Result<SweepRow> {
    let out = simulate_cell(cfg, family, n_chars, seed)?;
    Ok(SweepRow {
        family,
        n_chars,
        seed,
        rms: out.rms,
    })
}

/// Runs every cell, in parallel, and returns rows ordered by
/// (count, family, seed) as listed in the config.
pub fn run_sparsity_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let mut cells = Vec::new();
    for &n in &cfg.char_counts {
        for &fam in &cfg.families {
            for &seed in &cfg.seeds {
                cells.push((fam, n, seed));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| {
        cells
            .par_iter()
            .map(|&(fam, n, seed)| run_cell(cfg, fam, n, seed))
            .collect()
    })
}

/// Mean RMS per (count, family), keeping first-appearance order.
pub fn summarize(rows: &[SweepRow]) -> Vec<SweepSummary> {
    let mut out: Vec<(SweepSummary, usize)> = Vec::new();
    for r in rows {
        match out
            .iter_mut()
            .find(|(s, _)| s.family == r.family && s.n_chars == r.n_chars)
        {
            Some((s, k)) => {
                s.mean_rms += r.rms;
                *k += 1;
            }
            None => out.push((
                SweepSummary {
                    family: r.family,
                    n_chars: r.n_chars,
                    mean_rms: r.rms,
                },
                1,
            )),
        }
    }
    out.into_iter()
        .map(|(mut s, k)| {
            s.mean_rms /= k as f64;
            s
        })
        .collect()
}

/// Families whose mean RMS decreases somewhere as the count grows.
pub fn non_monotone_families(summary: &[SweepSummary]) -> Vec<Family> {
    let mut bad = Vec::new();
    for fam in Family::ALL {
        let mut pts: Vec<(usize, f64)> = summary
            .iter()
            .filter(|s| s.family == fam)
            .map(|s| (s.n_chars, s.mean_rms))
            .collect();
        pts.sort_by_key(|p| p.0);
        if pts.windows(2).any(|w| w[1].1 < w[0].1) {
            bad.push(fam);
        }
    }
    bad
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("family,n_chars,seed,rms\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{}\n",
            r.family, r.n_chars, r.seed, r.rms
        ));
    }
    s
}

pub fn summary_to_csv(summary: &[SweepSummary]) -> String {
    let mut s = String::from("family,n_chars,mean_rms\n");
    for r in summary {
        s.push_str(&format!("{},{},{}\n", r.family, r.n_chars, r.mean_rms));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> SweepConfig {
        SweepConfig {
            dims: (32, 32),
            f: 2,
            char_counts: vec![0, 2],
            seeds: vec![3, 4],
            n_shifts: 20,
            walk_steps: 20,
            vibration: VibrationParams {
                amp_x: 6.0,
                amp_y: 5.0,
                ..VibrationParams::default()
            },
            solver: SolverOptions {
                max_iter: 60,
                ..sparse_solver_defaults()
            },
            jobs: 2,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn ordered_and_deterministic() {
        let cfg = tiny();
        let a = run_sparsity_sweep(&cfg).unwrap();
        let b = run_sparsity_sweep(&SweepConfig { jobs: 1, ..cfg }).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 12);
        assert_eq!(
            (a[0].n_chars, a[0].family, a[0].seed),
            (0, Family::Vibration, 3)
        );
        assert_eq!(
            (a[11].n_chars, a[11].family, a[11].seed),
            (2, Family::Walk, 4)
        );
        // An empty target is recovered exactly.
        assert!(a.iter().filter(|r| r.n_chars == 0).all(|r| r.rms == 0.0));
    }

    #[test]
    fn summary_and_csv() {
        let rows = vec![
            SweepRow {
                family: Family::Walk,
                n_chars: 5,
                seed: 0,
                rms: 0.1,
            },
            SweepRow {
                family: Family::Walk,
                n_chars: 5,
                seed: 1,
                rms: 0.3,
            },
            SweepRow {
                family: Family::Walk,
                n_chars: 10,
                seed: 0,
                rms: 0.05,
            },
        ];
        let s = summarize(&rows);
        assert_eq!(s.len(), 2);
        assert!((s[0].mean_rms - 0.2).abs() < 1e-15);
        assert_eq!(non_monotone_families(&s), vec![Family::Walk]);
        assert_eq!(
            summary_to_csv(&s[1..]),
            "family,n_chars,mean_rms\nwalk,10,0.05\n"
        );
        assert!(rows_to_csv(&rows).starts_with("family,n_chars,seed,rms\nwalk,5,0,0.1\n"));
    }

    #[test]
    fn family_names_round_trip() {
        for fam in Family::ALL {
            assert_eq!(fam.name().parse::<Family>().unwrap(), fam);
        }
        assert!("spiral".parse::<Family>().is_err());
    }
}
