use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Dense sampling rate for continuous paths, in samples per unit of path
/// length (one high-resolution pixel).
pub const SAMPLES_PER_UNIT: f64 = 16.0;

/// One trajectory sample: normalized time and sensor position.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

/// How exposure time is distributed over the samples.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dwell {
    /// Continuous motion, piecewise linear between samples; each sample gets
    /// its trapezoidal share of `[0, 1]`.
    #[default]
    Linear,
    /// Discrete positions with no travel in between; every sample gets an
    /// equal share of the exposure.
    Hold,
}

/// Time-ordered sensor positions over the normalized exposure `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    samples: Vec<Sample>,
    dwell: Dwell,
}

impl Trajectory {
    /// Validates: at least one sample, finite values, strictly increasing
    /// times starting at 0 and, when there is more than one sample, ending
    /// at 1.
    pub fn new(samples: Vec<Sample>, dwell: Dwell) -> Result<Self> {
        let first = samples
            .first()
            .ok_or_else(|| invalid("trajectory has no samples"))?;
        if samples
            .iter()
            .any(|s| !(s.t.is_finite() && s.x.is_finite() && s.y.is_finite()))
        {
            return Err(invalid("trajectory contains non-finite values"));
        }
        if first.t != 0.0 {
            return Err(invalid(format!(
                "trajectory must start at t=0, got {}",
                first.t
            )));
        }
        if let Some(w) = samples.windows(2).find(|w| w[1].t <= w[0].t) {
            return Err(invalid(format!(
                "trajectory times must increase strictly ({} then {})",
                w[0].t, w[1].t
            )));
        }
        let last = samples[samples.len() - 1].t;
        if samples.len() > 1 && last != 1.0 {
            return Err(invalid(format!("trajectory must end at t=1, got {last}")));
        }
        Ok(Self { samples, dwell })
    }

    /// A sensor that does not move.
    pub fn stationary(x: f64, y: f64) -> Self {
        Self {
            samples: vec![Sample { t: 0.0, x, y }],
            dwell: Dwell::Linear,
        }
    }

    /// Equal-dwell trajectory over discrete positions.
    pub fn from_positions(positions: &[(f64, f64)]) -> Result<Self> {
        let n = positions.len();
        let samples = positions
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| Sample {
                t: uniform_time(i, n),
                x,
                y,
            })
            .collect();
        Self::new(samples, Dwell::Hold)
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn dwell(&self) -> Dwell {
        self.dwell
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Fraction of the exposure assigned to each sample. Sums to 1.
    pub fn dwell_weights(&self) -> Vec<f64> {
        let n = self.samples.len();
        if n == 1 {
            return vec![1.0];
        }
        match self.dwell {
            Dwell::Hold => vec![1.0 / n as f64; n],
            Dwell::Linear => (0..n)
                .map(|i| {
                    let lo = self.samples[i.saturating_sub(1)].t;
                    let hi = self.samples[(i + 1).min(n - 1)].t;
                    0.5 * (hi - lo)
                })
                .collect(),
        }
    }

    /// Same path translated by `(dx, dy)`.
    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Self {
            samples: self
                .samples
                .iter()
                .map(|s| Sample {
                    t: s.t,
                    x: s.x + dx,
                    y: s.y + dy,
                })
                .collect(),
            dwell: self.dwell,
        }
    }
}

fn uniform_time(i: usize, n: usize) -> f64 {
    if n <= 1 {
        0.0
    } else if i + 1 == n {
        1.0
    } else {
        i as f64 / (n - 1) as f64
    }
}

/// Two-axis sinusoidal vibration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VibrationParams {
    pub amp_x: f64,
    pub amp_y: f64,
    /// Cycles per exposure.
    pub freq_x: f64,
    pub freq_y: f64,
    /// Radians.
    pub phase_x: f64,
    pub phase_y: f64,
}

impl Default for VibrationParams {
    /// Large incommensurate Lissajous motion sized for a 128x128 grid.
    fn default() -> Self {
        Self {
            amp_x: 40.0,
            amp_y: 36.0,
            freq_x: 3.0,
            freq_y: 4.37,
            phase_x: 0.0,
            phase_y: 0.9,
        }
    }
}

impl VibrationParams {
    /// Sample count giving [`SAMPLES_PER_UNIT`] samples per pixel of path
    /// length (bounded from above by the peak speed).
    pub fn default_samples(&self) -> usize {
        let tau = std::f64::consts::TAU;
        let vx = tau * (self.amp_x * self.freq_x).abs();
        let vy = tau * (self.amp_y * self.freq_y).abs();
        let length = vx.hypot(vy);
        ((SAMPLES_PER_UNIT * length).ceil() as usize + 1).max(2)
    }
}

/// `x(t) = amp_x sin(2π freq_x t + phase_x)`, likewise for `y`, sampled at
/// `t = i / (n_samples - 1)`.
pub fn traj_vibration(p: &VibrationParams, n_samples: usize) -> Result<Trajectory> {
    if n_samples < 2 {
        return Err(invalid("vibration needs at least 2 samples"));
    }
    let tau = std::f64::consts::TAU;
    let samples = (0..n_samples)
        .map(|i| {
            let t = uniform_time(i, n_samples);
            Sample {
                t,
                x: p.amp_x * (tau * p.freq_x * t + p.phase_x).sin(),
                y: p.amp_y * (tau * p.freq_y * t + p.phase_y).sin(),
            }
        })
        .collect();
    Trajectory::new(samples, Dwell::Linear)
}

fn check_grid(grid: (usize, usize)) -> Result<()> {
    if grid.0 == 0 || grid.1 == 0 {
        return Err(invalid("grid must be non-empty"));
    }
    Ok(())
}

/// `n` independent positions, uniform over the integer grid, equal dwell.
pub fn traj_random_shifts(n: usize, grid: (usize, usize), seed: u64) -> Result<Trajectory> {
    check_grid(grid)?;
    if n == 0 {
        return Err(invalid("need at least one shift"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let positions: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            (
                rng.gen_range(0..grid.0) as f64,
                rng.gen_range(0..grid.1) as f64,
            )
        })
        .collect();
    Trajectory::from_positions(&positions)
}

/// Lattice random walk visiting `n` positions: starts at the origin, each
/// move is uniform over {stay, ±x, ±y}, and every move takes equal time.
///
/// Positions are stored unwrapped so the path stays continuous; the
/// occupancy map applies the cyclic wrap.
pub fn traj_random_walk(n: usize, grid: (usize, usize), seed: u64) -> Result<Trajectory> {
    check_grid(grid)?;
    if n == 0 {
        return Err(invalid("walk needs at least one position"));
    }
    const MOVES: [(i64, i64); 5] = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vertices = Vec::with_capacity(n);
    let (mut x, mut y) = (0i64, 0i64);
    vertices.push((0.0, 0.0));
    for _ in 1..n {
        let (dx, dy) = MOVES[rng.gen_range(0..MOVES.len())];
        x += dx;
        y += dy;
        vertices.push((x as f64, y as f64));
    }
    polyline(&vertices)
}

/// Constant velocity along `x` over the unit exposure: `x(t) = velocity t`.
pub fn traj_scan(velocity: f64) -> Result<Trajectory> {
    if !velocity.is_finite() {
        return Err(invalid("scan velocity must be finite"));
    }
    polyline(&[(0.0, 0.0), (velocity, 0.0)])
}

/// Densely sampled piecewise-linear path through `vertices`, each segment
/// taking the same time.
fn polyline(vertices: &[(f64, f64)]) -> Result<Trajectory> {
    if vertices.len() == 1 {
        let (x, y) = vertices[0];
        return Ok(Trajectory::stationary(x, y));
    }
    let segments = vertices.len() - 1;
    let mut samples = Vec::new();
    for (s, w) in vertices.windows(2).enumerate() {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        let len = (x1 - x0).hypot(y1 - y0);
        let steps = ((SAMPLES_PER_UNIT * len).ceil() as usize).max(1);
        let first = if s == 0 { 0 } else { 1 };
        for k in first..=steps {
            let a = k as f64 / steps as f64;
            let t = if s + 1 == segments && k == steps {
                1.0
            } else {
                (s as f64 + a) / segments as f64
            };
            samples.push(Sample {
                t,
                x: x0 + a * (x1 - x0),
                y: y0 + a * (y1 - y0),
            });
        }
    }
    Trajectory::new(samples, Dwell::Linear)
}
