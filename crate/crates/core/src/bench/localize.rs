//! Sub-pixel localization from one-pixel motion blur.
//!
//! A sensor pixel `k` integrates over `[kΔ, (k+1)Δ)`. During the exposure
//! the sensor translates by one pixel at constant velocity, centred on the
//! nominal position, so the image of a point at `t₀` sweeps
//! `[t₀ − Δ/2, t₀ + Δ/2)`. When that segment straddles a pixel boundary the
//! energy splits into two samples `b = I[k]` and `c = I[k+1]`, and
//! `t₀ = (k + 1/2 + c/(b+c))·Δ`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Relative threshold separating signal samples from numerical zeros.
pub const SIGNIFICANT: f64 = 1e-9;

/// A point source on a 1D sensor line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointScene1D {
    /// Pixel pitch.
    pub pitch: f64,
    /// Source position in physical units.
    pub t0: f64,
    /// Source intensity.
    pub intensity: f64,
}

impl PointScene1D {
    pub fn new(pitch: f64, t0: f64, intensity: f64) -> Result<Self> {
        if !(pitch > 0.0 && pitch.is_finite()) {
            return Err(invalid("pitch must be positive"));
        }
        if !(intensity > 0.0 && intensity.is_finite()) {
            return Err(invalid("intensity must be positive"));
        }
        if !t0.is_finite() {
            return Err(invalid("source position must be finite"));
        }
        Ok(PointScene1D {
            pitch,
            t0,
            intensity,
        })
    }

    /// Captures the scene on `n_pixels` sensor pixels under one-pixel
    /// centred motion. The swept segment must lie inside the sensor.
    pub fn capture(&self, n_pixels: usize) -> Result<Vec<f64>> {
        let d = self.pitch;
        let (lo, hi) = (self.t0 - 0.5 * d, self.t0 + 0.5 * d);
        if lo < 0.0 || hi > n_pixels as f64 * d {
            return Err(invalid("source sweep leaves the sensor"));
        }
        Ok((0..n_pixels)
            .map(|k| {
                let (a, b) = (k as f64 * d, (k + 1) as f64 * d);
                let overlap = (hi.min(b) - lo.max(a)).max(0.0);
                self.intensity * overlap / d
            })
            .collect())
    }

    /// Admissible source positions for pixel pair `(k, k+1)`: the open
    /// interval on which both samples are non-zero.
    pub fn admissible(k: usize, pitch: f64) -> (f64, f64) {
        ((k as f64 + 0.5) * pitch, (k as f64 + 1.5) * pitch)
    }
}

/// Result of [`localize_point_source`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Localization {
    /// Total intensity `b + c`.
    pub intensity: f64,
    /// Source position in physical units.
    pub t0: f64,
    /// Index of the first of the two samples.
    pub pixel: usize,
}

/// Position from one sample pair: `b` at pixel `k`, `c` at `k+1`.
pub fn localize_pair(b: f64, c: f64, k: usize, pitch: f64) -> Result<Localization> {
    let a = b + c;
    if !(a > 0.0) || b < 0.0 || c < 0.0 {
        return Err(Error::NotLocalizable(format!(
            "pair ({b}, {c}) carries no non-negative energy"
        )));
    }
    Ok(Localization {
        intensity: a,
        t0: (k as f64 + 0.5 + c / a) * pitch,
        pixel: k,
    })
}

/// Localizes a noiseless capture. Exactly two adjacent samples must exceed
/// `SIGNIFICANT · max`.
pub fn localize_point_source(profile: &[f64], pitch: f64) -> Result<Localization> {
    check_profile(profile, pitch)?;
    let max = profile.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return Err(Error::NotLocalizable("profile is zero".into()));
    }
    let hits: Vec<usize> = (0..profile.len())
        .filter(|&k| profile[k].abs() > SIGNIFICANT * max)
        .collect();
    match hits[..] {
        [k, k1] if k1 == k + 1 => localize_pair(profile[k], profile[k1], k, pitch),
        _ => Err(Error::NotLocalizable(format!(
            "expected two adjacent significant samples, found {}",
            hits.len()
        ))),
    }
}

/// Localizes a noisy capture: takes the adjacent pair with the largest sum
/// and clamps negative samples to zero.
pub fn localize_point_source_noisy(profile: &[f64], pitch: f64) -> Result<Localization> {
    check_profile(profile, pitch)?;
    if profile.len() < 2 {
        return Err(Error::NotLocalizable("need at least two samples".into()));
    }
    let k = (0..profile.len() - 1)
        .max_by(|&i, &j| {
            let si = profile[i] + profile[i + 1];
            let sj = profile[j] + profile[j + 1];
            si.total_cmp(&sj)
        })
        .unwrap();
    localize_pair(profile[k].max(0.0), profile[k + 1].max(0.0), k, pitch)
}

fn check_profile(profile: &[f64], pitch: f64) -> Result<()> {
    if !(pitch > 0.0 && pitch.is_finite()) {
        return Err(invalid("pitch must be positive"));
    }
    if profile.iter().any(|v| !v.is_finite()) {
        return Err(invalid("profile contains non-finite samples"));
    }
    Ok(())
}

/// Edge position recovered by [`estimate_edge_offset`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeEstimate {
    /// Edge position in sensor pixels; pixel `j` spans `[j, j+1)`.
    pub position: f64,
    /// Nearest high-resolution grid line, `round(position · f)`.
    pub highres_index: i64,
}

/// Locates a single step edge in a sensor profile.
///
/// Uses the centroid of the first difference `I[j] − I[j−1]`. Pixel
/// integration and centred box motion both keep the difference a sampled
/// B-spline of order at least two, whose first moment the integer samples
/// reproduce exactly.
pub fn estimate_edge_offset(profile: &[f64], f: usize) -> Result<EdgeEstimate> {
    if f == 0 {
        return Err(invalid("f must be positive"));
    }
    if profile.iter().any(|v| !v.is_finite()) {
        return Err(invalid("profile contains non-finite samples"));
    }
    let scale = profile.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let (mut mass, mut moment) = (0.0, 0.0);
    for j in 1..profile.len() {
        let d = profile[j] - profile[j - 1];
        mass += d;
        moment += j as f64 * d;
    }
    if scale == 0.0 || mass.abs() <= SIGNIFICANT * scale {
        return Err(Error::NotLocalizable("profile has no edge".into()));
    }
    let position = moment / mass;
    Ok(EdgeEstimate {
        position,
        highres_index: (position * f as f64).round() as i64,
    })
}

/// Sensor profile of a unit step at `edge` (dark before, bright after)
/// under one-pixel centred motion. Pixel `j` spans `[j, j+1)`.
pub fn simulate_edge(edge: f64, n_pixels: usize, motion: bool) -> Vec<f64> {
    // Integral of the motion-blurred step from -inf to x.
    let ramp = |x: f64| -> f64 {
        if motion {
            let u = x - (edge - 0.5);
            if u <= 0.0 {
                0.0
            } else if u >= 1.0 {
                u - 0.5
            } else {
                0.5 * u * u
            }
        } else {
            (x - edge).max(0.0)
        }
    };
    (0..n_pixels)
        .map(|j| ramp(j as f64 + 1.0) - ramp(j as f64))
        .collect()
}
