use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::SensorSpec;
use crate::error::{invalid, Result};
use crate::motion::OccupancyMap;
use crate::raster::{boxsum, cyclic_convolve, decimate, Image};

/// Static capture with the sensor displaced by `(k, l)` high-resolution pixels:
/// `I[i, j] = boxsum(J, f)[k + f i, l + f j]`.
pub fn capture_static(target: &Image, offset: (i64, i64), spec: &SensorSpec) -> Result<Image> {
    spec.check_target(target)?;
    let shifted = target.roll(-offset.0 as isize, -offset.1 as isize);
    decimate(&boxsum(&shifted, spec.f)?, spec.f)
}

/// All `f^2` captures over the sub-pixel grid, indexed `[k][l]`.
pub fn capture_grid(target: &Image, spec: &SensorSpec) -> Result<Vec<Vec<Image>>> {
    let f = spec.f as i64;
    (0..f)
        .map(|k| {
            (0..f)
                .map(|l| capture_static(target, (k, l), spec))
                .collect()
        })
        .collect()
}

/// `J ⊗ Q`. A single-cell occupancy is applied as an exact cyclic shift so
/// that static and motion paths agree bit for bit.
pub fn convolve_occupancy(target: &Image, q: &OccupancyMap) -> Result<Image> {
    target.check_same_dims(q.image())?;
    if q.is_delta() {
        let qi = q.image();
        let pos = qi
            .data()
            .iter()
            .position(|&v| v != 0.0)
            .expect("delta has one cell");
        let (i, j) = (pos / qi.cols(), pos % qi.cols());
        if qi.data()[pos] == 1.0 {
            return Ok(target.roll(i as isize, j as isize));
        }
    }
    cyclic_convolve(target, q.image())
}

/// Capture under motion: `(J ⊗ Q ⊗ B)↓f`.
pub fn capture_moving(target: &Image, q: &OccupancyMap, spec: &SensorSpec) -> Result<Image> {
    spec.check_target(target)?;
    if q.dims() != target.dims() {
        return Err(invalid("occupancy map and target dims differ"));
    }
    let blurred = convolve_occupancy(target, q)?;
    decimate(&boxsum(&blurred, spec.f)?, spec.f)
}

/// Adds i.i.d. zero-mean Gaussian noise of standard deviation `sigma`.
pub fn add_noise(img: &Image, sigma: f64, seed: u64) -> Result<Image> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(invalid(format!("noise sigma must be >= 0, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(img.clone());
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| invalid(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(img.map(|v| v + normal.sample(&mut rng)))
}
