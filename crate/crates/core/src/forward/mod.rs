//! Capture simulators and the linear imaging operator consumed by the
//! iterative solvers.

mod capture;
mod operator;

pub use capture::{add_noise, capture_grid, capture_moving, capture_static, convolve_occupancy};
pub use operator::ImagingOperator;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::motion::OccupancyMap;
use crate::raster::Image;

/// Geometry of the physical sensor relative to the high-resolution grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensorSpec {
    /// Super-resolution factor: physical pixels are `f` virtual pixels wide.
    pub f: usize,
    /// Sensor size `(n, m)` in physical pixels.
    pub lowres_dims: (usize, usize),
    /// Physical pixel pitch. Only used to report positions in length units.
    pub pitch: f64,
}

impl SensorSpec {
    pub fn new(f: usize, lowres_dims: (usize, usize), pitch: f64) -> Result<Self> {
        if f == 0 {
            return Err(invalid("super-resolution factor must be positive"));
        }
        if lowres_dims.0 == 0 || lowres_dims.1 == 0 {
            return Err(invalid("sensor dims must be positive"));
        }
        if !(pitch.is_finite() && pitch > 0.0) {
            return Err(invalid("pixel pitch must be positive"));
        }
        Ok(Self {
            f,
            lowres_dims,
            pitch,
        })
    }

    /// Sensor matching a high-resolution target of the given dims, unit pitch.
    pub fn for_target(target_dims: (usize, usize), f: usize) -> Result<Self> {
        let (r, c) = target_dims;
        if f == 0 || r % f != 0 || c % f != 0 {
            return Err(invalid(format!(
                "factor {f} does not divide target {r}x{c}"
            )));
        }
        Self::new(f, (r / f, c / f), 1.0)
    }

    pub fn highres_dims(&self) -> (usize, usize) {
        (self.f * self.lowres_dims.0, self.f * self.lowres_dims.1)
    }

    pub(crate) fn check_target(&self, img: &Image) -> Result<()> {
        if img.dims() != self.highres_dims() {
            let (r, c) = self.highres_dims();
            return Err(invalid(format!(
                "target is {}x{}, sensor expects {r}x{c} (f={})",
                img.rows(),
                img.cols(),
                self.f
            )));
        }
        Ok(())
    }

    /// Occupancy maps of the `f x f` static grid, ordered `(k, l)` row-major
    /// to match [`capture_grid`].
    pub fn grid_occupancies(&self) -> Vec<OccupancyMap> {
        let (r, c) = self.highres_dims();
        let f = self.f as i64;
        (0..f)
            .flat_map(|k| (0..f).map(move |l| OccupancyMap::at_offset(r, c, k, l)))
            .collect()
    }
}
