use super::Trajectory;
use crate::error::{invalid, Result};
use crate::raster::Image;

/// Fraction of exposure time the negated trajectory spends on each cell of
/// the high-resolution grid. Non-negative with unit total mass.
#[derive(Clone, Debug, PartialEq)]
pub struct OccupancyMap(Image);

impl OccupancyMap {
    /// Accepts an image that is non-negative and sums to 1 within `1e-9`.
    pub fn from_image(img: Image) -> Result<Self> {
        if img.data().iter().any(|&v| v < 0.0) {
            return Err(invalid("occupancy values must be non-negative"));
        }
        let mass = img.sum();
        if (mass - 1.0).abs() > 1e-9 {
            return Err(invalid(format!("occupancy must sum to 1, got {mass}")));
        }
        Ok(Self(img))
    }

    /// Static sensor at the origin.
    pub fn delta(rows: usize, cols: usize) -> Self {
        Self(Image::delta(rows, cols, 0, 0))
    }

    /// Static sensor displaced by the integer offset `(k, l)`.
    pub fn at_offset(rows: usize, cols: usize, k: i64, l: i64) -> Self {
        let i = (-k).rem_euclid(rows as i64) as usize;
        let j = (-l).rem_euclid(cols as i64) as usize;
        Self(Image::delta(rows, cols, i, j))
    }

    pub fn image(&self) -> &Image {
        &self.0
    }

    pub fn into_image(self) -> Image {
        self.0
    }

    pub fn dims(&self) -> (usize, usize) {
        self.0.dims()
    }

    /// True when all mass sits on a single cell.
    pub fn is_delta(&self) -> bool {
        self.0.data().iter().filter(|&&v| v != 0.0).count() == 1
    }
}

/// Splats each sample's dwell weight bilinearly onto the four grid cells
/// around `-p(t)` (cyclically), then renormalizes to unit mass.
pub fn occupancy(traj: &Trajectory, grid: (usize, usize)) -> Result<OccupancyMap> {
    let (rows, cols) = grid;
    if rows == 0 || cols == 0 {
        return Err(invalid("grid must be non-empty"));
    }
    let mut q = Image::zeros(rows, cols);
    let weights = traj.dwell_weights();
    for (s, w) in traj.samples().iter().zip(weights) {
        let px = -s.x;
        let py = -s.y;
        let fx = px.floor();
        let fy = py.floor();
        let ax = px - fx;
        let ay = py - fy;
        let i0 = (fx as i64).rem_euclid(rows as i64) as usize;
        let j0 = (fy as i64).rem_euclid(cols as i64) as usize;
        let i1 = (i0 + 1) % rows;
        let j1 = (j0 + 1) % cols;
        q[(i0, j0)] += w * (1.0 - ax) * (1.0 - ay);
        q[(i1, j0)] += w * ax * (1.0 - ay);
        q[(i0, j1)] += w * (1.0 - ax) * ay;
        q[(i1, j1)] += w * ax * ay;
    }
    let mass = q.sum();
    for v in q.data_mut() {
        *v /= mass;
    }
    Ok(OccupancyMap(q))
}
