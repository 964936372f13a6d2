use super::admm::{self, OperatorFidelity};
use super::{SolverOptions, SolverReport};
use crate::error::{invalid, Result};
use crate::forward::{ImagingOperator, SensorSpec};
use crate::motion::OccupancyMap;
use crate::raster::Image;

/// Joint reconstruction from one or more motion-blurred captures:
/// `min_J sum_k ||I_k - (J ⊗ Q_k ⊗ B)↓f||^2 + λ R(J)` with `R` chosen by
/// `opts.prior`.
pub fn sparse_reconstruct(
    images: &[Image],
    qs: &[OccupancyMap],
    f: usize,
    opts: &SolverOptions,
) -> Result<(Image, SolverReport)> {
    if images.is_empty() || images.len() != qs.len() {
        return Err(invalid(format!(
            "need matching non-empty image and occupancy lists, got {} and {}",
            images.len(),
            qs.len()
        )));
    }
    let lowres = images[0].dims();
    if images.iter().any(|i| i.dims() != lowres) {
        return Err(invalid("captures have inconsistent dims"));
    }
    let spec = SensorSpec::new(f, lowres, 1.0)?;
    if qs[0].dims() != spec.highres_dims() {
        return Err(invalid(format!(
            "occupancy maps are {:?}, expected {:?} for f={f}",
            qs[0].dims(),
            spec.highres_dims()
        )));
    }
    let op = ImagingOperator::new(qs, &spec)?;
    reconstruct_with(&op, images, opts)
}

/// Same as [`sparse_reconstruct`] with a prebuilt operator.
pub fn reconstruct_with(
    op: &ImagingOperator,
    images: &[Image],
    opts: &SolverOptions,
) -> Result<(Image, SolverReport)> {
    let mut fid = OperatorFidelity::new(op, images)?;
    admm::run(&mut fid, opts)
}
