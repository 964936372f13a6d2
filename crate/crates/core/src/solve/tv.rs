use super::admm::{self, BoxFidelity};
use super::{SolverOptions, SolverReport};
use crate::error::{invalid, Result};
use crate::raster::Image;

/// Total-variation deconvolution of an interlaced image:
/// `min_J ||H - J ⊗ B||^2 + λ TV(J)`.
///
/// `opts.prior` is ignored; the regularizer is always anisotropic TV. Runs the
/// split-Bregman iteration from an all-zero start and returns the best
/// iterate seen. Hitting `max_iter` is reported through
/// [`SolverReport::converged`], not as an error.
pub fn tv_deconvolve(h: &Image, f: usize, opts: &SolverOptions) -> Result<(Image, SolverReport)> {
    let (r, c) = h.dims();
    if f == 0 || r % f != 0 || c % f != 0 {
        return Err(invalid(format!("factor {f} does not divide {r}x{c}")));
    }
    let opts = SolverOptions {
        prior: super::Prior::Tv,
        ..opts.clone()
    };
    let mut fid = BoxFidelity::new(h, f)?;
    admm::run(&mut fid, &opts)
}
