use super::{Prior, SolverOptions};
use crate::error::Result;
use crate::forward::{ImagingOperator, SensorSpec};
use crate::motion::OccupancyMap;
use crate::raster::{boxsum, Image};

/// Anisotropic total variation with cyclic neighbours:
/// `sum |J[i,j] - J[i+1,j]| + |J[i,j] - J[i,j+1]|`.
pub fn tv_norm(img: &Image) -> f64 {
    let (n, m) = img.dims();
    let d = img.data();
    let mut acc = 0.0;
    for i in 0..n {
        let down = ((i + 1) % n) * m;
        for j in 0..m {
            let v = d[i * m + j];
            acc += (d[down + j] - v).abs() + (d[i * m + (j + 1) % m] - v).abs();
        }
    }
    acc
}

pub fn l1_norm(img: &Image) -> f64 {
    img.data().iter().map(|v| v.abs()).sum()
}

/// `||∇J||^2` with cyclic forward differences.
pub fn gradient_norm_sq(img: &Image) -> f64 {
    let (gx, gy) = forward_diff(img);
    gx.norm_sq() + gy.norm_sq()
}

pub fn prior_value(img: &Image, prior: Prior) -> f64 {
    match prior {
        Prior::L1 => l1_norm(img),
        Prior::Tv => tv_norm(img),
        Prior::Quadratic => gradient_norm_sq(img),
    }
}

/// `(J[i+1,j] - J[i,j], J[i,j+1] - J[i,j])`, cyclic.
pub(crate) fn forward_diff(img: &Image) -> (Image, Image) {
    let (n, m) = img.dims();
    let d = img.data();
    let mut gx = vec![0.0; n * m];
    let mut gy = vec![0.0; n * m];
    for i in 0..n {
        let down = ((i + 1) % n) * m;
        for j in 0..m {
            let v = d[i * m + j];
            gx[i * m + j] = d[down + j] - v;
            gy[i * m + j] = d[i * m + (j + 1) % m] - v;
        }
    }
    (Image::from_raw(n, m, gx), Image::from_raw(n, m, gy))
}

/// Adjoint of [`forward_diff`]: `Dx^T gx + Dy^T gy`.
pub(crate) fn forward_diff_adjoint(gx: &Image, gy: &Image) -> Image {
    let (n, m) = gx.dims();
    let a = gx.data();
    let b = gy.data();
    let mut out = vec![0.0; n * m];
    for i in 0..n {
        let up = ((i + n - 1) % n) * m;
        for j in 0..m {
            let left = i * m + (j + m - 1) % m;
            out[i * m + j] = a[up + j] - a[i * m + j] + b[left] - b[i * m + j];
        }
    }
    Image::from_raw(n, m, out)
}

/// `sum_k ||I_k - (J ⊗ Q_k ⊗ B)↓f||^2 + λ prior(J)`, exactly what
/// [`sparse_reconstruct`](super::sparse_reconstruct) minimizes.
pub fn objective(
    target: &Image,
    images: &[Image],
    qs: &[OccupancyMap],
    f: usize,
    opts: &SolverOptions,
) -> Result<f64> {
    let spec = SensorSpec::for_target(target.dims(), f)?;
    let op = ImagingOperator::new(qs, &spec)?;
    Ok(op.residual_sq(target, images)? + opts.lambda * prior_value(target, opts.prior))
}

/// `||H - J ⊗ B||^2 + λ prior(J)` for an interlaced measurement `H`.
pub fn objective_interlaced(
    target: &Image,
    h: &Image,
    f: usize,
    opts: &SolverOptions,
) -> Result<f64> {
    let r = boxsum(target, f)?.zip_map(h, |a, b| a - b)?;
    Ok(r.norm_sq() + opts.lambda * prior_value(target, opts.prior))
}
