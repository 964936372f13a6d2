//! Split-Bregman / ADMM engine shared by the TV and sparse solvers.
//!
//! Minimizes `||A x - y||^2 + λ R(x)` (optionally with `x >= 0`) by splitting
//! `d = ∇x` for TV and `z = x` for ℓ1 and the non-negativity constraint. The
//! `x`-update is an exact Fourier-domain solve supplied by a [`Fidelity`].

use std::time::Instant;

use num_complex::Complex64;

use super::normal::NormalSolver;
use super::objective::{forward_diff, forward_diff_adjoint, prior_value};
use super::spectral::gradient_energy;
use super::{Prior, SolverOptions, SolverReport};
use crate::error::Result;
use crate::forward::ImagingOperator;
use crate::raster::{box_spectrum, boxsum, Fft2, Image};

/// Data term `||A x - y||^2` with a fast solver for `2 A^T A + diag(c)`.
pub(crate) trait Fidelity {
    fn dims(&self) -> (usize, usize);
    fn fft(&self) -> &Fft2;
    /// Spectrum of `2 A^T y`.
    fn rhs(&self) -> &[Complex64];
    fn prepare(&mut self, shift: &[f64]) -> Result<()>;
    fn solve(&self, buf: &mut [Complex64]);
    fn misfit(&self, x: &Image) -> Result<f64>;
    fn mean_eigenvalue(&self) -> f64;
}

/// `A = J -> J ⊗ B` on the interlaced grid; the normal matrix is diagonal.
pub(crate) struct BoxFidelity {
    h: Image,
    f: usize,
    fft: Fft2,
    gram: Vec<f64>,
    inv: Vec<f64>,
    rhs: Vec<Complex64>,
}

impl BoxFidelity {
    pub(crate) fn new(h: &Image, f: usize) -> Result<Self> {
        let (r, c) = h.dims();
        let fft = Fft2::new(r, c);
        let b = box_spectrum(r, c, f)?;
        let hh = fft.forward(h);
        let rhs = hh
            .data()
            .iter()
            .zip(b.data())
            .map(|(hv, bv)| 2.0 * bv.conj() * hv)
            .collect();
        let gram: Vec<f64> = b.data().iter().map(|bv| 2.0 * bv.norm_sqr()).collect();
        Ok(Self {
            h: h.clone(),
            f,
            inv: vec![0.0; gram.len()],
            gram,
            fft,
            rhs,
        })
    }
}

impl Fidelity for BoxFidelity {
    fn dims(&self) -> (usize, usize) {
        self.h.dims()
    }

    fn fft(&self) -> &Fft2 {
        &self.fft
    }

    fn rhs(&self) -> &[Complex64] {
        &self.rhs
    }

    fn prepare(&mut self, shift: &[f64]) -> Result<()> {
        for ((inv, g), s) in self.inv.iter_mut().zip(&self.gram).zip(shift) {
            let den = g + s;
            *inv = if den > 0.0 { 1.0 / den } else { 0.0 };
        }
        Ok(())
    }

    fn solve(&self, buf: &mut [Complex64]) {
        for (v, inv) in buf.iter_mut().zip(&self.inv) {
            *v *= inv;
        }
    }

    fn misfit(&self, x: &Image) -> Result<f64> {
        Ok(boxsum(x, self.f)?.zip_map(&self.h, |a, b| a - b)?.norm_sq())
    }

    fn mean_eigenvalue(&self) -> f64 {
        self.gram.iter().sum::<f64>() / self.gram.len() as f64
    }
}

/// Stacked decimated captures through an [`ImagingOperator`].
pub(crate) struct OperatorFidelity<'a> {
    op: &'a ImagingOperator,
    images: &'a [Image],
    normal: NormalSolver,
    rhs: Vec<Complex64>,
}

impl<'a> OperatorFidelity<'a> {
    pub(crate) fn new(op: &'a ImagingOperator, images: &'a [Image]) -> Result<Self> {
        let rhs = op
            .adjoint_spectrum(images)?
            .into_iter()
            .map(|v| 2.0 * v)
            .collect();
        Ok(Self {
            normal: NormalSolver::new(op.transfer_functions(), op.f())?,
            op,
            images,
            rhs,
        })
    }
}

impl Fidelity for OperatorFidelity<'_> {
    fn dims(&self) -> (usize, usize) {
        self.op.highres_dims()
    }

    fn fft(&self) -> &Fft2 {
        self.op.fft()
    }

    fn rhs(&self) -> &[Complex64] {
        &self.rhs
    }

    fn prepare(&mut self, shift: &[f64]) -> Result<()> {
        self.normal.factor(shift)
    }

    fn solve(&self, buf: &mut [Complex64]) {
        self.normal.solve(buf)
    }

    fn misfit(&self, x: &Image) -> Result<f64> {
        self.op.residual_sq(x, self.images)
    }

    fn mean_eigenvalue(&self) -> f64 {
        self.normal.mean_eigenvalue()
    }
}

const ADAPT_EVERY: usize = 10;
const ADAPT_RATIO: f64 = 10.0;
const ADAPT_FACTOR: f64 = 2.0;

fn soft(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

pub(crate) fn run<F: Fidelity>(fid: &mut F, opts: &SolverOptions) -> Result<(Image, SolverReport)> {
    opts.validate()?;
    let start = Instant::now();
    let (rows, cols) = fid.dims();
    let n = rows * cols;
    let lambda = opts.lambda;

    let use_d = opts.prior == Prior::Tv;
    let quad = opts.prior == Prior::Quadratic;
    let use_z = opts.prior == Prior::L1 || opts.nonneg || (!use_d && !(quad && lambda > 0.0));
    let l1 = opts.prior == Prior::L1;
    let grad = if use_d || quad {
        gradient_energy(rows, cols)
    } else {
        Vec::new()
    };

    let mut rho = opts
        .rho
        .unwrap_or_else(|| default_rho(fid.mean_eigenvalue(), lambda));
    let shift_for = |rho: f64| -> Vec<f64> {
        (0..n)
            .map(|k| {
                let mut s = 0.0;
                if use_d {
                    s += rho * grad[k];
                }
                if quad {
                    s += 2.0 * lambda * grad[k];
                }
                if use_z {
                    s += rho;
                }
                s
            })
            .collect()
    };
    fid.prepare(&shift_for(rho))?;

    let zeros = || Image::zeros(rows, cols);
    let mut x = zeros();
    let (mut dx, mut dy, mut bx, mut by) = (zeros(), zeros(), zeros(), zeros());
    let (mut z, mut bz) = (zeros(), zeros());
    let mut gx = zeros();
    let mut gy = zeros();

    let evaluate = |img: &Image, fid: &F| -> Result<f64> {
        let mut v = fid.misfit(img)?;
        if lambda > 0.0 {
            v += lambda * prior_value(img, opts.prior);
        }
        Ok(v)
    };

    let initial_objective = evaluate(&x, fid)?;
    let mut best = x.clone();
    let mut best_obj = initial_objective;
    let mut history = Vec::with_capacity(opts.max_iter.min(4096));
    let mut prev_obj = initial_objective;
    let mut converged = false;
    let mut iterations = 0;
    let mut buf = vec![Complex64::new(0.0, 0.0); n];

    for it in 1..=opts.max_iter {
        iterations = it;
        let (dx_prev, dy_prev, z_prev) = (dx.clone(), dy.clone(), z.clone());
        for _ in 0..opts.inner_iter {
            // x-update
            let mut v = zeros();
            if use_d {
                let ax = dx.zip_map(&bx, |d, b| d - b)?;
                let ay = dy.zip_map(&by, |d, b| d - b)?;
                v = forward_diff_adjoint(&ax, &ay).scale(rho);
            }
            if use_z {
                v.axpy(rho, &z)?;
                v.axpy(-rho, &bz)?;
            }
            for (dst, &s) in buf.iter_mut().zip(v.data()) {
                *dst = Complex64::new(s, 0.0);
            }
            fid.fft().forward_in_place(&mut buf);
            for (b, r) in buf.iter_mut().zip(fid.rhs()) {
                *b += r;
            }
            fid.solve(&mut buf);
            fid.fft().inverse_in_place(&mut buf);
            for (xv, b) in x.data_mut().iter_mut().zip(&buf) {
                *xv = b.re;
            }

            // split updates
            if use_d {
                (gx, gy) = forward_diff(&x);
                let t = lambda / rho;
                for ((d, g), b) in dx.data_mut().iter_mut().zip(gx.data()).zip(bx.data()) {
                    *d = soft(g + b, t);
                }
                for ((d, g), b) in dy.data_mut().iter_mut().zip(gy.data()).zip(by.data()) {
                    *d = soft(g + b, t);
                }
            }
            if use_z {
                let t = if l1 { lambda / rho } else { 0.0 };
                for ((zv, xv), b) in z.data_mut().iter_mut().zip(x.data()).zip(bz.data()) {
                    let mut v = soft(xv + b, t);
                    if opts.nonneg {
                        v = v.max(0.0);
                    }
                    *zv = v;
                }
            }
        }

        // multiplier updates and residuals
        let mut primal_sq = 0.0;
        let mut scale_sq = 0.0;
        let mut dual_vec = zeros();
        if use_d {
            let rx = gx.zip_map(&dx, |g, d| g - d)?;
            let ry = gy.zip_map(&dy, |g, d| g - d)?;
            primal_sq += rx.norm_sq() + ry.norm_sq();
            scale_sq += (gx.norm_sq() + gy.norm_sq()).max(dx.norm_sq() + dy.norm_sq());
            bx.axpy(1.0, &rx)?;
            by.axpy(1.0, &ry)?;
            let ddx = dx.zip_map(&dx_prev, |a, b| a - b)?;
            let ddy = dy.zip_map(&dy_prev, |a, b| a - b)?;
            dual_vec = forward_diff_adjoint(&ddx, &ddy);
        }
        if use_z {
            let rz = x.zip_map(&z, |a, b| a - b)?;
            primal_sq += rz.norm_sq();
            scale_sq += x.norm_sq().max(z.norm_sq());
            bz.axpy(1.0, &rz)?;
            dual_vec.axpy(1.0, &z.zip_map(&z_prev, |a, b| a - b)?)?;
        }
        let primal_rel = (primal_sq / scale_sq.max(1e-300)).sqrt();
        let mut mult = zeros();
        if use_d {
            mult = forward_diff_adjoint(&bx, &by);
        }
        if use_z {
            mult.axpy(1.0, &bz)?;
        }
        let dual_rel = dual_vec.norm() / mult.norm().max(1e-300);

        let candidate = if use_z { &z } else { &x };
        let obj = evaluate(candidate, fid)?;
        history.push(obj);
        if obj < best_obj {
            best_obj = obj;
            best = candidate.clone();
        }

        let obj_change = (prev_obj - obj).abs() / obj.abs().max(1e-300);
        prev_obj = obj;
        if obj_change < opts.tol && primal_rel < opts.tol {
            converged = true;
            break;
        }
        if obj == 0.0 && primal_sq == 0.0 {
            converged = true;
            break;
        }

        if opts.adaptive_rho && it % ADAPT_EVERY == 0 && it <= opts.max_iter / 2 {
            let factor = if primal_rel > ADAPT_RATIO * dual_rel {
                ADAPT_FACTOR
            } else if dual_rel > ADAPT_RATIO * primal_rel {
                1.0 / ADAPT_FACTOR
            } else {
                1.0
            };
            if factor != 1.0 {
                rho *= factor;
                // scaled multipliers are y / rho
                let inv = 1.0 / factor;
                bx = bx.scale(inv);
                by = by.scale(inv);
                bz = bz.scale(inv);
                fid.prepare(&shift_for(rho))?;
            }
        }
    }

    let final_residual = fid.misfit(&best)?.sqrt();
    Ok((
        best,
        SolverReport {
            iterations,
            converged,
            initial_objective,
            final_objective: best_obj,
            objective: history,
            final_residual,
            final_rho: rho,
            wall_time_secs: start.elapsed().as_secs_f64(),
        },
    ))
}

/// Starting penalty: geometric mean of the data curvature and `λ`, kept
/// within a few decades of the curvature.
fn default_rho(mean_eig: f64, lambda: f64) -> f64 {
    let eig = mean_eig.max(1e-12);
    (eig * lambda.max(eig * 1e-6)).sqrt().clamp(eig * 1e-4, eig)
}
