//! Closed-form Fourier-domain reconstructions from an interlaced image.

use num_complex::Complex64;

use super::WienerForm;
use crate::error::{invalid, Result};
use crate::raster::{box_spectrum, Fft2, Image};

/// Magnitude below which a box coefficient counts as a sinc zero.
pub const ZERO_BIN: f64 = 1e-12;

/// `|DFT(Dx)|^2 + |DFT(Dy)|^2` for cyclic forward differences
/// `Dx J = J[i+1, j] - J[i, j]`, `Dy J = J[i, j+1] - J[i, j]`.
pub fn gradient_energy(rows: usize, cols: usize) -> Vec<f64> {
    let ax = axis_diff_energy(rows);
    let ay = axis_diff_energy(cols);
    let mut out = Vec::with_capacity(rows * cols);
    for a in &ax {
        for b in &ay {
            out.push(a + b);
        }
    }
    out
}

// |exp(2πik/n) - 1|^2 = 4 sin^2(πk/n)
fn axis_diff_energy(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let s = (std::f64::consts::PI * k as f64 / n as f64).sin();
            4.0 * s * s
        })
        .collect()
}

fn check(h: &Image, f: usize) -> Result<()> {
    if f == 0 {
        return Err(invalid("factor must be positive"));
    }
    let (r, c) = h.dims();
    if r % f != 0 || c % f != 0 {
        return Err(invalid(format!("factor {f} does not divide {r}x{c}")));
    }
    Ok(())
}

/// Wiener deconvolution of `H = J ⊗ B` in the stabilized form
/// `conj(B) H / (|B|^2 + γ)`. With `γ = 0`, bins where `|B| <= 1e-12` are set
/// to zero (minimum-norm solution).
pub fn wiener(h: &Image, f: usize, gamma: f64) -> Result<Image> {
    wiener_with(h, f, gamma, WienerForm::Stabilized)
}

/// Wiener deconvolution with an explicit choice of denominator.
pub fn wiener_with(h: &Image, f: usize, gamma: f64, form: WienerForm) -> Result<Image> {
    check(h, f)?;
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(invalid("gamma must be >= 0"));
    }
    let (r, c) = h.dims();
    let fft = Fft2::new(r, c);
    let b = box_spectrum(r, c, f)?;
    let hh = fft.forward(h);
    let out: Vec<Complex64> = hh
        .data()
        .iter()
        .zip(b.data())
        .map(|(&hv, &bv)| match form {
            WienerForm::Stabilized => {
                let den = bv.norm_sqr() + gamma;
                if bv.norm() <= ZERO_BIN && gamma == 0.0 || den == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    bv.conj() * hv / den
                }
            }
            WienerForm::Literal => {
                let den = bv + gamma;
                if den.norm() <= ZERO_BIN {
                    Complex64::new(0.0, 0.0)
                } else {
                    hv / den
                }
            }
        })
        .collect();
    Ok(fft.inverse_real(out))
}

/// Closed-form minimizer of `||H - J ⊗ B||^2 + λ ||∇J||^2`:
/// `conj(B) H / (|B|^2 + λ |D|^2)`. `λ = 0` falls back to [`wiener`] with
/// `γ = 0`.
pub fn quadratic(h: &Image, f: usize, lambda: f64) -> Result<Image> {
    check(h, f)?;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(invalid("lambda must be >= 0"));
    }
    if lambda == 0.0 {
        return wiener(h, f, 0.0);
    }
    let (r, c) = h.dims();
    let fft = Fft2::new(r, c);
    let b = box_spectrum(r, c, f)?;
    let grad = gradient_energy(r, c);
    let hh = fft.forward(h);
    let out: Vec<Complex64> = hh
        .data()
        .iter()
        .zip(b.data())
        .zip(&grad)
        .map(|((&hv, &bv), &g)| {
            let den = bv.norm_sqr() + lambda * g;
            if den <= 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                bv.conj() * hv / den
            }
        })
        .collect();
    Ok(fft.inverse_real(out))
}
