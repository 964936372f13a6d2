use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::Image;
use crate::error::{invalid, Result};

/// Complex 2D DFT coefficients, row-major, DC at `(0, 0)`.
///
/// Forward transforms are unnormalized; the inverse carries `1/(rows*cols)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(invalid(format!(
                "spectrum of {rows}x{cols} cannot hold {} coefficients",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn get(&self, u: usize, v: usize) -> Complex64 {
        self.data[u * self.cols + v]
    }

    /// Sum of squared magnitudes. Parseval: equals `rows*cols` times the
    /// energy of the source image.
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Real part of the inverse transform.
    pub fn inverse(&self) -> Image {
        Fft2::new(self.rows, self.cols).inverse_real(self.data.clone())
    }

    /// Number of coefficients whose magnitude is at most `eps`.
    pub fn zero_count(&self, eps: f64) -> usize {
        self.data.iter().filter(|c| c.norm() <= eps).count()
    }
}

/// Forward 2D DFT of an image.
pub fn spectrum(img: &Image) -> Spectrum {
    Fft2::new(img.rows(), img.cols()).forward(img)
}

/// Number of DFT coefficients with magnitude `<= eps`.
pub fn zero_count(s: &Spectrum, eps: f64) -> usize {
    s.zero_count(eps)
}

/// Planned 2D transform for a fixed grid size.
///
/// Rows are transformed in place; columns go through a transpose into a
/// scratch buffer so both passes run on contiguous memory.
#[derive(Clone)]
pub struct Fft2 {
    rows: usize,
    cols: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub fn new(rows: usize, cols: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            rows,
            cols,
            row_fwd: planner.plan_fft_forward(cols),
            row_inv: planner.plan_fft_inverse(cols),
            col_fwd: planner.plan_fft_forward(rows),
            col_inv: planner.plan_fft_inverse(rows),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn forward(&self, img: &Image) -> Spectrum {
        assert_eq!(img.dims(), self.dims(), "transform size mismatch");
        let mut buf: Vec<Complex64> = img.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward_in_place(&mut buf);
        Spectrum {
            rows: self.rows,
            cols: self.cols,
            data: buf,
        }
    }

    pub fn forward_in_place(&self, buf: &mut [Complex64]) {
        self.transform(buf, &self.row_fwd, &self.col_fwd);
    }

    /// Inverse including the `1/(rows*cols)` factor.
    pub fn inverse_in_place(&self, buf: &mut [Complex64]) {
        self.transform(buf, &self.row_inv, &self.col_inv);
        let norm = 1.0 / (self.rows * self.cols) as f64;
        for c in buf.iter_mut() {
            *c *= norm;
        }
    }

    /// Inverse transform keeping the real part.
    pub fn inverse_real(&self, mut buf: Vec<Complex64>) -> Image {
        self.inverse_in_place(&mut buf);
        Image::from_raw(
            self.rows,
            self.cols,
            buf.into_iter().map(|c| c.re).collect(),
        )
    }

    pub fn inverse(&self, s: &Spectrum) -> Image {
        assert_eq!(s.dims(), self.dims(), "transform size mismatch");
        self.inverse_real(s.data.clone())
    }

    fn transform(&self, buf: &mut [Complex64], row: &Arc<dyn Fft<f64>>, col: &Arc<dyn Fft<f64>>) {
        let (n, m) = (self.rows, self.cols);
        assert_eq!(buf.len(), n * m);
        row.process(buf);
        if n == 1 {
            return;
        }
        let mut t = vec![Complex64::new(0.0, 0.0); n * m];
        transpose(buf, &mut t, n, m);
        col.process(&mut t);
        transpose(&t, buf, m, n);
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    for i in 0..rows {
        for j in 0..cols {
            dst[j * rows + i] = src[i * cols + j];
        }
    }
}
