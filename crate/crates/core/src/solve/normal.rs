//! Fourier-domain solves of the regularized normal equations
//! `(2 A^T A + diag(c)) x = r`.
//!
//! Decimation by `f` folds the spectrum: a capture only sees, for each
//! low-resolution frequency, the sum of the `f^2` high-resolution
//! frequencies that alias onto it. `A^T A` therefore never couples
//! frequencies from different alias groups, and each group of `f^2` bins is
//! an independent Hermitian positive definite system.

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::raster::Spectrum;

/// Alias-group structure of a `rows x cols` grid decimated by `f`.
#[derive(Clone, Debug)]
struct Groups {
    size: usize,
    /// `count x size` flat spectrum indices.
    members: Vec<usize>,
}

impl Groups {
    fn new(rows: usize, cols: usize, f: usize) -> Self {
        let (n, m) = (rows / f, cols / f);
        let mut members = Vec::with_capacity(rows * cols);
        for p in 0..n {
            for q in 0..m {
                for a in 0..f {
                    for b in 0..f {
                        members.push((p + a * n) * cols + q + b * m);
                    }
                }
            }
        }
        Self {
            size: f * f,
            members,
        }
    }

    fn count(&self) -> usize {
        self.members.len() / self.size
    }

    fn group(&self, g: usize) -> &[usize] {
        &self.members[g * self.size..(g + 1) * self.size]
    }
}

/// Cached Gram blocks of `2 A^T A` and their factorization for a given
/// diagonal shift.
#[derive(Clone, Debug)]
pub(crate) struct NormalSolver {
    groups: Groups,
    gram: Vec<Complex64>,
    chol: Vec<Complex64>,
    diag_mean: f64,
}

impl NormalSolver {
    /// `transfer[k]` is `DFT(Q_k ⊗ B)` on the high-resolution grid.
    pub(crate) fn new(transfer: &[Spectrum], f: usize) -> Result<Self> {
        let (rows, cols) = transfer
            .first()
            .ok_or_else(|| invalid("no transfer functions"))?
            .dims();
        if rows % f != 0 || cols % f != 0 {
            return Err(invalid("factor does not divide the grid"));
        }
        let groups = Groups::new(rows, cols, f);
        let d = groups.size;
        let weight = 2.0 / (f * f) as f64;
        let mut gram = vec![Complex64::new(0.0, 0.0); groups.count() * d * d];
        let mut diag_sum = 0.0;
        let mut local = vec![Complex64::new(0.0, 0.0); d];
        for g in 0..groups.count() {
            let idx = groups.group(g);
            let block = &mut gram[g * d * d..(g + 1) * d * d];
            for t in transfer {
                for (l, &i) in local.iter_mut().zip(idx) {
                    *l = t.data()[i];
                }
                // M[a][b] += w conj(K[a]) K[b]
                for a in 0..d {
                    let ka = local[a].conj() * weight;
                    for b in 0..d {
                        block[a * d + b] += ka * local[b];
                    }
                }
            }
            diag_sum += (0..d).map(|a| block[a * d + a].re).sum::<f64>();
        }
        let n = groups.members.len();
        Ok(Self {
            chol: gram.clone(),
            gram,
            groups,
            diag_mean: diag_sum / n as f64,
        })
    }

    /// Average eigenvalue of `2 A^T A`.
    pub(crate) fn mean_eigenvalue(&self) -> f64 {
        self.diag_mean
    }

    /// Factorizes `2 A^T A + diag(shift)`; `shift` is indexed like the spectrum.
    pub(crate) fn factor(&mut self, shift: &[f64]) -> Result<()> {
        let d = self.groups.size;
        for g in 0..self.groups.count() {
            let idx = self.groups.group(g);
            let block = &mut self.chol[g * d * d..(g + 1) * d * d];
            block.copy_from_slice(&self.gram[g * d * d..(g + 1) * d * d]);
            for (a, &i) in idx.iter().enumerate() {
                block[a * d + a] += shift[i];
            }
            cholesky_in_place(block, d)?;
        }
        Ok(())
    }

    /// Solves in place using the last factorization.
    pub(crate) fn solve(&self, rhs: &mut [Complex64]) {
        let d = self.groups.size;
        let mut local = vec![Complex64::new(0.0, 0.0); d];
        for g in 0..self.groups.count() {
            let idx = self.groups.group(g);
            for (l, &i) in local.iter_mut().zip(idx) {
                *l = rhs[i];
            }
            cholesky_solve(&self.chol[g * d * d..(g + 1) * d * d], d, &mut local);
            for (l, &i) in local.iter().zip(idx) {
                rhs[i] = *l;
            }
        }
    }
}

/// Lower Cholesky factor `M = L L^H`, written over the lower triangle.
fn cholesky_in_place(m: &mut [Complex64], d: usize) -> Result<()> {
    for j in 0..d {
        let mut pivot = m[j * d + j].re;
        for k in 0..j {
            pivot -= m[j * d + k].norm_sqr();
        }
        if !(pivot > 0.0) {
            return Err(invalid("normal equations are not positive definite"));
        }
        let ljj = pivot.sqrt();
        m[j * d + j] = Complex64::new(ljj, 0.0);
        for i in j + 1..d {
            let mut s = m[i * d + j];
            for k in 0..j {
                s -= m[i * d + k] * m[j * d + k].conj();
            }
            m[i * d + j] = s / ljj;
        }
    }
    Ok(())
}

fn cholesky_solve(l: &[Complex64], d: usize, b: &mut [Complex64]) {
    for i in 0..d {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * d + k] * b[k];
        }
        b[i] = s / l[i * d + i].re;
    }
    for i in (0..d).rev() {
        let mut s = b[i];
        for k in i + 1..d {
            s -= l[k * d + i].conj() * b[k];
        }
        b[i] = s / l[i * d + i].re;
    }
}
