//! Exact linear primitives of the capture model. All boundaries are cyclic.

use num_complex::Complex64;

use super::{Fft2, Image, Spectrum};
use crate::error::{invalid, Result};

/// Unnormalized cyclic `f x f` window sum anchored at the output index:
/// `H[a, b] = sum_{u,v < f} J[(a + u) mod rows, (b + v) mod cols]`.
pub fn boxsum(img: &Image, f: usize) -> Result<Image> {
    if f == 0 {
        return Err(invalid("box width must be positive"));
    }
    let (n, m) = img.dims();
    // Separable: sum along columns of each row, then along rows.
    let mut horiz = Image::zeros(n, m);
    for i in 0..n {
        let row = img.row(i);
        for j in 0..m {
            let mut acc = 0.0;
            for v in 0..f {
                acc += row[(j + v) % m];
            }
            horiz[(i, j)] = acc;
        }
    }
    let mut out = Image::zeros(n, m);
    for i in 0..n {
        for u in 0..f {
            let src = horiz.row((i + u) % n).to_vec();
            for (o, s) in out.data_mut()[i * m..(i + 1) * m].iter_mut().zip(src) {
                *o += s;
            }
        }
    }
    Ok(out)
}

/// Keeps every `f`-th sample in each direction starting at `(0, 0)`.
pub fn decimate(img: &Image, f: usize) -> Result<Image> {
    let (n, m) = img.dims();
    if f == 0 || n % f != 0 || m % f != 0 {
        return Err(invalid(format!("factor {f} does not divide {n}x{m}")));
    }
    Ok(Image::from_fn(n / f, m / f, |i, j| img[(f * i, f * j)]))
}

/// Adjoint of [`decimate`]: places samples on the fine grid, zeros elsewhere.
pub fn upsample_zero(img: &Image, f: usize) -> Result<Image> {
    if f == 0 {
        return Err(invalid("factor must be positive"));
    }
    let (n, m) = img.dims();
    let mut out = Image::zeros(n * f, m * f);
    for i in 0..n {
        for j in 0..m {
            out[(f * i, f * j)] = img[(i, j)];
        }
    }
    Ok(out)
}

/// Exact 2D circular convolution `(X ⊗ K)[a] = sum_x X[a - x] K[x]` via the DFT.
pub fn cyclic_convolve(x: &Image, k: &Image) -> Result<Image> {
    x.check_same_dims(k)?;
    let fft = Fft2::new(x.rows(), x.cols());
    let xs = fft.forward(x);
    let ks = fft.forward(k);
    let prod: Vec<Complex64> = xs
        .data()
        .iter()
        .zip(ks.data())
        .map(|(a, b)| a * b)
        .collect();
    Ok(fft.inverse_real(prod))
}

/// Rearranges an `f x f` grid of captures into one image:
/// `H[k + i f, l + j f] = grid[k][l][i, j]`.
pub fn interlace(grid: &[Vec<Image>], f: usize) -> Result<Image> {
    if f == 0 {
        return Err(invalid("factor must be positive"));
    }
    if grid.len() != f || grid.iter().any(|row| row.len() != f) {
        return Err(invalid(format!(
            "expected a complete {f}x{f} grid of captures"
        )));
    }
    let (n, m) = grid[0][0].dims();
    if grid.iter().flatten().any(|img| img.dims() != (n, m)) {
        return Err(invalid("captures in the grid have inconsistent dims"));
    }
    let mut out = Image::zeros(n * f, m * f);
    for (k, row) in grid.iter().enumerate() {
        for (l, img) in row.iter().enumerate() {
            for i in 0..n {
                for j in 0..m {
                    out[(k + i * f, l + j * f)] = img[(i, j)];
                }
            }
        }
    }
    Ok(out)
}

/// Inverse of [`interlace`]: splits `H` into its `f x f` phase images.
pub fn deinterlace(h: &Image, f: usize) -> Result<Vec<Vec<Image>>> {
    let (n, m) = h.dims();
    if f == 0 || n % f != 0 || m % f != 0 {
        return Err(invalid(format!("factor {f} does not divide {n}x{m}")));
    }
    Ok((0..f)
        .map(|k| {
            (0..f)
                .map(|l| Image::from_fn(n / f, m / f, |i, j| h[(k + i * f, l + j * f)]))
                .collect()
        })
        .collect())
}

/// The `f x f` box of ones on a `rows x cols` grid with support
/// `{-(f-1)..=0}^2`, so that `cyclic_convolve(J, box) == boxsum(J, f)`.
pub fn box_kernel(rows: usize, cols: usize, f: usize) -> Result<Image> {
    if f == 0 {
        return Err(invalid("box width must be positive"));
    }
    let mut k = Image::zeros(rows, cols);
    for u in 0..f {
        for v in 0..f {
            let i = (rows - u % rows) % rows;
            let j = (cols - v % cols) % cols;
            k[(i, j)] += 1.0;
        }
    }
    Ok(k)
}

/// DFT of [`box_kernel`], evaluated in closed form per axis.
///
/// Equal to `spectrum(&box_kernel(rows, cols, f))` up to rounding; computing
/// it separably avoids FFT noise in bins that are exactly zero.
pub fn box_spectrum(rows: usize, cols: usize, f: usize) -> Result<Spectrum> {
    if f == 0 {
        return Err(invalid("box width must be positive"));
    }
    let r = box_axis_dft(rows, f);
    let c = box_axis_dft(cols, f);
    let mut data = Vec::with_capacity(rows * cols);
    for a in &r {
        for b in &c {
            data.push(a * b);
        }
    }
    Spectrum::new(rows, cols, data)
}

/// 1D DFT of the periodic width-`f` box with support `{-(f-1)..=0}`:
/// `sum_{u<f} exp(+2πi k u / n)`.
pub fn box_axis_dft(n: usize, f: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            (0..f)
                .map(|u| {
                    let ang = 2.0 * std::f64::consts::PI * ((k * u) % n) as f64 / n as f64;
                    Complex64::from_polar(1.0, ang)
                })
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::spectrum;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, m: usize, seed: u64) -> Image {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Image::from_fn(n, m, |_, _| rng.gen_range(-1.0..1.0))
    }

    // Direct nested-loop oracle for the window sum.
    fn boxsum_oracle(img: &Image, f: usize) -> Image {
        Image::from_fn(img.rows(), img.cols(), |a, b| {
            let mut s = 0.0;
            for u in 0..f {
                for v in 0..f {
                    s += img.get_cyclic((a + u) as isize, (b + v) as isize);
                }
            }
            s
        })
    }

    // O(N^4) circular convolution oracle.
    fn convolve_oracle(x: &Image, k: &Image) -> Image {
        Image::from_fn(x.rows(), x.cols(), |a, b| {
            let mut s = 0.0;
            for i in 0..x.rows() {
                for j in 0..x.cols() {
                    s += x.get_cyclic(a as isize - i as isize, b as isize - j as isize) * k[(i, j)];
                }
            }
            s
        })
    }

    #[test]
    fn boxsum_examples() {
        let j = Image::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let h = boxsum(&j, 2).unwrap();
        assert_eq!(h, Image::filled(2, 2, 10.0));
        assert_eq!(boxsum(&j, 1).unwrap(), j);
        let c = Image::filled(5, 4, 0.3);
        assert!(
            boxsum(&c, 3)
                .unwrap()
                .max_abs_diff(&Image::filled(5, 4, 2.7))
                .unwrap()
                < 1e-12
        );
        assert!(boxsum(&j, 0).is_err());
    }

    #[test]
    fn boxsum_matches_oracle_including_oversized_windows() {
        let j = random(5, 7, 3);
        for f in [1, 2, 3, 6, 9] {
            let d = boxsum(&j, f)
                .unwrap()
                .max_abs_diff(&boxsum_oracle(&j, f))
                .unwrap();
            assert!(d < 1e-12, "f={f} diff={d}");
        }
    }

    #[test]
    fn decimate_examples() {
        let x = Image::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(
            decimate(&x, 2).unwrap(),
            Image::from_rows(&[[1.0]]).unwrap()
        );
        assert_eq!(decimate(&x, 1).unwrap(), x);
        let ramp = Image::from_fn(4, 4, |i, j| (4 * i + j) as f64);
        assert_eq!(
            decimate(&ramp, 2).unwrap(),
            Image::from_rows(&[[0.0, 2.0], [8.0, 10.0]]).unwrap()
        );
        assert!(decimate(&Image::zeros(3, 4), 2).is_err());
    }

    #[test]
    fn upsample_is_decimate_adjoint() {
        let x = random(8, 6, 4);
        let y = random(4, 3, 5);
        let lhs = decimate(&x, 2).unwrap().dot(&y).unwrap();
        let rhs = x.dot(&upsample_zero(&y, 2).unwrap()).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn convolve_examples() {
        let x = random(6, 6, 6);
        let id = cyclic_convolve(&x, &Image::delta(6, 6, 0, 0)).unwrap();
        assert!(id.max_abs_diff(&x).unwrap() < 1e-12);

        let x = Image::from_rows(&[[1.0, 0.0], [0.0, 0.0]]).unwrap();
        let k = Image::from_rows(&[[0.5, 0.5], [0.0, 0.0]]).unwrap();
        let got = cyclic_convolve(&x, &k).unwrap();
        let want = convolve_oracle(&x, &k);
        assert!(got.max_abs_diff(&want).unwrap() < 1e-12);
        assert!(got.max_abs_diff(&k).unwrap() < 1e-12);

        assert!(cyclic_convolve(&Image::zeros(2, 2), &Image::zeros(2, 3)).is_err());
    }

    #[test]
    fn convolve_matches_direct_sum_and_commutes() {
        for seed in 0..4 {
            let x = random(8, 8, 10 + seed);
            let k = random(8, 8, 20 + seed);
            let xk = cyclic_convolve(&x, &k).unwrap();
            assert!(xk.max_abs_diff(&convolve_oracle(&x, &k)).unwrap() < 1e-9);
            assert!(xk.max_abs_diff(&cyclic_convolve(&k, &x).unwrap()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn boxsum_equals_convolution_with_box_kernel() {
        let j = random(16, 12, 7);
        for f in [1, 2, 4, 5] {
            let k = box_kernel(16, 12, f).unwrap();
            let d = cyclic_convolve(&j, &k)
                .unwrap()
                .max_abs_diff(&boxsum(&j, f).unwrap())
                .unwrap();
            assert!(d < 1e-9);
        }
    }

    #[test]
    fn box_spectrum_matches_fft_of_kernel() {
        let s1 = box_spectrum(12, 10, 3).unwrap();
        let s2 = spectrum(&box_kernel(12, 10, 3).unwrap());
        for (a, b) in s1.data().iter().zip(s2.data()) {
            assert!((a - b).norm() < 1e-10);
        }
        assert!((s1.get(0, 0).re - 9.0).abs() < 1e-12);
    }

    #[test]
    fn interlace_examples() {
        let one = |v: f64| Image::filled(1, 1, v);
        let grid = vec![vec![one(1.0), one(2.0)], vec![one(3.0), one(4.0)]];
        assert_eq!(
            interlace(&grid, 2).unwrap(),
            Image::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap()
        );
        let single = random(3, 3, 1);
        assert_eq!(interlace(&[vec![single.clone()]], 1).unwrap(), single);
        assert!(interlace(&[vec![one(1.0), one(2.0)], vec![one(3.0)]], 2).is_err());
        let bad = vec![vec![one(1.0), one(2.0)], vec![one(3.0), Image::zeros(2, 1)]];
        assert!(interlace(&bad, 2).is_err());
    }

    #[test]
    fn deinterlace_inverts_interlace() {
        let h = random(12, 8, 9);
        let grid = deinterlace(&h, 4).unwrap();
        assert_eq!(interlace(&grid, 4).unwrap(), h);
    }
}
