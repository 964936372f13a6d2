use num_complex::Complex64;

use super::SensorSpec;
use crate::error::{invalid, Result};
use crate::motion::OccupancyMap;
use crate::raster::{box_spectrum, decimate, upsample_zero, Fft2, Image, Spectrum};

/// The stacked linear map `J -> [(J ⊗ Q_k ⊗ B)↓f]_k` and its exact adjoint.
///
/// Each `Q_k ⊗ B` is folded into one transfer function at construction, so
/// `apply` costs one forward and `s` inverse transforms and `adjoint` costs
/// `s` forward and one inverse transform.
#[derive(Clone)]
pub struct ImagingOperator {
    spec: SensorSpec,
    fft: Fft2,
    transfer: Vec<Spectrum>,
}

impl ImagingOperator {
    pub fn new(qs: &[OccupancyMap], spec: &SensorSpec) -> Result<Self> {
        let first = qs
            .first()
            .ok_or_else(|| invalid("operator needs at least one occupancy map"))?;
        let dims = spec.highres_dims();
        if first.dims() != dims || qs.iter().any(|q| q.dims() != dims) {
            return Err(invalid(
                "occupancy maps must match the high-resolution grid",
            ));
        }
        let fft = Fft2::new(dims.0, dims.1);
        let b = box_spectrum(dims.0, dims.1, spec.f)?;
        let transfer = qs
            .iter()
            .map(|q| {
                let qh = fft.forward(q.image());
                let data = qh.data().iter().zip(b.data()).map(|(a, c)| a * c).collect();
                Spectrum::new(dims.0, dims.1, data)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            spec: *spec,
            fft,
            transfer,
        })
    }

    pub fn spec(&self) -> &SensorSpec {
        &self.spec
    }

    pub fn f(&self) -> usize {
        self.spec.f
    }

    pub fn highres_dims(&self) -> (usize, usize) {
        self.spec.highres_dims()
    }

    pub fn lowres_dims(&self) -> (usize, usize) {
        self.spec.lowres_dims
    }

    /// Number of stacked captures `s`.
    pub fn len(&self) -> usize {
        self.transfer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transfer.is_empty()
    }

    /// `DFT(Q_k ⊗ B)` for every capture.
    pub fn transfer_functions(&self) -> &[Spectrum] {
        &self.transfer
    }

    pub(crate) fn fft(&self) -> &Fft2 {
        &self.fft
    }

    pub fn apply(&self, target: &Image) -> Result<Vec<Image>> {
        self.spec.check_target(target)?;
        let jh = self.fft.forward(target);
        self.apply_spectrum(&jh)
    }

    pub(crate) fn apply_spectrum(&self, jh: &Spectrum) -> Result<Vec<Image>> {
        self.transfer
            .iter()
            .map(|k| {
                let prod: Vec<Complex64> =
                    jh.data().iter().zip(k.data()).map(|(a, b)| a * b).collect();
                decimate(&self.fft.inverse_real(prod), self.spec.f)
            })
            .collect()
    }

    /// `sum_k (Q_k ⊗ B)^T upsample(y_k)`: zero-fill, then correlate with the
    /// box and the occupancy map, accumulated in a fixed order.
    pub fn adjoint(&self, images: &[Image]) -> Result<Image> {
        let acc = self.adjoint_spectrum(images)?;
        Ok(self.fft.inverse_real(acc))
    }

    pub(crate) fn adjoint_spectrum(&self, images: &[Image]) -> Result<Vec<Complex64>> {
        if images.len() != self.transfer.len() {
            return Err(invalid(format!(
                "adjoint expects {} images, got {}",
                self.transfer.len(),
                images.len()
            )));
        }
        let (r, c) = self.highres_dims();
        let mut acc = vec![Complex64::new(0.0, 0.0); r * c];
        for (img, k) in images.iter().zip(&self.transfer) {
            if img.dims() != self.spec.lowres_dims {
                return Err(invalid("capture dims do not match the sensor"));
            }
            let up = self.fft.forward(&upsample_zero(img, self.spec.f)?);
            for ((a, u), t) in acc.iter_mut().zip(up.data()).zip(k.data()) {
                *a += u * t.conj();
            }
        }
        Ok(acc)
    }

    /// `sum_k ||y_k - A_k x||^2`.
    pub fn residual_sq(&self, target: &Image, images: &[Image]) -> Result<f64> {
        let pred = self.apply(target)?;
        if pred.len() != images.len() {
            return Err(invalid("number of images does not match the operator"));
        }
        pred.iter()
            .zip(images)
            .map(|(p, y)| {
                let d = p.zip_map(y, |a, b| a - b)?;
                Ok(d.norm_sq())
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::capture_moving;
    use crate::motion::{occupancy, traj_random_shifts, traj_vibration, VibrationParams};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Image {
        Image::from_fn(n, m, |_, _| rng.gen_range(-1.0..1.0))
    }

    fn vib_q(dims: (usize, usize), seed: u64) -> OccupancyMap {
        let p = VibrationParams {
            amp_x: 7.0 + seed as f64,
            amp_y: 5.0,
            phase_y: seed as f64,
            ..Default::default()
        };
        occupancy(&traj_vibration(&p, p.default_samples()).unwrap(), dims).unwrap()
    }

    #[test]
    fn adjoint_inner_products_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let spec = SensorSpec::for_target((32, 32), 4).unwrap();
        let qs = vec![vib_q((32, 32), 1), vib_q((32, 32), 2)];
        let op = ImagingOperator::new(&qs, &spec).unwrap();
        for _ in 0..5 {
            let x = random(32, 32, &mut rng);
            let ys: Vec<Image> = (0..2).map(|_| random(8, 8, &mut rng)).collect();
            let ax = op.apply(&x).unwrap();
            let lhs: f64 = ax.iter().zip(&ys).map(|(a, y)| a.dot(y).unwrap()).sum();
            let rhs = x.dot(&op.adjoint(&ys).unwrap()).unwrap();
            let scale = ax.iter().map(Image::norm_sq).sum::<f64>().sqrt()
                * ys.iter().map(Image::norm_sq).sum::<f64>().sqrt();
            assert!((lhs - rhs).abs() <= 1e-8 * scale);
        }
    }

    #[test]
    fn identity_when_f1_and_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let spec = SensorSpec::for_target((9, 7), 1).unwrap();
        let op = ImagingOperator::new(&[OccupancyMap::delta(9, 7)], &spec).unwrap();
        let x = random(9, 7, &mut rng);
        assert!(op.apply(&x).unwrap()[0].max_abs_diff(&x).unwrap() < 1e-12);
        assert!(op.adjoint(&[x.clone()]).unwrap().max_abs_diff(&x).unwrap() < 1e-12);
    }

    #[test]
    fn apply_matches_capture_simulator() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let spec = SensorSpec::for_target((24, 24), 3).unwrap();
        let qs = vec![
            vib_q((24, 24), 3),
            occupancy(&traj_random_shifts(50, (24, 24), 1).unwrap(), (24, 24)).unwrap(),
        ];
        let op = ImagingOperator::new(&qs, &spec).unwrap();
        let x = random(24, 24, &mut rng);
        let out = op.apply(&x).unwrap();
        for (y, q) in out.iter().zip(&qs) {
            let sim = capture_moving(&x, q, &spec).unwrap();
            assert!(y.max_abs_diff(&sim).unwrap() < 1e-10);
        }
        let zeros = op.apply(&Image::zeros(24, 24)).unwrap();
        assert!(zeros.iter().all(|z| z.data().iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn rejects_bad_input() {
        let spec = SensorSpec::for_target((8, 8), 2).unwrap();
        assert!(ImagingOperator::new(&[], &spec).is_err());
        assert!(ImagingOperator::new(&[OccupancyMap::delta(4, 4)], &spec).is_err());
        let op = ImagingOperator::new(&[OccupancyMap::delta(8, 8)], &spec).unwrap();
        assert!(op.adjoint(&[]).is_err());
        assert!(op.adjoint(&[Image::zeros(8, 8)]).is_err());
        assert!(op.apply(&Image::zeros(4, 4)).is_err());
    }
}
