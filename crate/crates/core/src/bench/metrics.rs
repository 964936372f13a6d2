use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::raster::Image;

/// PSNR reported when the error is below `1e-6` of the peak.
pub const PSNR_CAP_DB: f64 = 120.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub rms: f64,
    /// Peak signal-to-noise ratio in dB with peak 1.
    pub psnr: f64,
}

pub fn metrics(a: &Image, b: &Image) -> Result<Metrics> {
    let diff = a.zip_map(b, |x, y| x - y)?;
    let rms = (diff.norm_sq() / diff.len() as f64).sqrt();
    let peak = 1.0;
    let psnr = if rms < 1e-6 * peak {
        PSNR_CAP_DB
    } else {
        (20.0 * (peak / rms).log10()).min(PSNR_CAP_DB)
    };
    Ok(Metrics { rms, psnr })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let a = Image::from_rows(&[[0.2, 0.4], [0.6, 0.8]]).unwrap();
        let m = metrics(&a, &a).unwrap();
        assert_eq!(m.rms, 0.0);
        assert_eq!(m.psnr, PSNR_CAP_DB);

        let m = metrics(&Image::zeros(1, 1), &Image::filled(1, 1, 1.0)).unwrap();
        assert_eq!(m.rms, 1.0);
        assert_eq!(m.psnr, 0.0);

        let b = Image::from_rows(&[[0.0, 0.4], [0.6, 1.0]]).unwrap();
        assert_eq!(metrics(&a, &b).unwrap(), metrics(&b, &a).unwrap());
        assert!((metrics(&a, &b).unwrap().rms - 0.2f64.hypot(0.2) / 2.0).abs() < 1e-12);

        assert!(metrics(&a, &Image::zeros(1, 2)).is_err());
    }
}
