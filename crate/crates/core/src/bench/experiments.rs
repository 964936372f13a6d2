//! Desk-scale reproductions: grid deconvolution, prior comparison,
//! single-capture recovery, box zero sets and localization round trips.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bench::localize::{localize_point_source, localize_point_source_noisy, PointScene1D};
use crate::bench::{gen_char_target_with, metrics, DEFAULT_GLYPH_HEIGHT};
use crate::error::{invalid, Result};
use crate::forward::{add_noise, capture_grid, SensorSpec};
use crate::raster::{box_axis_dft, box_spectrum, interlace, Image};
use crate::solve::{quadratic, tv_deconvolve, wiener_with, SolverOptions, SolverReport};

/// Grid-capture experiment setup shared by the deconvolution comparisons.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub dims: (usize, usize),
    pub f: usize,
    pub n_chars: usize,
    pub glyph_height: usize,
    pub seed: u64,
    /// Noise added to every low-resolution capture.
    pub noise_sigma: f64,
    pub solver: SolverOptions,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            dims: (128, 128),
            f: 8,
            n_chars: 10,
            glyph_height: DEFAULT_GLYPH_HEIGHT,
            seed: 1,
            noise_sigma: 0.0,
            solver: SolverOptions::default(),
        }
    }
}

/// Target and interlaced grid data.
#[derive(Clone, Debug)]
pub struct GridData {
    pub target: Image,
    pub captures: Vec<Vec<Image>>,
    pub interlaced: Image,
}

pub fn simulate_grid(cfg: &GridConfig) -> Result<GridData> {
    let spec = SensorSpec::for_target(cfg.dims, cfg.f)?;
    let target = gen_char_target_with(cfg.dims, cfg.n_chars, cfg.seed, cfg.glyph_height)?.image;
    let mut captures = capture_grid(&target, &spec)?;
    if cfg.noise_sigma > 0.0 {
        let mut stream = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x006E_6F69_7365);
        for row in captures.iter_mut() {
            for img in row.iter_mut() {
                *img = add_noise(img, cfg.noise_sigma, stream.gen())?;
            }
        }
    }
    let interlaced = interlace(&captures, cfg.f)?;
    Ok(GridData {
        target,
        captures,
        interlaced,
    })
}

/// Wiener versus total variation on one grid capture.
#[derive(Clone, Debug)]
pub struct DeconvComparison {
    pub data: GridData,
    pub wiener: Image,
    pub tv: Image,
    pub wiener_psnr: f64,
    pub tv_psnr: f64,
    pub tv_report: SolverReport,
}

pub fn compare_wiener_tv(cfg: &GridConfig) -> Result<DeconvComparison> {
    let data = simulate_grid(cfg)?;
    let wiener = wiener_with(
        &data.interlaced,
        cfg.f,
        cfg.solver.gamma,
        cfg.solver.wiener_form,
    )?;
    let (tv, tv_report) = tv_deconvolve(&data.interlaced, cfg.f, &cfg.solver)?;
    Ok(DeconvComparison {
        wiener_psnr: metrics(&wiener, &data.target)?.psnr,
        tv_psnr: metrics(&tv, &data.target)?.psnr,
        data,
        wiener,
        tv,
        tv_report,
    })
}

/// `n` logarithmically spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo) || n == 0 {
        return Err(invalid("log grid needs 0 < lo <= hi and n >= 1"));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.log10(), hi.log10());
    Ok((0..n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect())
}

/// One point of a regularization sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaPoint {
    pub lambda: f64,
    pub psnr: f64,
}

/// Quadratic-smoothness versus TV over λ sweeps.
#[derive(Clone, Debug)]
pub struct PriorComparison {
    pub data: GridData,
    pub quadratic: Vec<LambdaPoint>,
    pub tv: Vec<LambdaPoint>,
    pub best_quadratic: Image,
    pub best_tv: Image,
}

impl PriorComparison {
    pub fn best_quadratic_psnr(&self) -> f64 {
        best(&self.quadratic).psnr
    }

    pub fn best_tv_psnr(&self) -> f64 {
        best(&self.tv).psnr
    }
}

fn best(points: &[LambdaPoint]) -> LambdaPoint {
    *points
        .iter()
        .max_by(|a, b| a.psnr.total_cmp(&b.psnr))
        .expect("non-empty sweep")
}

pub fn compare_priors(
    cfg: &GridConfig,
    quad_lambdas: &[f64],
    tv_lambdas: &[f64],
) -> Result<PriorComparison> {
    if quad_lambdas.is_empty() || tv_lambdas.is_empty() {
        return Err(invalid("lambda sweeps must be non-empty"));
    }
    let data = simulate_grid(cfg)?;
    let mut quad_pts = Vec::new();
    let mut best_q: Option<(f64, Image)> = None;
    for &lambda in quad_lambdas {
        let est = quadratic(&data.interlaced, cfg.f, lambda)?;
        let psnr = metrics(&est, &data.target)?.psnr;
        quad_pts.push(LambdaPoint { lambda, psnr });
        if !best_q.as_ref().is_some_and(|(p, _)| psnr <= *p) {
            best_q = Some((psnr, est));
        }
    }
    let mut tv_pts = Vec::new();
    let mut best_t: Option<(f64, Image)> = None;
    for &lambda in tv_lambdas {
        let (est, _) = tv_deconvolve(
            &data.interlaced,
            cfg.f,
            &cfg.solver.clone().with_lambda(lambda),
        )?;
        let psnr = metrics(&est, &data.target)?.psnr;
        tv_pts.push(LambdaPoint { lambda, psnr });
        if !best_t.as_ref().is_some_and(|(p, _)| psnr <= *p) {
            best_t = Some((psnr, est));
        }
    }
    Ok(PriorComparison {
        data,
        quadratic: quad_pts,
        tv: tv_pts,
        best_quadratic: best_q.unwrap().1,
        best_tv: best_t.unwrap().1,
    })
}

/// Frequencies `k` at which the width-`width` periodic box on an `n`-length
/// axis has `|DFT| <= eps`.
pub fn box_zero_set(n: usize, width: usize, eps: f64) -> Vec<usize> {
    box_axis_dft(n, width)
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() <= eps)
        .map(|(k, _)| k)
        .collect()
}

/// Zero sets of two box widths on a shared axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSets {
    pub n: usize,
    pub widths: (usize, usize),
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub intersection: Vec<usize>,
    /// 2D zero-bin counts of each box on an `n x n` grid.
    pub counts_2d: (usize, usize),
}

pub fn zero_sets(n: usize, widths: (usize, usize), eps: f64) -> Result<ZeroSets> {
    if widths.0 == 0 || widths.1 == 0 || widths.0 > n || widths.1 > n {
        return Err(invalid("box widths must lie in 1..=n"));
    }
    let first = box_zero_set(n, widths.0, eps);
    let second = box_zero_set(n, widths.1, eps);
    let intersection = first
        .iter()
        .copied()
        .filter(|k| second.contains(k))
        .collect();
    Ok(ZeroSets {
        n,
        widths,
        counts_2d: (
            box_spectrum(n, n, widths.0)?.zero_count(eps),
            box_spectrum(n, n, widths.1)?.zero_count(eps),
        ),
        first,
        second,
        intersection,
    })
}

/// Point-source localization trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LocalizeConfig {
    pub trials: usize,
    pub n_pixels: usize,
    pub pitch: f64,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for LocalizeConfig {
    fn default() -> Self {
        LocalizeConfig {
            trials: 100,
            n_pixels: 16,
            pitch: 1.0,
            noise_sigma: 1e-3,
            seed: 7,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalizeTrial {
    pub t0: f64,
    pub intensity: f64,
    pub t0_noiseless: f64,
    pub t0_noisy: f64,
}

impl LocalizeTrial {
    pub fn noiseless_error(&self) -> f64 {
        (self.t0_noiseless - self.t0).abs()
    }

    pub fn noisy_error(&self) -> f64 {
        (self.t0_noisy - self.t0).abs()
    }
}

/// Simulates random sources strictly inside the admissible ranges and
/// localizes each with and without noise.
pub fn localize_trials(cfg: &LocalizeConfig) -> Result<Vec<LocalizeTrial>> {
    if cfg.n_pixels < 4 {
        return Err(invalid("need at least four pixels"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.trials);
    for trial in 0..cfg.trials {
        let k = rng.gen_range(1..cfg.n_pixels - 2);
        let (lo, hi) = PointScene1D::admissible(k, cfg.pitch);
        // Keep clear of the open ends where one sample vanishes.
        let frac = rng.gen_range(1e-3..1.0 - 1e-3);
        let t0 = lo + frac * (hi - lo);
        let intensity = rng.gen_range(0.5..2.0);
        let scene = PointScene1D::new(cfg.pitch, t0, intensity)?;
        let clean = scene.capture(cfg.n_pixels)?;
        let noisy: Vec<f64> = {
            let img = Image::new(1, cfg.n_pixels, clean.clone())?;
            add_noise(
                &img,
                cfg.noise_sigma,
                cfg.seed.wrapping_add(1 + trial as u64),
            )?
            .into_data()
        };
        out.push(LocalizeTrial {
            t0,
            intensity,
            t0_noiseless: localize_point_source(&clean, cfg.pitch)?.t0,
            t0_noisy: localize_point_source_noisy(&noisy, cfg.pitch)?.t0,
        });
    }
    Ok(out)
}
