use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{CaptureMode, ExperimentConfig, TargetKind, TrajectoryKind};
use super::manifest::{CaptureEntry, Manifest, TrajectoryEntry};
use crate::bench::{
    estimate_edge_offset, gen_bar_target, gen_char_target_with, localize_point_source,
    localize_point_source_noisy, metrics, zero_sets, EdgeEstimate, Localization, ZeroSets,
};
use crate::error::{Error, Result};
use crate::forward::{add_noise, capture_grid, capture_moving, SensorSpec};
use crate::motion::{
    occupancy, traj_random_shifts, traj_random_walk, traj_scan, traj_vibration,
    write_trajectory_csv, OccupancyMap, Trajectory,
};
use crate::raster::io::{read_pgm, read_raw, write_pgm16, write_raw};
use crate::raster::{box_spectrum, interlace, spectrum, Image};
use crate::solve::{quadratic, sparse_reconstruct, tv_deconvolve, wiener_with, SolverReport};

/// Reads `.pgm` files as PGM and everything else as raw matrices.
pub fn read_image(path: &Path) -> Result<Image> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("pgm") => read_pgm(path),
        _ => read_raw(path),
    }
}

/// Writes `stem.raw` and a `stem.pgm` preview scaled by `1/scale`.
fn write_pair(dir: &Path, stem: &str, img: &Image, scale: f64) -> Result<String> {
    let raw = format!("{stem}.raw");
    write_raw(dir.join(&raw), img)?;
    write_pgm16(dir.join(format!("{stem}.pgm")), &img.scale(1.0 / scale))?;
    Ok(raw)
}

pub fn build_trajectory(cfg: &ExperimentConfig) -> Result<Trajectory> {
    let t = &cfg.capture.trajectory;
    match cfg.capture.mode {
        CaptureMode::Scan => traj_scan(t.velocity),
        CaptureMode::Grid => Ok(Trajectory::stationary(0.0, 0.0)),
        CaptureMode::Moving => match t.kind {
            TrajectoryKind::Static => Ok(Trajectory::stationary(0.0, 0.0)),
            TrajectoryKind::Vibration => traj_vibration(
                &t.vibration,
                t.n_samples.unwrap_or_else(|| t.vibration.default_samples()),
            ),
            TrajectoryKind::Shifts => {
                traj_random_shifts(t.count, cfg.target.dims, cfg.stream_seed(1))
            }
            TrajectoryKind::Walk => traj_random_walk(t.count, cfg.target.dims, cfg.stream_seed(1)),
        },
    }
}

pub fn build_target(cfg: &ExperimentConfig) -> Result<Image> {
    let t = &cfg.target;
    match t.kind {
        TargetKind::Chars => {
            Ok(gen_char_target_with(t.dims, t.n_chars, cfg.target_seed(), t.glyph_height)?.image)
        }
        TargetKind::Bars => gen_bar_target(t.dims, &t.bar_scales),
    }
}

/// Simulates the configured capture and writes target, captures,
/// occupancy, trajectory and a manifest into `cfg.output_dir`.
pub fn cmd_simulate(cfg: &ExperimentConfig) -> Result<PathBuf> {
    cfg.validate()?;
    let dir = &cfg.output_dir;
    fs::create_dir_all(dir)?;
    fs::write(dir.join("config.json"), cfg.to_json() + "\n")?;
    let spec = SensorSpec::for_target(cfg.target.dims, cfg.capture.f)?;
    let f = spec.f;
    let target = build_target(cfg)?;
    let target_file = write_pair(dir, "target", &target, 1.0)?;
    let noise_seed = cfg.stream_seed(2);
    let sigma = cfg.capture.noise_sigma;
    let gain = (f * f) as f64;

    let mut captures = Vec::new();
    let (mut interlaced, mut occ, mut traj) = (None, None, None);
    match cfg.capture.mode {
        CaptureMode::Grid => {
            let mut grid = capture_grid(&target, &spec)?;
            for (k, row) in grid.iter_mut().enumerate() {
                for (l, img) in row.iter_mut().enumerate() {
                    *img = add_noise(img, sigma, noise_seed.wrapping_add((k * f + l) as u64))?;
                    let file = write_pair(dir, &format!("capture_{k}_{l}"), img, gain)?;
                    captures.push(CaptureEntry {
                        file,
                        offset: Some((k as i64, l as i64)),
                    });
                }
            }
            let h = interlace(&grid, f)?;
            interlaced = Some(write_pair(dir, "interlaced", &h, gain)?);
        }
        CaptureMode::Moving | CaptureMode::Scan => {
            let t = build_trajectory(cfg)?;
            let q = occupancy(&t, cfg.target.dims)?;
            let img = add_noise(&capture_moving(&target, &q, &spec)?, sigma, noise_seed)?;
            captures.push(CaptureEntry {
                file: write_pair(dir, "capture", &img, gain)?,
                offset: None,
            });
            let qmax = q.image().max();
            occ = Some(write_pair(dir, "occupancy", q.image(), qmax)?);
            write_trajectory_csv(dir.join("trajectory.csv"), &t)?;
            traj = Some(TrajectoryEntry {
                file: "trajectory.csv".into(),
                dwell: t.dwell(),
            });
        }
    }
    Manifest {
        mode: cfg.capture.mode,
        f,
        highres_dims: spec.highres_dims(),
        lowres_dims: spec.lowres_dims,
        seed: cfg.seed,
        target_seed: cfg.target_seed(),
        noise_seed,
        target: target_file,
        captures,
        interlaced,
        occupancy: occ,
        trajectory: traj,
        config: cfg.clone(),
    }
    .write(dir)
}

/// Rebuilds the interlaced image from a grid manifest's captures.
pub fn cmd_interlace(manifest_path: &Path, out: Option<&Path>) -> Result<PathBuf> {
    let m = Manifest::read(manifest_path)?;
    let dir = base_dir(manifest_path);
    if m.mode != CaptureMode::Grid {
        return Err(Error::Config("interlace needs a grid-mode manifest".into()));
    }
    let f = m.f;
    let mut grid = vec![vec![Image::zeros(1, 1); f]; f];
    for c in &m.captures {
        let (k, l) = c
            .offset
            .ok_or_else(|| Error::Format("grid capture without offset".into()))?;
        if k < 0 || l < 0 || k as usize >= f || l as usize >= f {
            return Err(Error::Format(format!("offset ({k}, {l}) outside the grid")));
        }
        grid[k as usize][l as usize] = read_image(&dir.join(&c.file))?;
    }
    let h = interlace(&grid, f)?;
    let path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| dir.join("interlaced.raw"));
    write_raw(&path, &h)?;
    Ok(path)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Wiener,
    Quadratic,
    Tv,
    /// Iterative reconstruction from the raw captures with `solver.prior`.
    Sparse,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Wiener => "wiener",
            Method::Quadratic => "quadratic",
            Method::Tv => "tv",
            Method::Sparse => "sparse",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReconstructOutput {
    pub estimate: Image,
    pub report: Option<SolverReport>,
    pub rms: f64,
    pub psnr: f64,
}

/// Reconstructs from a manifest. `cfg` supplies solver settings, usually
/// the manifest's own config with overrides applied.
pub fn cmd_reconstruct(
    manifest_path: &Path,
    method: Method,
    cfg: &ExperimentConfig,
    out_dir: Option<&Path>,
) -> Result<ReconstructOutput> {
    let m = Manifest::read(manifest_path)?;
    let dir = base_dir(manifest_path);
    let out = out_dir
        .map(Path::to_path_buf)
        .unwrap_or_else(|| dir.clone());
    fs::create_dir_all(&out)?;
    let opts = &cfg.solver;
    opts.validate()?;
    let (estimate, report) = match method {
        Method::Wiener | Method::Quadratic | Method::Tv => {
            let file = match (m.mode, &m.interlaced) {
                (CaptureMode::Grid, Some(file)) => file,
                _ => {
                    return Err(Error::Config(format!(
                        "{} needs a grid manifest with an interlaced image; this one is {:?}",
                        method.name(),
                        m.mode
                    )))
                }
            };
            let h = read_image(&dir.join(file))?;
            match method {
                Method::Wiener => (wiener_with(&h, m.f, opts.gamma, opts.wiener_form)?, None),
                Method::Quadratic => (quadratic(&h, m.f, opts.lambda)?, None),
                _ => {
                    let (x, r) = tv_deconvolve(&h, m.f, opts)?;
                    (x, Some(r))
                }
            }
        }
        Method::Sparse => {
            let images = m
                .captures
                .iter()
                .map(|c| read_image(&dir.join(&c.file)))
                .collect::<Result<Vec<_>>>()?;
            let qs = match m.mode {
                CaptureMode::Grid => {
                    let spec = SensorSpec::new(m.f, m.lowres_dims, 1.0)?;
                    m.captures
                        .iter()
                        .map(|c| {
                            let (k, l) = c.offset.ok_or_else(|| {
                                Error::Format("grid capture without offset".into())
                            })?;
                            let (r, cc) = spec.highres_dims();
                            Ok(OccupancyMap::at_offset(r, cc, k, l))
                        })
                        .collect::<Result<Vec<_>>>()?
                }
                _ => {
                    let file = m
                        .occupancy
                        .as_ref()
                        .ok_or_else(|| Error::Format("moving manifest without occupancy".into()))?;
                    vec![OccupancyMap::from_image(read_image(&dir.join(file))?)?]
                }
            };
            let (x, r) = sparse_reconstruct(&images, &qs, m.f, opts)?;
            (x, Some(r))
        }
    };
    let name = method.name();
    write_pair(&out, &format!("reconstruction_{name}"), &estimate, 1.0)?;
    if let Some(r) = &report {
        let text = serde_json::to_string_pretty(r).expect("report serializes");
        fs::write(out.join(format!("report_{name}.json")), text + "\n")?;
    }
    let (mut rms, mut psnr) = (f64::NAN, f64::NAN);
    let target_path = dir.join(&m.target);
    if target_path.exists() {
        let mm = metrics(&estimate, &read_image(&target_path)?)?;
        rms = mm.rms;
        psnr = mm.psnr;
        fs::write(
            out.join(format!("metrics_{name}.csv")),
            format!("method,rms,psnr\n{name},{rms},{psnr}\n"),
        )?;
    }
    Ok(ReconstructOutput {
        estimate,
        report,
        rms,
        psnr,
    })
}

fn base_dir(manifest_path: &Path) -> PathBuf {
    manifest_path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."))
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub dims: (usize, usize),
    pub f: Option<usize>,
    pub eps: f64,
    pub zero_bins: usize,
    pub axis: Option<ZeroSets>,
}

/// Zero-bin count of a periodic box spectrum, or of an image file's
/// spectrum when `input` is given.
pub fn cmd_spectrum(
    n: usize,
    f: usize,
    eps: f64,
    input: Option<&Path>,
    axis: Option<(usize, (usize, usize))>,
) -> Result<SpectrumReport> {
    let (dims, f_used, count) = match input {
        Some(p) => {
            let img = read_image(p)?;
            (img.dims(), None, spectrum(&img).zero_count(eps))
        }
        None => ((n, n), Some(f), box_spectrum(n, n, f)?.zero_count(eps)),
    };
    let axis = axis.map(|(len, w)| zero_sets(len, w, eps)).transpose()?;
    Ok(SpectrumReport {
        dims,
        f: f_used,
        eps,
        zero_bins: count,
        axis,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum LocalizeReport {
    Point(Localization),
    Edge(EdgeEstimate),
}

/// Parses `0,0.25,0.75` or whitespace separated samples.
pub fn parse_profile(text: &str) -> Result<Vec<f64>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::Format(format!("bad profile sample `{s}`")))
        })
        .collect()
}

pub fn cmd_localize(
    profile: &[f64],
    pitch: f64,
    noisy: bool,
    edge_f: Option<usize>,
) -> Result<LocalizeReport> {
    match edge_f {
        Some(f) => Ok(LocalizeReport::Edge(estimate_edge_offset(profile, f)?)),
        None if noisy => Ok(LocalizeReport::Point(localize_point_source_noisy(
            profile, pitch,
        )?)),
        None => Ok(LocalizeReport::Point(localize_point_source(
            profile, pitch,
        )?)),
    }
}
