//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use blursr::bench::{localize_trials, LocalizeConfig};
use blursr::cli::{cmd_experiment, ExperimentConfig};
use blursr::forward::{capture_grid, capture_moving, capture_static, ImagingOperator, SensorSpec};
use blursr::motion::{occupancy, traj_random_walk, OccupancyMap};
use blursr::raster::{boxsum, interlace, Image};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn random_image(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Image {
    Image::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0))
}

fn interlacing_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let j = random_image(&mut rng, 64, 64);
    let mut worst: f64 = 0.0;
    for f in [2, 4, 8] {
        let spec = SensorSpec::for_target((64, 64), f).unwrap();
        let h = interlace(&capture_grid(&j, &spec).unwrap(), f).unwrap();
        worst = worst.max(h.max_abs_diff(&boxsum(&j, f).unwrap()).unwrap());
    }
    outcome(
        worst <= 1e-12,
        format!("max abs diff {worst:.1e} (tol 1e-12)"),
    )
}

fn adjoint_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let dims = (64, 64);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for f in [2, 4, 8] {
        let spec = SensorSpec::for_target(dims, f).unwrap();
        let low = spec.lowres_dims;
        for s in [1, 4] {
            for _ in 0..20 {
                let qs: Vec<OccupancyMap> = (0..s)
                    .map(|_| {
                        let t = traj_random_walk(rng.gen_range(1..60), dims, rng.gen()).unwrap();
                        occupancy(&t, dims).unwrap()
                    })
                    .collect();
                let op = ImagingOperator::new(&qs, &spec).unwrap();
                let x = random_image(&mut rng, dims.0, dims.1);
                let ys: Vec<Image> = (0..s)
                    .map(|_| random_image(&mut rng, low.0, low.1))
                    .collect();
                let ax = op.apply(&x).unwrap();
                let lhs: f64 = ax.iter().zip(&ys).map(|(a, y)| a.dot(y).unwrap()).sum();
                let rhs = x.dot(&op.adjoint(&ys).unwrap()).unwrap();
                let norm_ax = ax.iter().map(Image::norm_sq).sum::<f64>().sqrt();
                let norm_y = ys.iter().map(Image::norm_sq).sum::<f64>().sqrt();
                worst = worst.max((lhs - rhs).abs() / (norm_ax * norm_y));
                cases += 1;
            }
        }
    }
    outcome(
        worst <= 1e-8,
        format!("{cases} cases, worst relative mismatch {worst:.1e} (tol 1e-8)"),
    )
}

/// Reads a CSV with a header into rows of named fields.
fn read_csv(path: &Path) -> Vec<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    lines
        .map(|l| {
            header
                .iter()
                .cloned()
                .zip(l.split(',').map(String::from))
                .collect()
        })
        .collect()
}

fn num(row: &BTreeMap<String, String>, key: &str) -> f64 {
    row[key].parse().unwrap()
}

fn grid_deconvolution(dir: &Path) -> Outcome {
    let rows = read_csv(&dir.join("metrics.csv"));
    let psnr = |m: &str| num(rows.iter().find(|r| r["method"] == m).unwrap(), "psnr");
    let (tv, wiener) = (psnr("tv"), psnr("wiener"));
    outcome(
        tv >= 40.0 && tv > wiener,
        format!("TV {tv:.2} dB (min 40), Wiener {wiener:.2} dB"),
    )
}

fn prior_comparison(dir: &Path) -> Outcome {
    let rows = read_csv(&dir.join("lambda_sweep.csv"));
    let best = |p: &str| {
        let pts: Vec<f64> = rows
            .iter()
            .filter(|r| r["prior"] == p)
            .map(|r| num(r, "psnr"))
            .collect();
        (pts.len(), pts.into_iter().fold(f64::NEG_INFINITY, f64::max))
    };
    let ((nq, q), (nt, t)) = (best("quadratic"), best("tv"));
    outcome(
        nq == 7 && nt == 7 && q < t,
        format!("best quadratic {q:.2} dB vs best TV {t:.2} dB over {nq}/{nt} lambdas"),
    )
}

fn sparse_recovery(cell_dir: &Path, sweep_dir: &Path, sweep_time: Duration) -> Outcome {
    let rows = read_csv(&cell_dir.join("rms.csv"));
    let mean = rows.iter().map(|r| num(r, "rms")).sum::<f64>() / rows.len() as f64;
    let summary = read_csv(&sweep_dir.join("summary_rms.csv"));
    let mut monotone = true;
    let mut trend = Vec::new();
    for fam in ["vibration", "shifts", "walk"] {
        let mut pts: Vec<(usize, f64)> = summary
            .iter()
            .filter(|r| r["family"] == fam)
            .map(|r| (r["n_chars"].parse().unwrap(), num(r, "mean_rms")))
            .collect();
        pts.sort_by_key(|p| p.0);
        let counts: Vec<usize> = pts.iter().map(|p| p.0).collect();
        monotone &= counts == [5, 10, 20, 40, 80] && pts.windows(2).all(|w| w[1].1 >= w[0].1);
        trend.push(format!(
            "{fam} {:.4}->{:.4}",
            pts[0].1,
            pts[pts.len() - 1].1
        ));
    }
    outcome(
        rows.len() == 5 && mean <= 0.02 && monotone && sweep_time <= Duration::from_secs(3600),
        format!(
            "vibration 10 chars mean RMS {mean:.5} over {} seeds (max 0.02); monotone {monotone} [{}]",
            rows.len(),
            trend.join(", ")
        ),
    )
}

fn point_localization() -> Outcome {
    let cfg = LocalizeConfig::default();
    let trials = localize_trials(&cfg).unwrap();
    let clean = trials
        .iter()
        .map(|t| t.noiseless_error())
        .fold(0.0, f64::max)
        / cfg.pitch;
    let noisy = trials.iter().map(|t| t.noisy_error()).fold(0.0, f64::max) / cfg.pitch;
    outcome(
        trials.len() == 100 && clean <= 1e-6 && noisy <= 0.05,
        format!(
            "{} sources: max error {clean:.1e} (tol 1e-6), noisy {noisy:.1e} (tol 0.05)",
            trials.len()
        ),
    )
}

/// Direct DFT of a width-`w` periodic box on an `n`-length axis.
fn axis_dft(n: usize, w: usize) -> Vec<Complex64> {
    let tau = std::f64::consts::TAU;
    (0..n)
        .map(|k| {
            (0..w)
                .map(|u| Complex64::from_polar(1.0, -tau * (k * u) as f64 / n as f64))
                .sum()
        })
        .collect()
}

fn box_spectrum_zeros() -> Outcome {
    let (n, w) = (128, 8);
    let tau = std::f64::consts::TAU;
    let mut zeros = 0;
    for k in 0..n {
        for l in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for u in 0..w {
                for v in 0..w {
                    let phase = -tau * ((k * u + l * v) % n) as f64 / n as f64;
                    s += Complex64::from_polar(1.0, phase);
                }
            }
            if s.norm() <= 1e-9 {
                zeros += 1;
            }
        }
    }
    let zero_set = |w| -> Vec<usize> {
        axis_dft(28, w)
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm() <= 1e-9)
            .map(|(k, _)| k)
            .collect()
    };
    let (z4, z7) = (zero_set(4), zero_set(7));
    let shared = z4.iter().filter(|k| z7.contains(k)).count();
    // The library's own count must agree with the direct evaluation.
    let lib = blursr::raster::box_spectrum(n, n, w)
        .unwrap()
        .zero_count(1e-9);
    outcome(
        zeros == 1743 && lib == 1743 && shared == 0 && !z4.is_empty() && !z7.is_empty(),
        format!("{zeros} zero bins (library {lib}, expected 1743); width 4 zeros {z4:?}, width 7 zeros {z7:?}, shared {shared}"),
    )
}

fn static_motion_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut identical = 0;
    for _ in 0..50 {
        let f = [1, 2, 4, 8][rng.gen_range(0..4)];
        let (r, c) = (f * rng.gen_range(1..9), f * rng.gen_range(1..9));
        let spec = SensorSpec::for_target((r, c), f).unwrap();
        let j = random_image(&mut rng, r, c);
        let (k, l) = (rng.gen_range(-20..20), rng.gen_range(-20..20));
        let q = OccupancyMap::at_offset(r, c, k, l);
        let a = capture_moving(&j, &q, &spec).unwrap();
        let b = capture_static(&j, (k, l), &spec).unwrap();
        let same = a
            .data()
            .iter()
            .zip(b.data())
            .all(|(x, y)| x.to_bits() == y.to_bits());
        identical += same as usize;
    }
    outcome(identical == 50, format!("{identical}/50 bit-identical"))
}

/// Every `.csv` and `.raw` file under `dir`, by name.
fn artifacts(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        let ext = p.extension().and_then(|e| e.to_str()).unwrap_or("");
        if ext == "csv" || ext == "raw" {
            out.insert(
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            );
        }
    }
    out
}

fn run_experiment(root: &Path, name: &str, run: usize) -> (PathBuf, Duration) {
    let dir = root.join(format!("{name}_{run}"));
    let mut cfg = ExperimentConfig::preset(name);
    cfg.output_dir = dir.clone();
    let start = Instant::now();
    let summary = cmd_experiment(name, &cfg).unwrap_or_else(|e| panic!("{name}: {e}"));
    let elapsed = start.elapsed();
    for c in &summary.checks {
        println!("    {name} run {run}: {c}");
    }
    (dir, elapsed)
}

fn main() {
    let root = std::env::temp_dir().join(format!("blursr_acceptance_{}", std::process::id()));
    let _ = fs::remove_dir_all(&root);
    fs::create_dir_all(&root).unwrap();

    let names = ["fig4", "fig6", "fig7", "fig8", "fig12", "localize"];
    let mut first = BTreeMap::new();
    let mut second = BTreeMap::new();
    for name in names {
        first.insert(name, run_experiment(&root, name, 1));
    }
    for name in names {
        second.insert(name, run_experiment(&root, name, 2));
    }

    let timed = |f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        (o, start.elapsed())
    };
    let limit = |o: Outcome, took: Duration, max: Duration| {
        let ok = took <= max;
        outcome(
            o.passed && ok,
            format!(
                "{}; {:.2}s (limit {}s)",
                o.detail,
                took.as_secs_f64(),
                max.as_secs_f64()
            ),
        )
    };
    let secs = Duration::from_secs_f64;

    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let (o, t) = timed(&interlacing_identity);
    results.push(("1 interlacing identity", limit(o, t, secs(1.0))));
    let (o, t) = timed(&adjoint_correctness);
    results.push(("2 adjoint correctness", limit(o, t, secs(5.0))));
    let (dir, t) = &first["fig4"];
    results.push((
        "3 wiener vs tv on grid data",
        limit(grid_deconvolution(dir), *t, secs(600.0)),
    ));
    let (dir, t) = &first["fig6"];
    results.push((
        "4 quadratic vs tv lambda sweeps",
        limit(prior_comparison(dir), *t, secs(1800.0)),
    ));
    let ((d7, t7), (d8, t8)) = (&first["fig7"], &first["fig8"]);
    results.push((
        "5 single-capture sparse recovery",
        limit(sparse_recovery(d7, d8, *t8), *t7, secs(300.0)),
    ));
    let (o, t) = timed(&point_localization);
    results.push(("6 point-source localization", limit(o, t, secs(1.0))));
    let (o, t) = timed(&box_spectrum_zeros);
    results.push(("7 box spectrum zero sets", limit(o, t, secs(1.0))));
    let (o, t) = timed(&static_motion_equivalence);
    results.push(("8 static-motion equivalence", limit(o, t, secs(1.0))));

    let mut mismatched = Vec::new();
    let mut compared = 0;
    for name in names {
        let (a, b) = (artifacts(&first[name].0), artifacts(&second[name].0));
        if a.keys().ne(b.keys()) {
            mismatched.push(format!("{name}: file sets differ"));
        }
        for (file, bytes) in &a {
            compared += 1;
            if b.get(file) != Some(bytes) {
                mismatched.push(format!("{name}/{file}"));
            }
        }
    }
    results.push((
        "9 determinism",
        outcome(
            mismatched.is_empty() && compared > 0,
            format!("{compared} CSV/raw files compared across two runs, mismatches {mismatched:?}"),
        ),
    ));

    println!();
    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "criterion {name}: {} ({})",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += !o.passed as usize;
    }
    println!(
        "\n{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    let _ = fs::remove_dir_all(&root);
    if failed > 0 {
        std::process::exit(1);
    }
}
