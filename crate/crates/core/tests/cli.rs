use std::fs;
use std::path::{Path, PathBuf};

use blursr::cli::{run, Manifest, EXIT_IO, EXIT_OK, EXIT_USAGE};
use blursr::raster::io::read_raw;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("blursr_cli_{name}_{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

fn blursr(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("blursr").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn grid_simulation_writes_all_frames() {
    let dir = scratch("grid");
    let (code, _, err) = blursr(&["simulate", "--out", path(&dir)]);
    assert_eq!(code, EXIT_OK, "{err}");
    let m = Manifest::read(&dir.join("manifest.json")).unwrap();
    assert_eq!(m.f, 8);
    assert_eq!(m.captures.len(), 64);
    assert!(m.interlaced.is_some() && m.trajectory.is_none());
    for c in &m.captures {
        assert!(dir.join(&c.file).exists());
    }

    let rebuilt = dir.join("h.raw");
    assert_eq!(
        blursr(&[
            "interlace",
            path(&dir.join("manifest.json")),
            "--out",
            path(&rebuilt)
        ])
        .0,
        EXIT_OK
    );
    assert_eq!(
        fs::read(rebuilt).unwrap(),
        fs::read(dir.join("interlaced.raw")).unwrap()
    );
}

#[test]
fn simulation_is_byte_identical() {
    let (a, b) = (scratch("det_a"), scratch("det_b"));
    for d in [&a, &b] {
        let args = [
            "simulate",
            "--out",
            path(d),
            "--set",
            "capture.mode=moving",
            "--set",
            "capture.f=4",
            "--set",
            "capture.noise_sigma=0.01",
        ];
        assert_eq!(blursr(&args).0, EXIT_OK);
    }
    for file in [
        "target.raw",
        "capture.raw",
        "occupancy.raw",
        "trajectory.csv",
    ] {
        assert_eq!(
            fs::read(a.join(file)).unwrap(),
            fs::read(b.join(file)).unwrap(),
            "{file}"
        );
    }
}

#[test]
fn zero_amplitude_vibration_matches_static() {
    let (mov, grid) = (scratch("zero_mov"), scratch("zero_grid"));
    let common = ["--set", "capture.f=4", "--set", "target.dims=[32,32]"];
    let mut args = vec![
        "simulate",
        "--out",
        path(&mov),
        "--set",
        "capture.mode=moving",
    ];
    args.extend([
        "--set",
        "capture.trajectory.vibration.amp_x=0",
        "--set",
        "capture.trajectory.vibration.amp_y=0",
    ]);
    args.extend(common);
    assert_eq!(blursr(&args).0, EXIT_OK);
    let mut args = vec!["simulate", "--out", path(&grid)];
    args.extend(common);
    assert_eq!(blursr(&args).0, EXIT_OK);

    let moving = read_raw(mov.join("capture.raw")).unwrap();
    let fixed = read_raw(grid.join("capture_0_0.raw")).unwrap();
    assert_eq!(moving, fixed);
}

#[test]
fn reconstruct_checks_manifest_mode() {
    let dir = scratch("mismatch");
    let args = [
        "simulate",
        "--out",
        path(&dir),
        "--set",
        "capture.mode=scan",
        "--set",
        "capture.f=4",
        "--set",
        "target.dims=[32,32]",
    ];
    assert_eq!(blursr(&args).0, EXIT_OK);
    let manifest = dir.join("manifest.json");
    let (code, _, err) = blursr(&["reconstruct", path(&manifest), "--method", "wiener"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("grid manifest"), "{err}");

    let (code, out, err) = blursr(&[
        "reconstruct",
        path(&manifest),
        "--method",
        "sparse",
        "--set",
        "solver.max_iter=20",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.starts_with("method sparse"));
    assert!(dir.join("reconstruction_sparse.raw").exists());
    assert!(dir.join("report_sparse.json").exists());
    let metrics = fs::read_to_string(dir.join("metrics_sparse.csv")).unwrap();
    assert!(metrics.starts_with("method,rms,psnr\nsparse,"));
}

#[test]
fn grid_reconstruction_methods() {
    let dir = scratch("methods");
    let args = [
        "simulate",
        "--out",
        path(&dir),
        "--set",
        "target.dims=[32,32]",
        "--set",
        "capture.f=4",
        "--set",
        "target.n_chars=2",
    ];
    assert_eq!(blursr(&args).0, EXIT_OK);
    let manifest = dir.join("manifest.json");
    for method in ["wiener", "quadratic", "tv"] {
        let (code, out, err) = blursr(&[
            "reconstruct",
            path(&manifest),
            "--method",
            method,
            "--set",
            "solver.max_iter=50",
        ]);
        assert_eq!(code, EXIT_OK, "{method}: {err}");
        assert!(out.contains(method));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(
        blursr(&["simulate", "--set", "capture.fps=2"]).0,
        EXIT_USAGE
    );
    assert_eq!(blursr(&["nonsense"]).0, EXIT_USAGE);
    assert_eq!(
        blursr(&["reconstruct", "/nonexistent/manifest.json"]).0,
        EXIT_IO
    );
    assert_eq!(blursr(&["localize", "--profile", "0,1,0"]).0, EXIT_USAGE);
    assert_eq!(blursr(&["--help"]).0, EXIT_OK);
}

#[test]
fn spectrum_and_localize_commands() {
    let (code, out, _) = blursr(&["spectrum", "--axis", "28,4,7"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["zero_bins"], 1743);
    assert_eq!(v["axis"]["intersection"].as_array().unwrap().len(), 0);

    let (code, out, _) = blursr(&["localize", "--profile", "0 0.5 0.5 0", "--pitch", "2"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["t0"], 4.0);
}

#[test]
fn experiment_writes_summary() {
    let dir = scratch("exp");
    let (code, out, _) = blursr(&["experiment", "fig12", "--out", path(&dir)]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 2);
    assert!(out.lines().all(|l| l.starts_with("fig12 PASS")));
    assert!(dir.join("summary.csv").exists() && dir.join("zero_sets.csv").exists());
}

#[test]
fn failing_threshold_exits_with_criterion_code() {
    let dir = scratch("fail");
    // A single iteration cannot reach the PSNR threshold.
    let args = [
        "experiment",
        "fig4",
        "--out",
        path(&dir),
        "--set",
        "solver.max_iter=1",
        "--set",
        "target.dims=[32,32]",
    ];
    let (code, out, _) = blursr(&args);
    assert_eq!(code, blursr::cli::EXIT_CRITERION, "{out}");
    assert!(out.contains("FAIL"));
}
