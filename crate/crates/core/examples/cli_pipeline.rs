//! Drives the command-line front end in-process: simulate a vibration
//! capture, then reconstruct it from the manifest.
//!
//! ```
//! cargo run --release --example cli_pipeline
//! ```

use blursr::cli::run;

fn main() {
    let dir = std::env::temp_dir().join("blursr_cli_pipeline");
    let dir = dir.to_string_lossy().into_owned();
    let steps: [&[&str]; 2] = [
        &[
            "simulate",
            "--out",
            &dir,
            "--set",
            "capture.mode=moving",
            "--set",
            "capture.f=4",
        ],
        &[
            "reconstruct",
            &format!("{dir}/manifest.json"),
            "--method",
            "sparse",
            "--set",
            "solver.prior=l1",
            "--set",
            "solver.lambda=1e-4",
            "--set",
            "solver.max_iter=1000",
            "--set",
            "solver.inner_iter=1",
        ],
    ];
    for step in steps {
        let args = std::iter::once("blursr").chain(step.iter().copied());
        let code = run(args, &mut std::io::stdout(), &mut std::io::stderr());
        if code != 0 {
            std::process::exit(code);
        }
    }
}
