//! Recovers a 128x128 character target from a single 32x32 frame taken
//! while the sensor vibrates.
//!
//! ```
//! cargo run --release --example vibration_sparse -- 10 0
//! ```

use blursr::bench::{metrics, simulate_cell, Family, SweepConfig};
use blursr::raster::io::write_pgm16;

fn main() -> blursr::Result<()> {
    let mut args = std::env::args().skip(1);
    let n_chars = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);

    let cfg = SweepConfig::default();
    let out = simulate_cell(&cfg, Family::Vibration, n_chars, seed)?;
    let m = metrics(&out.estimate, &out.target.image)?;
    println!(
        "{} chars, capture {:?} -> estimate {:?}",
        n_chars,
        out.capture.dims(),
        out.estimate.dims()
    );
    println!("trajectory: {} samples", out.trajectory.len());
    println!(
        "rms {:.5}  psnr {:.2} dB  iterations {}",
        m.rms, m.psnr, out.report.iterations
    );

    std::fs::create_dir_all("out/vibration_sparse")?;
    write_pgm16("out/vibration_sparse/target.pgm", &out.target.image)?;
    write_pgm16(
        "out/vibration_sparse/capture.pgm",
        &out.capture.scale(1.0 / 16.0),
    )?;
    write_pgm16("out/vibration_sparse/estimate.pgm", &out.estimate)?;
    Ok(())
}
