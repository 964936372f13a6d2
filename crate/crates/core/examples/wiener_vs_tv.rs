//! Deconvolves an interlaced grid capture with Wiener filtering and with
//! total variation, then writes both next to the target as PGM files.
//!
//! ```
//! cargo run --release --example wiener_vs_tv -- out/wiener_vs_tv
//! ```

use std::path::PathBuf;

use blursr::bench::{compare_wiener_tv, GridConfig};
use blursr::raster::io::write_pgm16;

fn main() -> blursr::Result<()> {
    let dir = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "out/wiener_vs_tv".into()),
    );
    std::fs::create_dir_all(&dir)?;

    let cfg = GridConfig::default();
    let c = compare_wiener_tv(&cfg)?;
    println!(
        "128x128 target, f = {}, {} low-res frames",
        cfg.f,
        cfg.f * cfg.f
    );
    println!("wiener  {:6.2} dB", c.wiener_psnr);
    println!(
        "tv      {:6.2} dB  ({} iterations)",
        c.tv_psnr, c.tv_report.iterations
    );

    write_pgm16(dir.join("target.pgm"), &c.data.target)?;
    write_pgm16(dir.join("wiener.pgm"), &c.wiener)?;
    write_pgm16(dir.join("tv.pgm"), &c.tv)?;
    println!("images in {}", dir.display());
    Ok(())
}
