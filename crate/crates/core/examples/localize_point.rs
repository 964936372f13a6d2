//! Localizes a point source to sub-pixel precision from the two samples
//! it spreads over during a one-pixel motion.
//!
//! ```
//! cargo run --release --example localize_point -- 3.25
//! ```

use blursr::bench::{localize_point_source, localize_point_source_noisy, PointScene1D};
use blursr::forward::add_noise;
use blursr::raster::Image;

fn main() -> blursr::Result<()> {
    let t0: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(3.25);
    let scene = PointScene1D::new(1.0, t0, 1.0)?;
    let profile = scene.capture(10)?;
    println!("profile: {profile:.3?}");

    let loc = localize_point_source(&profile, 1.0)?;
    println!(
        "t0 = {:.9} (true {t0}), intensity {:.6}",
        loc.t0, loc.intensity
    );

    let noisy = add_noise(&Image::new(1, profile.len(), profile)?, 1e-3, 5)?;
    let loc = localize_point_source_noisy(noisy.data(), 1.0)?;
    println!("with noise 1e-3: t0 = {:.6}", loc.t0);
    Ok(())
}
