//! Captures a target on the full sub-pixel grid and interlaces the
//! low-resolution frames back into the box-filtered image.
//!
//! ```
//! cargo run --release --example interlacing -- 4
//! ```

use blursr::bench::gen_char_target;
use blursr::forward::{capture_grid, SensorSpec};
use blursr::raster::{boxsum, deinterlace, interlace};

fn main() -> blursr::Result<()> {
    let f: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(4);
    let target = gen_char_target((64, 64), 6, 3)?.image;
    let spec = SensorSpec::for_target(target.dims(), f)?;

    let grid = capture_grid(&target, &spec)?;
    println!("{} captures of {:?}", f * f, grid[0][0].dims());

    let h = interlace(&grid, f)?;
    let expected = boxsum(&target, f)?;
    println!("max |H - J*B| = {:e}", h.max_abs_diff(&expected)?);

    let back = deinterlace(&h, f)?;
    let same = back
        .iter()
        .flatten()
        .zip(grid.iter().flatten())
        .all(|(a, b)| a == b);
    println!("deinterlace recovers the frames: {same}");
    Ok(())
}
