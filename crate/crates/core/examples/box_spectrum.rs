//! Where the periodic box filter loses information: zero bins of its DFT,
//! and how two box widths cover each other's zeros.
//!
//! ```
//! cargo run --release --example box_spectrum
//! ```

use blursr::bench::zero_sets;
use blursr::raster::box_spectrum;

fn main() -> blursr::Result<()> {
    for f in [2, 4, 8] {
        let zeros = box_spectrum(128, 128, f)?.zero_count(1e-9);
        println!("128x128, width {f}: {zeros} zero bins");
    }

    let z = zero_sets(28, (4, 7), 1e-9)?;
    println!("length 28, width 4 zeros: {:?}", z.first);
    println!("length 28, width 7 zeros: {:?}", z.second);
    println!("shared: {:?}", z.intersection);
    Ok(())
}
