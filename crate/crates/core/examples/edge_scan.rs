//! Estimates the position of a step edge from a motion-blurred profile and
//! maps it to the nearest high-resolution grid line.
//!
//! ```
//! cargo run --release --example edge_scan -- 4.3 8
//! ```

use blursr::bench::{estimate_edge_offset, simulate_edge};

fn main() -> blursr::Result<()> {
    let mut args = std::env::args().skip(1);
    let edge: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(4.3);
    let f: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(8);

    for motion in [false, true] {
        let profile = simulate_edge(edge, 10, motion);
        let e = estimate_edge_offset(&profile, f)?;
        println!(
            "motion {motion:5}: edge at {:.9} px, high-res line {} of {f} per px",
            e.position, e.highres_index
        );
    }
    Ok(())
}
