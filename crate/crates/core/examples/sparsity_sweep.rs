//! Mean single-capture reconstruction error against the number of
//! characters, for vibration, random shifts and a random walk.
//!
//! The full grid takes a couple of minutes on one core. Pass `quick` for a
//! reduced run.
//!
//! ```
//! cargo run --release --example sparsity_sweep -- quick
//! ```

use blursr::bench::{
    non_monotone_families, run_sparsity_sweep, summarize, summary_to_csv, SweepConfig,
};

fn main() -> blursr::Result<()> {
    let quick = std::env::args().nth(1).as_deref() == Some("quick");
    let mut cfg = SweepConfig::default();
    if quick {
        cfg.char_counts = vec![5, 20, 80];
        cfg.seeds = vec![0, 1];
    }
    let rows = run_sparsity_sweep(&cfg)?;
    let summary = summarize(&rows);
    print!("{}", summary_to_csv(&summary));

    let bad = non_monotone_families(&summary);
    if bad.is_empty() {
        println!("error grows with character count for every family");
    } else {
        println!("non-monotone: {bad:?}");
    }
    Ok(())
}
