//! Builds each camera trajectory family, turns it into an occupancy map
//! and writes the path as CSV.
//!
//! ```
//! cargo run --release --example trajectories
//! ```

use blursr::motion::{
    occupancy, traj_random_shifts, traj_random_walk, traj_scan, traj_vibration, trajectory_to_csv,
    VibrationParams,
};

fn main() -> blursr::Result<()> {
    let grid = (128, 128);
    let vib = VibrationParams::default();
    let families = [
        ("vibration", traj_vibration(&vib, vib.default_samples())?),
        ("shifts", traj_random_shifts(1000, grid, 1)?),
        ("walk", traj_random_walk(1000, grid, 1)?),
        ("scan", traj_scan(8.0)?),
    ];

    for (name, traj) in &families {
        let q = occupancy(traj, grid)?;
        let support = q.image().data().iter().filter(|&&v| v > 0.0).count();
        println!(
            "{name:9} {:6} samples, dwell {:?}, occupancy covers {support} cells, peak {:.4}",
            traj.len(),
            traj.dwell(),
            q.image().max()
        );
    }

    let csv = trajectory_to_csv(&families[3].1);
    println!(
        "\nscan path:\n{}",
        csv.lines().take(4).collect::<Vec<_>>().join("\n")
    );
    Ok(())
}
