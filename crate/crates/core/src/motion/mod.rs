//! Sensor trajectories and the occupancy maps they induce.
//!
//! Positions are in high-resolution pixel units; `x` runs along the first
//! (row) index of an image and `y` along the second (column) index.

mod csv;
mod occupancy;
mod trajectory;

pub use self::csv::{
    read_trajectory_csv, trajectory_from_csv, trajectory_to_csv, write_trajectory_csv,
};
pub use occupancy::{occupancy, OccupancyMap};
pub use trajectory::{
    traj_random_shifts, traj_random_walk, traj_scan, traj_vibration, Dwell, Sample, Trajectory,
    VibrationParams, SAMPLES_PER_UNIT,
};
