//! Motion-blur assisted super-resolution.
//!
//! A high-resolution target `J` observed by a low-resolution sensor whose
//! pixels are `f` times larger is a decimation of `J` convolved with an
//! `f x f` box. When the sensor moves during the exposure the box is further
//! convolved with the occupancy map `Q` of the (negated) trajectory:
//!
//! ```text
//! I = (J ⊗ Q ⊗ B)↓f
//! ```
//!
//! This crate simulates such captures ([`forward`], [`motion`]), provides the
//! exact discrete primitives they are built from ([`raster`]), reconstructs
//! `J` with Wiener, quadratic, total-variation and ℓ1 solvers ([`solve`]),
//! and drives the desk-scale experiments ([`bench`], [`cli`]).
//!
//! All boundary handling is cyclic.

pub mod bench;
pub mod cli;
pub mod error;
pub mod forward;
pub mod motion;
pub mod raster;
pub mod solve;

pub use error::{Error, Result};
pub use forward::{ImagingOperator, SensorSpec};
pub use motion::{OccupancyMap, Trajectory};
pub use raster::{Image, Spectrum};
