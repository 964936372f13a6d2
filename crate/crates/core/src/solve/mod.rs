//! Reconstruction engines: Wiener and quadratic-smoothness closed forms,
//! TV deconvolution of interlaced images, and multi-capture sparse
//! reconstruction.

mod admm;
mod normal;
mod objective;
mod options;
mod sparse;
mod spectral;
mod tv;

pub use objective::{
    gradient_norm_sq, l1_norm, objective, objective_interlaced, prior_value, tv_norm,
};
pub use options::{Prior, SolverOptions, SolverReport, WienerForm};
pub use sparse::{reconstruct_with, sparse_reconstruct};
pub use spectral::{gradient_energy, quadratic, wiener, wiener_with, ZERO_BIN};
pub use tv::tv_deconvolve;
