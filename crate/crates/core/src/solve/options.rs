use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Regularizer used by the iterative solvers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prior {
    /// `λ ||J||_1`
    L1,
    /// `λ TV(J)`, anisotropic with cyclic neighbours.
    #[default]
    Tv,
    /// `λ ||∇J||^2` with forward differences.
    Quadratic,
}

/// Which Wiener denominator to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WienerForm {
    /// `conj(B) H / (|B|^2 + γ)`
    #[default]
    Stabilized,
    /// `H / (B + γ)`
    Literal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    /// Regularization weight `λ`.
    pub lambda: f64,
    /// Wiener shrinkage `γ`.
    pub gamma: f64,
    pub max_iter: usize,
    /// Relative-change stopping threshold.
    pub tol: f64,
    /// Alternating sweeps per multiplier update in the splitting scheme.
    pub inner_iter: usize,
    pub prior: Prior,
    /// Project onto `J >= 0`.
    pub nonneg: bool,
    /// Initial augmented-Lagrangian penalty; `None` picks one from the
    /// operator's spectrum.
    pub rho: Option<f64>,
    /// Rebalance the penalty from primal/dual residuals during the first
    /// iterations.
    pub adaptive_rho: bool,
    pub wiener_form: WienerForm,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            lambda: 1e-2,
            gamma: 1e-3,
            max_iter: 500,
            tol: 1e-6,
            inner_iter: 5,
            prior: Prior::Tv,
            nonneg: true,
            rho: None,
            adaptive_rho: true,
            wiener_form: WienerForm::Stabilized,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(invalid(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(invalid(format!("gamma must be >= 0, got {}", self.gamma)));
        }
        if self.max_iter == 0 {
            return Err(invalid("max_iter must be >= 1"));
        }
        if !(self.tol > 0.0) {
            return Err(invalid("tol must be > 0"));
        }
        if self.inner_iter == 0 {
            return Err(invalid("inner_iter must be >= 1"));
        }
        if let Some(r) = self.rho {
            if !(r > 0.0 && r.is_finite()) {
                return Err(invalid("rho must be > 0"));
            }
        }
        Ok(())
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_prior(mut self, prior: Prior) -> Self {
        self.prior = prior;
        self
    }
}

/// Outcome of an iterative reconstruction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub iterations: usize,
    pub converged: bool,
    /// Objective at the all-zero starting point.
    pub initial_objective: f64,
    /// Objective of the returned image.
    pub final_objective: f64,
    /// Objective of each iterate, one entry per outer iteration.
    pub objective: Vec<f64>,
    /// `sqrt(sum_k ||I_k - A_k J||^2)` for the returned image.
    pub final_residual: f64,
    pub final_rho: f64,
    pub wall_time_secs: f64,
}
