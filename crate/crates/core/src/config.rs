//! Solver configuration.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Parameters shared by every solver run.
#[derive(Debug, Clone)]
pub struct SolverConfig<F: Scalar> {
    pub max_iter: usize,
    /// Gap tolerance epsilon >= 0; the solver stops when g_t <= delta * epsilon.
    pub tolerance: F,
    /// Accuracy delta in (0, 1] required of the linear minimization oracle.
    pub lmo_quality: F,
    /// Backtracking growth factor tau > 1.
    pub backtrack_tau: F,
    /// Lipschitz shrink factor eta in (0, 1].
    pub backtrack_eta: F,
    /// Initial Lipschitz estimate; probed from a finite difference when absent.
    pub init_lipschitz: Option<F>,
    /// Use the quadratic-interpolation warm start for the Lipschitz estimate.
    pub warm_start: bool,
    /// Hard cap on sufficient-decrease evaluations per step.
    pub max_backtracks: usize,
    pub rng_seed: u64,
}

impl<F: Scalar> Default for SolverConfig<F> {
    fn default() -> Self {
        SolverConfig {
            max_iter: 1000,
            tolerance: F::cast(1e-8),
            lmo_quality: F::one(),
            backtrack_tau: F::cast(2.0),
            backtrack_eta: F::cast(0.9),
            init_lipschitz: None,
            warm_start: true,
            max_backtracks: 100,
            rng_seed: 0,
        }
    }
}

impl<F: Scalar> SolverConfig<F> {
    pub fn validate(&self) -> Result<()> {
        if !(self.backtrack_tau > F::one()) {
            return Err(Error::InvalidConfig("tau must be > 1".into()));
        }
        if !(self.backtrack_eta > F::zero() && self.backtrack_eta <= F::one()) {
            return Err(Error::InvalidConfig("eta must be in (0, 1]".into()));
        }
        if !(self.lmo_quality > F::zero() && self.lmo_quality <= F::one()) {
            return Err(Error::InvalidConfig("delta must be in (0, 1]".into()));
        }
        if !(self.tolerance >= F::zero()) {
            return Err(Error::InvalidConfig("tolerance must be >= 0".into()));
        }
        if let Some(l) = self.init_lipschitz {
            if !(l > F::zero() && l.is_finite()) {
                return Err(Error::InvalidConfig(
                    "initial Lipschitz estimate must be positive and finite".into(),
                ));
            }
        }
        if self.max_backtracks == 0 {
            return Err(Error::InvalidConfig("max_backtracks must be >= 1".into()));
        }
        Ok(())
    }
}
