//! Per-iteration trace records.

use crate::scalar::Scalar;

/// How a step changed the iterate and its active set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    /// A step with guaranteed progress.
    Good,
    /// Bad step that removed an atom from the active set.
    Drop,
    /// Bad step that moved all mass to an atom outside the active set.
    Swap,
    /// Row recorded at termination; no movement.
    Terminal,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::Good => "good",
            StepKind::Drop => "drop",
            StepKind::Swap => "swap",
            StepKind::Terminal => "terminal",
        }
    }

    pub fn is_good(self) -> bool {
        matches!(self, StepKind::Good)
    }
}

impl std::fmt::Display for StepKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a single solver step.
#[derive(Debug, Clone)]
pub struct StepOutcome<F: Scalar> {
    pub direction: crate::point::Point<F>,
    /// Directional gap g_t = <-grad f(x_t), d_t> >= 0.
    pub gap: F,
    pub step_size: F,
    /// Maximum admissible step size (may be +inf for matching pursuit).
    pub step_max: F,
    pub kind: StepKind,
    pub backtrack_evals: usize,
    pub lipschitz: F,
}

/// One row per iteration: state at `iter` plus the step taken there.
#[derive(Debug, Clone)]
pub struct TraceRecord<F: Scalar> {
    pub iter: usize,
    /// Wall-clock seconds since the solver started.
    pub elapsed: f64,
    /// Objective value at the current iterate (before the step).
    pub objective: F,
    /// FW or MP gap estimate reusing the atom already computed by the LMO.
    pub gap: F,
    /// Primal-dual certificate, when the objective exposes its conjugate.
    pub dual_gap: Option<F>,
    pub step_size: F,
    /// Lipschitz estimate accepted by backtracking at this step.
    pub lipschitz: F,
    pub step_type: StepKind,
    /// Cumulative sufficient-decrease evaluations n_t.
    pub backtrack_evals: usize,
    /// Cumulative good steps N_t (including this one).
    pub good_steps: usize,
    /// Average Lipschitz estimate over good steps so far.
    pub avg_lipschitz: Option<F>,
    /// Maximum Lipschitz estimate over good steps so far.
    pub max_lipschitz: Option<F>,
    /// Directional gap g_t of the step taken (kept for verification).
    pub directional_gap: F,
    /// Squared norm of the step direction (kept for verification).
    pub direction_norm_sq: F,
}
