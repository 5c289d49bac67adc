//! Backtracking step-size selection with a sufficient-decrease condition.
//!
//! A trial Lipschitz estimate M is accepted once the quadratic surrogate
//! upper-bounds the objective at the candidate step; otherwise M grows by a
//! factor tau. The estimate may shrink between iterations by a factor eta,
//! optionally warm-started from a quadratic interpolation of the last two
//! objective values.

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::point::Point;
use crate::scalar::Scalar;

/// Mutable per-run state of the backtracking procedure.
#[derive(Debug, Clone)]
pub struct LineSearchState<F: Scalar> {
    lipschitz: F,
    tau: F,
    eta: F,
    warm_start: bool,
    max_backtracks: usize,
    /// Objective at the current iterate (most recently recorded).
    last_objective: Option<F>,
    /// Objective one iterate earlier.
    prev_objective: Option<F>,
}

impl<F: Scalar> LineSearchState<F> {
    pub fn new(initial_lipschitz: F, config: &SolverConfig<F>) -> Result<Self> {
        if !(initial_lipschitz > F::zero() && initial_lipschitz.is_finite()) {
            return Err(Error::InvalidConfig(
                "initial Lipschitz estimate must be positive and finite".into(),
            ));
        }
        Ok(LineSearchState {
            lipschitz: initial_lipschitz,
            tau: config.backtrack_tau,
            eta: config.backtrack_eta,
            warm_start: config.warm_start,
            max_backtracks: config.max_backtracks,
            last_objective: None,
            prev_objective: None,
        })
    }

    /// Current Lipschitz estimate L_{t-1}.
    pub fn lipschitz(&self) -> F {
        self.lipschitz
    }

    /// Push the objective value observed at the current iterate.
    pub fn record_objective(&mut self, value: F) {
        self.prev_objective = self.last_objective;
        self.last_objective = Some(value);
    }
}

/// Quadratic surrogate Q(gamma, M) = f(x) - gamma g + (gamma^2 M / 2) ||d||^2.
pub fn surrogate_quadratic<F: Scalar>(f_x: F, gamma: F, gap: F, m: F, d_norm_sq: F) -> F {
    f_x - gamma * gap + F::cast(0.5) * gamma * gamma * m * d_norm_sq
}

/// Closed-form minimizer of the surrogate: min{g / (M ||d||^2), gamma_max}.
pub fn candidate_step<F: Scalar>(gap: F, m: F, d_norm_sq: F, step_max: F) -> Result<F> {
    if d_norm_sq <= F::zero() {
        return Err(Error::ZeroDirection);
    }
    Ok((gap / (m * d_norm_sq)).min(step_max))
}

/// Finite-difference probe for the initial Lipschitz estimate:
/// ||grad f(x0) - grad f(x0 + eps d0)|| / (eps ||d0||), falling back to 1e-3
/// when the probe is degenerate (constant gradient, zero direction).
pub fn init_lipschitz<F: Scalar, O: Objective<F>>(
    objective: &O,
    x0: &Point<F>,
    d0: &Point<F>,
    eps: F,
) -> F {
    let fallback = F::cast(1e-3);
    let d_norm = d0.norm();
    if !(d_norm > F::zero()) || !d_norm.is_finite() {
        return fallback;
    }
    let g0 = objective.gradient(x0);
    let mut shifted = x0.clone();
    if shifted.add_scaled(eps, d0).is_err() {
        return fallback;
    }
    let g1 = objective.gradient(&shifted);
    let diff = match g1.sub(&g0) {
        Ok(d) => d,
        Err(_) => return fallback,
    };
    let probe = diff.norm() / (eps * d_norm);
    if probe > F::zero() && probe.is_finite() {
        probe
    } else {
        fallback
    }
}

/// Initial Lipschitz estimate for a step: the quadratic-interpolation value
/// clipped to [eta L, L], or the lower endpoint when the interpolation is
/// undefined (first iteration, no progress).
pub fn warm_start_estimate<F: Scalar>(state: &LineSearchState<F>, gap: F, d_norm_sq: F) -> F {
    let lower = state.eta * state.lipschitz;
    let upper = state.lipschitz;
    let (Some(f_cur), Some(f_prev)) = (state.last_objective, state.prev_objective) else {
        return lower;
    };
    let progress = f_prev - f_cur;
    if !(progress > F::zero()) || !(d_norm_sq > F::zero()) {
        return lower;
    }
    let candidate = gap * gap / (F::cast(2.0) * progress * d_norm_sq);
    if !candidate.is_finite() {
        return lower;
    }
    candidate.max(lower).min(upper)
}

/// Accepted step size, Lipschitz estimate, and evaluation count.
#[derive(Debug, Clone)]
pub struct StepSizeOutcome<F: Scalar> {
    pub step: F,
    pub lipschitz: F,
    /// Trial-point evaluations of the sufficient-decrease condition.
    pub evals: usize,
    /// Objective at x + step * d, reusable by the caller.
    pub trial_objective: F,
}

/// Backtracking step-size selection. Requires gap > 0 and a non-zero
/// direction; the caller terminates on gap <= delta epsilon before calling.
pub fn step_size<F: Scalar, O: Objective<F>>(
    objective: &O,
    x: &Point<F>,
    f_x: F,
    direction: &Point<F>,
    gap: F,
    step_max: F,
    state: &mut LineSearchState<F>,
) -> Result<StepSizeOutcome<F>> {
    if !(gap > F::zero()) {
        return Err(Error::Contract(format!("step_size requires gap > 0, got {gap}")));
    }
    let d_norm_sq = direction.norm_sq();
    if !(d_norm_sq > F::zero()) {
        return Err(Error::ZeroDirection);
    }

    let mut m = if state.warm_start {
        warm_start_estimate(state, gap, d_norm_sq)
    } else {
        state.lipschitz
    };
    let mut evals = 0usize;
    loop {
        let gamma = candidate_step(gap, m, d_norm_sq, step_max)?;
        let mut trial = x.clone();
        trial.add_scaled(gamma, direction)?;
        let f_trial = objective.value(&trial);
        evals += 1;
        let bound = surrogate_quadratic(f_x, gamma, gap, m, d_norm_sq);
        // Rounding slack: once the per-step decrease falls below the float
        // resolution of f, the exact comparison fails on noise and M would
        // grow without bound.
        let slack =
            F::epsilon() * F::cast(4.0) * f_x.abs().max(bound.abs()).max(F::one());
        if f_trial <= bound + slack {
            state.lipschitz = m;
            return Ok(StepSizeOutcome { step: gamma, lipschitz: m, evals, trial_objective: f_trial });
        }
        if evals >= state.max_backtracks {
            return Err(Error::BacktrackDiverged { evals });
        }
        m *= state.tau;
    }
}

/// Theoretical cap on cumulative sufficient-decrease evaluations up to
/// iteration t: [1 - ln eta / ln tau](t + 1) + max{ln(tau L / L_init), 0} / ln tau.
pub fn backtrack_budget<F: Scalar>(t: usize, eta: F, tau: F, lipschitz: F, initial: F) -> F {
    let per_iter = F::one() - eta.ln() / tau.ln();
    let carry = (tau * lipschitz / initial).ln().max(F::zero()) / tau.ln();
    per_iter * F::cast((t + 1) as f64) + carry
}
