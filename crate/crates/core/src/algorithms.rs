//! The solvers: adaptive FW, away-steps FW, pairwise FW and matching
//! pursuit, plus a fixed-step FW baseline, gap functions and the running
//! dual-gap certificate.

use std::time::Instant;

use crate::active_set::ActiveSet;
use crate::atom::{Atom, AtomId};
use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::linesearch::{candidate_step, init_lipschitz, step_size, LineSearchState, StepSizeOutcome};
use crate::objectives::Objective;
use crate::oracles::{away_oracle, support_function, ConstraintSet, LinearOracle};
use crate::point::Point;
use crate::scalar::Scalar;
use crate::trace::{StepKind, StepOutcome, TraceRecord};

/// Why a solver run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The directional gap fell to delta * epsilon.
    GapTolerance,
    MaxIter,
    /// Backtracking exceeded its evaluation cap; the trace is partial.
    BacktrackFailure,
}

/// Final iterate, trace and termination reason of a run.
#[derive(Debug, Clone)]
pub struct SolverResult<F: Scalar> {
    pub x: Point<F>,
    pub active_set: Option<ActiveSet<F>>,
    pub trace: Vec<TraceRecord<F>>,
    pub termination: Termination,
}

impl<F: Scalar> SolverResult<F> {
    pub fn final_objective(&self) -> Option<F> {
        self.trace.last().map(|r| r.objective)
    }

    pub fn iterations(&self) -> usize {
        self.trace.len()
    }
}

/// Running average of gradients u_t with the primal-dual certificate
/// f(x_t) - psi(u_t), where psi(u) = -f*(u) - sigma(-u).
#[derive(Debug, Clone)]
pub struct DualGapTracker<F: Scalar> {
    dual_point: Point<F>,
    good_steps: usize,
    quality: F,
}

impl<F: Scalar> DualGapTracker<F> {
    /// Starts at u_0 = grad f(x_0).
    pub fn new(initial_gradient: Point<F>, quality: F) -> Self {
        DualGapTracker { dual_point: initial_gradient, good_steps: 0, quality }
    }

    pub fn dual_point(&self) -> &Point<F> {
        &self.dual_point
    }

    /// u <- (1 - xi) u + xi grad with xi = 2 / (delta N + 2) on good steps,
    /// xi = 0 on bad steps.
    pub fn update(&mut self, gradient: &Point<F>, good_step: bool) {
        if !good_step {
            return;
        }
        let xi = F::cast(2.0)
            / (self.quality * F::cast(self.good_steps as f64) + F::cast(2.0));
        self.dual_point.scale(F::one() - xi);
        self.dual_point
            .add_scaled(xi, gradient)
            .expect("dual point tracks gradient shape");
        self.good_steps += 1;
    }

    /// f(x_t) - psi(u_t) using the oracle's support function; `None` when
    /// either the conjugate or the support is unavailable.
    pub fn certificate<O, L>(&self, objective: &O, oracle: &L, f_x: F) -> Option<F>
    where
        O: Objective<F>,
        L: LinearOracle<F>,
    {
        let conjugate = objective.conjugate(&self.dual_point)?;
        let mut negated = self.dual_point.clone();
        negated.scale(-F::one());
        let sigma = oracle.support(&negated)?;
        Some(f_x + conjugate + sigma)
    }
}

/// f(x_t) - psi(u_t) against an explicit constraint descriptor.
pub fn dual_gap<F, O>(
    tracker: &DualGapTracker<F>,
    objective: &O,
    constraint: &ConstraintSet<F>,
    f_x: F,
) -> Option<F>
where
    F: Scalar,
    O: Objective<F>,
{
    let conjugate = objective.conjugate(tracker.dual_point())?;
    let mut negated = tracker.dual_point().clone();
    negated.scale(-F::one());
    let sigma = support_function(constraint, &negated).ok()?;
    Some(f_x + conjugate + sigma)
}

/// FW gap max_s <grad f(x), x - s> evaluated through the given oracle.
pub fn fw_gap<F, O, L>(objective: &O, x: &Point<F>, oracle: &L) -> Result<F>
where
    F: Scalar,
    O: Objective<F>,
    L: LinearOracle<F>,
{
    let grad = objective.gradient(x);
    let answer = oracle.solve(&grad, x)?;
    Ok(grad.inner(x)? - answer.value)
}

/// MP gap max_{s in B} <grad f(x), s>; requires a symmetrized dictionary.
pub fn mp_gap<F, O, L>(objective: &O, x: &Point<F>, oracle: &L) -> Result<F>
where
    F: Scalar,
    O: Objective<F>,
    L: LinearOracle<F>,
{
    let grad = objective.gradient(x);
    let answer = oracle.solve(&grad, x)?;
    Ok(-answer.value)
}

/// Average and maximum Lipschitz estimate over good steps.
pub fn lipschitz_stats<F: Scalar>(trace: &[TraceRecord<F>]) -> Result<(F, F)> {
    let mut count = 0usize;
    let mut sum = F::zero();
    let mut max = F::zero();
    for row in trace {
        if row.step_type.is_good() {
            count += 1;
            sum += row.lipschitz;
            max = max.max(row.lipschitz);
        }
    }
    if count == 0 {
        return Err(Error::Contract("no good steps in trace".into()));
    }
    Ok((sum / F::cast(count as f64), max))
}

enum StepRule<F> {
    Backtracking,
    Fixed(F),
}

struct Recorder<F: Scalar> {
    start: Instant,
    rows: Vec<TraceRecord<F>>,
    evals: usize,
    good: usize,
    lipschitz_sum: F,
    lipschitz_max: F,
}

impl<F: Scalar> Recorder<F> {
    fn new() -> Self {
        Recorder {
            start: Instant::now(),
            rows: Vec::new(),
            evals: 0,
            good: 0,
            lipschitz_sum: F::zero(),
            lipschitz_max: F::zero(),
        }
    }

    fn push(&mut self, iter: usize, objective: F, gap: F, dual_gap: Option<F>, step: &StepOutcome<F>) {
        self.evals += step.backtrack_evals;
        if step.kind.is_good() {
            self.good += 1;
            self.lipschitz_sum += step.lipschitz;
            self.lipschitz_max = self.lipschitz_max.max(step.lipschitz);
        }
        let (avg, max) = if self.good > 0 {
            (
                Some(self.lipschitz_sum / F::cast(self.good as f64)),
                Some(self.lipschitz_max),
            )
        } else {
            (None, None)
        };
        self.rows.push(TraceRecord {
            iter,
            elapsed: self.start.elapsed().as_secs_f64(),
            objective,
            gap,
            dual_gap,
            step_size: step.step_size,
            lipschitz: step.lipschitz,
            step_type: step.kind,
            backtrack_evals: self.evals,
            good_steps: self.good,
            avg_lipschitz: avg,
            max_lipschitz: max,
            directional_gap: step.gap,
            direction_norm_sq: step.direction.norm_sq(),
        });
    }
}

fn terminal_outcome<F: Scalar>(gap: F, step_max: F, lipschitz: F, dim: usize) -> StepOutcome<F> {
    StepOutcome {
        direction: Point::zeros(dim),
        gap,
        step_size: F::zero(),
        step_max,
        kind: StepKind::Terminal,
        backtrack_evals: 0,
        lipschitz,
    }
}

fn current_lipschitz<F: Scalar>(state: &Option<LineSearchState<F>>, config: &SolverConfig<F>) -> F {
    state
        .as_ref()
        .map(|s| s.lipschitz())
        .or(config.init_lipschitz)
        .unwrap_or_else(|| F::cast(1e-3))
}

fn ensure_state<'a, F: Scalar, O: Objective<F>>(
    state: &'a mut Option<LineSearchState<F>>,
    config: &SolverConfig<F>,
    objective: &O,
    x: &Point<F>,
    direction: &Point<F>,
) -> Result<&'a mut LineSearchState<F>> {
    if state.is_none() {
        let l0 = match config.init_lipschitz {
            Some(l) => l,
            None => init_lipschitz(objective, x, direction, F::cast(1e-3)),
        };
        *state = Some(LineSearchState::new(l0, config)?);
    }
    Ok(state.as_mut().expect("just initialized"))
}

/// One evaluation-free step at a frozen Lipschitz constant (the baseline).
fn fixed_step<F: Scalar, O: Objective<F>>(
    objective: &O,
    x: &Point<F>,
    direction: &Point<F>,
    gap: F,
    step_max: F,
    lipschitz: F,
) -> Result<StepSizeOutcome<F>> {
    let d_norm_sq = direction.norm_sq();
    let gamma = candidate_step(gap, lipschitz, d_norm_sq, step_max)?;
    let mut trial = x.clone();
    trial.add_scaled(gamma, direction)?;
    Ok(StepSizeOutcome { step: gamma, lipschitz, evals: 0, trial_objective: objective.value(&trial) })
}

fn densified<F: Scalar>(point: Point<F>) -> Point<F> {
    match point {
        Point::Sparse { .. } => Point::Dense(point.to_dense()),
        other => other,
    }
}

/// FW loop shared by the adaptive variant and the fixed-step baseline.
fn run_fw_loop<F, O, L>(
    objective: &O,
    oracle: &L,
    config: &SolverConfig<F>,
    rule: StepRule<F>,
) -> Result<SolverResult<F>>
where
    F: Scalar,
    O: Objective<F>,
    L: LinearOracle<F>,
{
    config.validate()?;
    let dim = oracle.dim();
    let delta = config.lmo_quality;
    let mut x = densified(oracle.initial_atom().materialize(dim)?);
    let mut f_x = objective.value(&x);
    let mut recorder = Recorder::new();
    let mut state: Option<LineSearchState<F>> = None;
    let mut tracker: Option<DualGapTracker<F>> = None;

    for iter in 0..config.max_iter {
        let grad = objective.gradient(&x);
        let tracker = tracker.get_or_insert_with(|| DualGapTracker::new(grad.clone(), delta));
        let answer = oracle.solve(&grad, &x)?;
        let s = answer.atom.materialize(dim)?;
        let direction = s.sub(&x)?;
        let gap = -grad.inner(&direction)?;
        let gap_proxy = grad.inner(&x)? - answer.value;
        let dual = tracker.certificate(objective, oracle, f_x);

        if gap <= delta * config.tolerance {
            let lip = current_lipschitz(&state, config);
            recorder.push(iter, f_x, gap_proxy, dual, &terminal_outcome(gap, F::one(), lip, dim));
            return Ok(SolverResult {
                x,
                active_set: None,
                trace: recorder.rows,
                termination: Termination::GapTolerance,
            });
        }

        let outcome = match rule {
            StepRule::Backtracking => {
                let st = ensure_state(&mut state, config, objective, &x, &direction)?;
                st.record_objective(f_x);
                match step_size(objective, &x, f_x, &direction, gap, F::one(), st) {
                    Ok(o) => o,
                    Err(Error::BacktrackDiverged { .. }) => {
                        let lip = current_lipschitz(&state, config);
                        recorder.push(iter, f_x, gap_proxy, dual, &terminal_outcome(gap, F::one(), lip, dim));
                        return Ok(SolverResult {
                            x,
                            active_set: None,
                            trace: recorder.rows,
                            termination: Termination::BacktrackFailure,
                        });
                    }
                    Err(e) => return Err(e),
                }
            }
            StepRule::Fixed(l) => fixed_step(objective, &x, &direction, gap, F::one(), l)?,
        };

        let step = StepOutcome {
            direction,
            gap,
            step_size: outcome.step,
            step_max: F::one(),
            kind: StepKind::Good,
            backtrack_evals: outcome.evals,
            lipschitz: outcome.lipschitz,
        };
        recorder.push(iter, f_x, gap_proxy, dual, &step);
        x.add_scaled(outcome.step, &step.direction)?;
        f_x = outcome.trial_objective;
        tracker.update(&grad, true);
    }

    Ok(SolverResult { x, active_set: None, trace: recorder.rows, termination: Termination::MaxIter })
}

/// Adaptive FW: d_t = s_t - x_t, step capped at 1, every step good.
pub fn run_ada_fw<F, O, L>(objective: &O, oracle: &L, config: &SolverConfig<F>) -> Result<SolverResult<F>>
where
    F: Scalar,
    O: Objective<F>,
    L: LinearOracle<F>,
{
    run_fw_loop(objective, oracle, config, StepRule::Backtracking)
}

/// FW baseline with the step frozen at a caller-supplied Lipschitz constant.
pub fn run_fixed_step_fw<F, O, L>(
    objective: &O,
    oracle: &L,
    config: &SolverConfig<F>,
    known_lipschitz: F,
) -> Result<SolverResult<F>>
where
    F: Scalar,
    O: Objective<F>,
    L: LinearOracle<F>,
{
    if !(known_lipschitz > F::zero()) {
        return Err(Error::InvalidConfig("known Lipschitz constant must be > 0".into()));
    }
    run_fw_loop(objective, oracle, config, StepRule::Fixed(known_lipschitz))
}

enum AfwBranch<F: Scalar> {
    Fw { atom: Atom<F> },
    Away { id: AtomId, step_max_is_capped: bool },
}

/// Adaptive away-steps FW over a finite atom set.
pub fn run_ada_afw<F, O, L>(objective: &O, oracle: &L, config: &SolverConfig<F>) -> Result<SolverResult<F>>
where
    F: Scalar,
    O: Objective<F>,
    L: LinearOracle<F>,
{
    config.validate()?;
    let dim = oracle.dim();
    let delta = config.lmo_quality;
    let x0 = oracle.initial_atom();
    if x0.is_rank_one() {
        return Err(Error::RankOneActiveSet);
    }
    let mut set = ActiveSet::singleton(x0, dim)?;
    let mut f_x = objective.value(set.iterate());
    let mut recorder = Recorder::new();
    let mut state: Option<LineSearchState<F>> = None;
    let mut tracker: Option<DualGapTracker<F>> = None;

    for iter in 0..config.max_iter {
        let grad = objective.gradient(set.iterate());
        let tracker = tracker.get_or_insert_with(|| DualGapTracker::new(grad.clone(), delta));
        let answer = oracle.solve(&grad, set.iterate())?;
        if answer.atom.is_rank_one() {
            return Err(Error::RankOneActiveSet);
        }
        let grad_x = grad.inner(set.iterate())?;
        let fw_gain = grad_x - answer.value; // <grad, x - s>
        let away = away_oracle(&set, &grad)?;
        let away_gain = away.value - grad_x; // <grad, v - x>

        // FW branch when <grad, s - x> <= <grad, x - v>; a singleton set has
        // a zero away direction, which forces the FW branch.
        let use_fw = set.len() == 1 || -fw_gain <= -away_gain;
        let (direction, gap, step_max, branch) = if use_fw {
            let s = answer.atom.materialize(dim)?;
            let direction = s.sub(set.iterate())?;
            (direction, fw_gain, F::one(), AfwBranch::Fw { atom: answer.atom.clone() })
        } else {
            let v = away.atom.materialize(dim)?;
            let direction = set.iterate().sub(&v)?;
            let alpha = away.weight;
            let step_max = alpha / (F::one() - alpha);
            let capped = step_max < F::one();
            (direction, away_gain, step_max, AfwBranch::Away { id: away.id.clone(), step_max_is_capped: capped })
        };
        let gap_proxy = fw_gain;
        let dual = tracker.certificate(objective, oracle, f_x);

        if gap <= delta * config.tolerance {
            let lip = current_lipschitz(&state, config);
            recorder.push(iter, f_x, gap_proxy, dual, &terminal_outcome(gap, step_max, lip, dim));
            return Ok(SolverResult {
                x: set.iterate().clone(),
                active_set: Some(set),
                trace: recorder.rows,
                termination: Termination::GapTolerance,
            });
        }

        let st = ensure_state(&mut state, config, objective, set.iterate(), &direction)?;
        st.record_objective(f_x);
        let outcome = match step_size(objective, set.iterate(), f_x, &direction, gap, step_max, st) {
            Ok(o) => o,
            Err(Error::BacktrackDiverged { .. }) => {
                let lip = current_lipschitz(&state, config);
                recorder.push(iter, f_x, gap_proxy, dual, &terminal_outcome(gap, step_max, lip, dim));
                return Ok(SolverResult {
                    x: set.iterate().clone(),
                    active_set: Some(set),
                    trace: recorder.rows,
                    termination: Termination::BacktrackFailure,
                });
            }
            Err(e) => return Err(e),
        };

        let kind = match &branch {
            AfwBranch::Fw { atom } => {
                set.apply_fw_step(atom, outcome.step)?;
                StepKind::Good
            }
            AfwBranch::Away { id, step_max_is_capped } => {
                let set_kind = set.apply_away_step(id, outcome.step, step_max)?;
                // A removal is a bad (drop) step only when gamma_max < 1.
                if set_kind == StepKind::Drop && *step_max_is_capped {
                    StepKind::Drop
                } else {
                    StepKind::Good
                }
            }
        };

        let step = StepOutcome {
            direction,
            gap,
            step_size: outcome.step,
            step_max,
            kind,
            backtrack_evals: outcome.evals,
            lipschitz: outcome.lipschitz,
        };
        recorder.push(iter, f_x, gap_proxy, dual, &step);
        f_x = outcome.trial_objective;
        tracker.update(&grad, kind.is_good());
    }

    Ok(SolverResult {
        x: set.iterate().clone(),
        active_set: Some(set),
        trace: recorder.rows,
        termination: Termination::MaxIter,
    })
}

/// Adaptive pairwise FW over a finite atom set: d_t = s_t - v_t.
pub fn run_ada_pfw<F, O, L>(objective: &O, oracle: &L, config: &SolverConfig<F>) -> Result<SolverResult<F>>
where
    F: Scalar,
    O: Objective<F>,
    L: LinearOracle<F>,
{
    config.validate()?;
    let dim = oracle.dim();
    let delta = config.lmo_quality;
    let x0 = oracle.initial_atom();
    if x0.is_rank_one() {
        return Err(Error::RankOneActiveSet);
    }
    let mut set = ActiveSet::singleton(x0, dim)?;
    let mut f_x = objective.value(set.iterate());
    let mut recorder = Recorder::new();
    let mut state: Option<LineSearchState<F>> = None;
    let mut tracker: Option<DualGapTracker<F>> = None;

    for iter in 0..config.max_iter {
        let grad = objective.gradient(set.iterate());
        let tracker = tracker.get_or_insert_with(|| DualGapTracker::new(grad.clone(), delta));
        let answer = oracle.solve(&grad, set.iterate())?;
        if answer.atom.is_rank_one() {
            return Err(Error::RankOneActiveSet);
        }
        let grad_x = grad.inner(set.iterate())?;
        let gap_proxy = grad_x - answer.value;
        let away = away_oracle(&set, &grad)?;

        let s = answer.atom.materialize(dim)?;
        let v = away.atom.materialize(dim)?;
        let direction = s.sub(&v)?;
        let gap = away.value - answer.value; // <-grad, s - v>
        let step_max = away.weight;
        let dual = tracker.certificate(objective, oracle, f_x);

        if gap <= delta * config.tolerance {
            let lip = current_lipschitz(&state, config);
            recorder.push(iter, f_x, gap_proxy, dual, &terminal_outcome(gap, step_max, lip, dim));
            return Ok(SolverResult {
                x: set.iterate().clone(),
                active_set: Some(set),
                trace: recorder.rows,
                termination: Termination::GapTolerance,
            });
        }

        let st = ensure_state(&mut state, config, objective, set.iterate(), &direction)?;
        st.record_objective(f_x);
        let outcome = match step_size(objective, set.iterate(), f_x, &direction, gap, step_max, st) {
            Ok(o) => o,
            Err(Error::BacktrackDiverged { .. }) => {
                let lip = current_lipschitz(&state, config);
                recorder.push(iter, f_x, gap_proxy, dual, &terminal_outcome(gap, step_max, lip, dim));
                return Ok(SolverResult {
                    x: set.iterate().clone(),
                    active_set: Some(set),
                    trace: recorder.rows,
                    termination: Termination::BacktrackFailure,
                });
            }
            Err(e) => return Err(e),
        };

        let set_kind = set.apply_pairwise_step(&answer.atom, &away.id, outcome.step)?;
        // Bad steps require gamma_max < 1 as well (gamma_max = alpha_v <= 1,
        // with equality only on a singleton set).
        let kind = if set_kind != StepKind::Good && step_max < F::one() {
            set_kind
        } else {
            StepKind::Good
        };

        let step = StepOutcome {
            direction,
            gap,
            step_size: outcome.step,
            step_max,
            kind,
            backtrack_evals: outcome.evals,
            lipschitz: outcome.lipschitz,
        };
        recorder.push(iter, f_x, gap_proxy, dual, &step);
        f_x = outcome.trial_objective;
        tracker.update(&grad, kind.is_good());
    }

    Ok(SolverResult {
        x: set.iterate().clone(),
        active_set: Some(set),
        trace: recorder.rows,
        termination: Termination::MaxIter,
    })
}

/// Adaptive matching pursuit: d_t = s_t over a symmetrized dictionary,
/// unbounded step, no active set.
pub fn run_ada_mp<F, O, L>(objective: &O, oracle: &L, config: &SolverConfig<F>) -> Result<SolverResult<F>>
where
    F: Scalar,
    O: Objective<F>,
    L: LinearOracle<F>,
{
    config.validate()?;
    let dim = oracle.dim();
    let delta = config.lmo_quality;
    let mut x = match oracle.initial_atom().materialize(dim)? {
        Point::Matrix { rows, cols, .. } => Point::zero_matrix(rows, cols),
        _ => Point::zeros(dim),
    };
    let mut f_x = objective.value(&x);
    let mut recorder = Recorder::new();
    let mut state: Option<LineSearchState<F>> = None;

    for iter in 0..config.max_iter {
        let grad = objective.gradient(&x);
        let answer = oracle.solve(&grad, &x)?;
        let direction = answer.atom.materialize(dim)?;
        let gap = -answer.value; // <-grad, s> = g^MP estimate
        let gap_proxy = gap;

        if gap <= delta * config.tolerance {
            let lip = current_lipschitz(&state, config);
            recorder.push(iter, f_x, gap_proxy, None, &terminal_outcome(gap, F::infinity(), lip, dim));
            return Ok(SolverResult {
                x,
                active_set: None,
                trace: recorder.rows,
                termination: Termination::GapTolerance,
            });
        }

        let st = ensure_state(&mut state, config, objective, &x, &direction)?;
        st.record_objective(f_x);
        let outcome = match step_size(objective, &x, f_x, &direction, gap, F::infinity(), st) {
            Ok(o) => o,
            Err(Error::BacktrackDiverged { .. }) => {
                let lip = current_lipschitz(&state, config);
                recorder.push(iter, f_x, gap_proxy, None, &terminal_outcome(gap, F::infinity(), lip, dim));
                return Ok(SolverResult {
                    x,
                    active_set: None,
                    trace: recorder.rows,
                    termination: Termination::BacktrackFailure,
                });
            }
            Err(e) => return Err(e),
        };

        let step = StepOutcome {
            direction,
            gap,
            step_size: outcome.step,
            step_max: F::infinity(),
            kind: StepKind::Good,
            backtrack_evals: outcome.evals,
            lipschitz: outcome.lipschitz,
        };
        recorder.push(iter, f_x, gap_proxy, None, &step);
        x.add_scaled(outcome.step, &step.direction)?;
        f_x = outcome.trial_objective;
    }

    Ok(SolverResult { x, active_set: None, trace: recorder.rows, termination: Termination::MaxIter })
}