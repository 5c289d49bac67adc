//! Projection-free constrained optimization with adaptive backtracking
//! line-search: Frank-Wolfe, away-steps and pairwise variants over l1,
//! simplex and nuclear-norm constraints, and matching pursuit over finite
//! dictionaries, with per-iteration traces and dual-gap certificates.
//!
//! The solver core is generic over the floating-point scalar (see
//! [`Scalar`]); concrete f64 aliases are exported at the crate root.
//!
//! ```
//! use adafw::{run_ada_pfw, L1Ball, LogisticL2, SolverConfig};
//!
//! let (data, _planted) = adafw::io::synth_l1_logistic::<f64>(30, 60, 0);
//! let n = data.rows.len() as f64;
//! let objective = LogisticL2::new(data.rows, data.dim, data.labels, 1.0 / n)?;
//! let oracle = L1Ball::new(30, 2.0)?;
//! let config = SolverConfig { max_iter: 500, tolerance: 1e-8, ..Default::default() };
//! let result = run_ada_pfw(&objective, &oracle, &config)?;
//! assert!(result.final_objective().is_some());
//! # Ok::<(), adafw::Error>(())
//! ```

// `!(x > 0)` guards reject NaN; the suggested `x <= 0` would let NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod active_set;
pub mod algorithms;
pub mod atom;
pub mod bench;
pub mod config;
pub mod error;
pub mod io;
pub mod linalg;
pub mod linesearch;
pub mod objectives;
pub mod oracles;
pub mod point;
pub mod scalar;
pub mod trace;

pub use active_set::ActiveSet;
pub use algorithms::{
    dual_gap, fw_gap, lipschitz_stats, mp_gap, run_ada_afw, run_ada_fw, run_ada_mp, run_ada_pfw,
    run_fixed_step_fw, DualGapTracker, SolverResult, Termination,
};
pub use atom::{materialize, Atom, AtomId, Sign};
pub use config::SolverConfig;
pub use error::{Error, Result};
pub use linesearch::{
    backtrack_budget, candidate_step, init_lipschitz, step_size, surrogate_quadratic,
    warm_start_estimate, LineSearchState, StepSizeOutcome,
};
pub use objectives::{HuberMatrix, LogisticL2, Objective, Quadratic};
pub use oracles::{
    away_oracle, l1_ball_lmo, mp_lmo, nuclear_ball_lmo, simplex_lmo, support_function, AwayAnswer,
    ConstraintSet, DegradedLmo, FiniteAtomSet, L1Ball, LinearOracle, LmoAnswer, NuclearBall,
    Simplex,
};
pub use point::{inner_product, Point};
pub use scalar::Scalar;
pub use trace::{StepKind, StepOutcome, TraceRecord};

/// Concrete f64 aliases for the common types.
pub type Point64 = Point<f64>;
pub type Atom64 = Atom<f64>;
pub type ActiveSet64 = ActiveSet<f64>;
pub type SolverConfig64 = SolverConfig<f64>;
pub type SolverResult64 = SolverResult<f64>;
pub type TraceRecord64 = TraceRecord<f64>;

/// Concrete f32 aliases.
pub type Point32 = Point<f32>;
pub type Atom32 = Atom<f32>;
pub type ActiveSet32 = ActiveSet<f32>;
pub type SolverConfig32 = SolverConfig<f32>;
pub type SolverResult32 = SolverResult<f32>;
pub type TraceRecord32 = TraceRecord<f32>;
