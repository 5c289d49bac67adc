//! Benchmark harness: problem construction, algorithm dispatch and trace
//! export shared by the CLI.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use crate::algorithms::{
    lipschitz_stats, run_ada_afw, run_ada_fw, run_ada_mp, run_ada_pfw, run_fixed_step_fw,
    SolverResult, Termination,
};
use crate::atom::{Atom, Sign};
use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::io::{
    read_libsvm, read_ratings, synth_l1_logistic, synth_mp_least_squares, synth_nuclear_huber,
    synth_simplex_quadratic, ProblemKind,
};
use crate::objectives::{HuberMatrix, LogisticL2, Objective, Quadratic};
use crate::oracles::{FiniteAtomSet, L1Ball, LinearOracle, NuclearBall, Simplex};
use crate::scalar::Scalar;
use crate::trace::{StepKind, TraceRecord};

/// Solver selector, matching the CLI names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    AdaFw,
    AdaAfw,
    AdaPfw,
    AdaMp,
    FixedFw,
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adafw" => Ok(Algorithm::AdaFw),
            "adaafw" => Ok(Algorithm::AdaAfw),
            "adapfw" => Ok(Algorithm::AdaPfw),
            "adamp" => Ok(Algorithm::AdaMp),
            "fixedfw" => Ok(Algorithm::FixedFw),
            other => Err(Error::InvalidInput(format!("unknown algorithm '{other}'"))),
        }
    }
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::AdaFw => "adafw",
            Algorithm::AdaAfw => "adaafw",
            Algorithm::AdaPfw => "adapfw",
            Algorithm::AdaMp => "adamp",
            Algorithm::FixedFw => "fixedfw",
        }
    }
}

/// One benchmark invocation.
#[derive(Debug, Clone)]
pub struct BenchmarkSpec {
    pub algorithm: Algorithm,
    pub problem: ProblemKind,
    /// Dataset path; synthetic data is generated when absent.
    pub data: Option<PathBuf>,
    /// Constraint radius (or dictionary scale for matching pursuit).
    pub radius: f64,
    /// Synthetic problem dimension.
    pub dim: usize,
    /// Synthetic sample count (l1_logistic only).
    pub n_samples: usize,
    pub config: SolverConfig<f64>,
    /// Frozen Lipschitz constant for the fixedfw baseline.
    pub fixed_lipschitz: Option<f64>,
    /// Keep every k-th trace row (the final row is always kept).
    pub trace_every: usize,
    pub out: PathBuf,
}

impl BenchmarkSpec {
    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        if !(self.radius > 0.0) {
            return Err(Error::InvalidInput("radius must be > 0".into()));
        }
        if self.trace_every == 0 {
            return Err(Error::InvalidInput("trace-every must be >= 1".into()));
        }
        if matches!(self.algorithm, Algorithm::AdaAfw | Algorithm::AdaPfw)
            && self.problem == ProblemKind::NuclearHuber
        {
            return Err(Error::InvalidInput(
                "adaafw/adapfw maintain active sets over finite atom sets; nuclear_huber is not supported"
                    .into(),
            ));
        }
        if self.data.is_some()
            && matches!(
                self.problem,
                ProblemKind::SimplexQuadratic | ProblemKind::MpLeastSquares
            )
        {
            return Err(Error::InvalidInput(format!(
                "problem '{}' is synthetic-only and takes no --data",
                self.problem.as_str()
            )));
        }
        Ok(())
    }
}

/// Summary line of a finished run.
#[derive(Debug, Clone)]
pub struct BenchSummary {
    pub algorithm: Algorithm,
    pub problem: ProblemKind,
    pub iterations: usize,
    pub final_objective: f64,
    pub final_gap: f64,
    pub termination: Termination,
    /// Average Lipschitz estimate over good steps divided by the known
    /// constant, when one is known.
    pub lipschitz_ratio: Option<f64>,
    pub bad_step_fraction: f64,
}

impl std::fmt::Display for BenchSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} on {}: iterations={} final_objective={:.6e} final_gap={:.6e} termination={:?}",
            self.algorithm.as_str(),
            self.problem.as_str(),
            self.iterations,
            self.final_objective,
            self.final_gap,
            self.termination,
        )?;
        if let Some(ratio) = self.lipschitz_ratio {
            write!(f, " avg_lipschitz/L={ratio:.3e}")?;
        }
        write!(f, " bad_step_fraction={:.3e}", self.bad_step_fraction)
    }
}

/// Run the spec, write its trace CSV, and return the summary.
pub fn run_benchmark(spec: &BenchmarkSpec) -> Result<BenchSummary> {
    spec.validate()?;
    let seed = spec.config.rng_seed;
    let (result, known_lipschitz) = match spec.problem {
        ProblemKind::L1Logistic => {
            let dataset = match &spec.data {
                Some(path) => read_libsvm::<f64>(path)?,
                None => synth_l1_logistic(spec.dim, spec.n_samples, seed).0,
            };
            let n = dataset.rows.len().max(1) as f64;
            let dim = dataset.dim;
            let objective = LogisticL2::new(dataset.rows, dim, dataset.labels, 1.0 / n)?;
            let known = objective.lipschitz();
            let oracle = L1Ball::new(dim, spec.radius)?;
            (dispatch(spec, &objective, &oracle)?, known)
        }
        ProblemKind::NuclearHuber => {
            let (observed, rows, cols) = match &spec.data {
                Some(path) => {
                    let ratings = read_ratings::<f64>(path)?;
                    (ratings.triplets, ratings.n_users, ratings.n_items)
                }
                None => synth_nuclear_huber(spec.dim, seed),
            };
            let objective = HuberMatrix::new(observed, rows, cols, 1.0)?;
            let known = objective.lipschitz();
            let oracle = NuclearBall::new(rows, cols, spec.radius, 100, 1e-9, seed)?;
            (dispatch(spec, &objective, &oracle)?, known)
        }
        ProblemKind::SimplexQuadratic => {
            let objective = synth_simplex_quadratic::<f64>(spec.dim, seed)?;
            let known = objective.lipschitz();
            if spec.algorithm == Algorithm::AdaMp {
                // Matching pursuit needs a symmetric dictionary.
                let oracle = L1Ball::new(spec.dim, 1.0)?;
                (dispatch(spec, &objective, &oracle)?, known)
            } else {
                let oracle = Simplex::new(spec.dim);
                (dispatch(spec, &objective, &oracle)?, known)
            }
        }
        ProblemKind::MpLeastSquares => {
            let (design, rows, targets) = synth_mp_least_squares::<f64>(spec.dim, seed);
            let objective = Quadratic::least_squares(&design, rows, spec.dim, &targets)?;
            let known = objective.lipschitz();
            if spec.algorithm == Algorithm::AdaMp {
                let atoms: Vec<Atom<f64>> = (0..spec.dim)
                    .map(|i| Atom::signed_basis(i, Sign::Plus, spec.radius).expect("radius > 0"))
                    .collect();
                let oracle = FiniteAtomSet::symmetrized(atoms, spec.dim)?;
                (dispatch(spec, &objective, &oracle)?, known)
            } else {
                let oracle = L1Ball::new(spec.dim, spec.radius)?;
                (dispatch(spec, &objective, &oracle)?, known)
            }
        }
    };

    let file = File::create(&spec.out)?;
    let mut writer = BufWriter::new(file);
    write_trace_csv(&result.trace, spec.trace_every, &mut writer)?;
    writer.flush()?;

    let last = result.trace.last();
    let bad = result
        .trace
        .iter()
        .filter(|r| matches!(r.step_type, StepKind::Drop | StepKind::Swap))
        .count();
    let denom = result.trace.len().max(1) as f64;
    let lipschitz_ratio = match (lipschitz_stats(&result.trace), known_lipschitz) {
        (Ok((avg, _)), Some(l)) if l > 0.0 => Some(avg / l),
        _ => None,
    };
    Ok(BenchSummary {
        algorithm: spec.algorithm,
        problem: spec.problem,
        iterations: result.trace.len(),
        final_objective: last.map(|r| r.objective).unwrap_or(f64::NAN),
        final_gap: last.map(|r| r.gap).unwrap_or(f64::NAN),
        termination: result.termination,
        lipschitz_ratio,
        bad_step_fraction: bad as f64 / denom,
    })
}

fn dispatch<O, L>(spec: &BenchmarkSpec, objective: &O, oracle: &L) -> Result<SolverResult<f64>>
where
    O: Objective<f64>,
    L: LinearOracle<f64>,
{
    match spec.algorithm {
        Algorithm::AdaFw => run_ada_fw(objective, oracle, &spec.config),
        Algorithm::AdaAfw => run_ada_afw(objective, oracle, &spec.config),
        Algorithm::AdaPfw => run_ada_pfw(objective, oracle, &spec.config),
        Algorithm::AdaMp => run_ada_mp(objective, oracle, &spec.config),
        Algorithm::FixedFw => {
            let known = spec
                .fixed_lipschitz
                .or_else(|| objective.lipschitz())
                .ok_or_else(|| {
                    Error::InvalidConfig(
                        "fixedfw needs --fixed-L or an objective with a known constant".into(),
                    )
                })?;
            run_fixed_step_fw(objective, oracle, &spec.config, known)
        }
    }
}

/// CSV header shared by every trace file.
pub const TRACE_HEADER: &str = "iter,elapsed_s,objective,gap,dual_gap,step_size,lipschitz,step_type,n_backtracks,good_steps,avg_lipschitz,max_lipschitz";

/// Write the trace, keeping every `every`-th row plus the final row. The
/// dual-gap and Lipschitz-statistics columns are empty (not zero) when the
/// quantity is unavailable.
pub fn write_trace_csv<F: Scalar, W: Write>(
    trace: &[TraceRecord<F>],
    every: usize,
    writer: &mut W,
) -> Result<()> {
    writeln!(writer, "{TRACE_HEADER}")?;
    let last = trace.len().saturating_sub(1);
    for (position, row) in trace.iter().enumerate() {
        if every > 1 && row.iter % every != 0 && position != last {
            continue;
        }
        writeln!(
            writer,
            "{},{:.6},{},{},{},{},{},{},{},{},{},{}",
            row.iter,
            row.elapsed,
            row.objective,
            row.gap,
            optional(&row.dual_gap),
            row.step_size,
            row.lipschitz,
            row.step_type,
            row.backtrack_evals,
            row.good_steps,
            optional(&row.avg_lipschitz),
            optional(&row.max_lipschitz),
        )?;
    }
    Ok(())
}

fn optional<F: Scalar>(value: &Option<F>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

/// Process exit code for a finished (or failed) benchmark: 0 success,
/// 1 I/O or data, 2 invalid spec, 3 backtracking failure.
pub fn exit_code(outcome: &Result<BenchSummary>) -> i32 {
    match outcome {
        Ok(summary) if summary.termination == Termination::BacktrackFailure => 3,
        Ok(_) => 0,
        Err(Error::Io(_)) | Err(Error::Parse { .. }) => 1,
        Err(_) => 2,
    }
}
