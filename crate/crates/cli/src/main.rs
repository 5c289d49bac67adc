//! Benchmark CLI for the adafw solvers.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use adafw::bench::{exit_code, run_benchmark, Algorithm, BenchmarkSpec};
use adafw::io::ProblemKind;
use adafw::SolverConfig;

/// Run one solver on one problem and write a per-iteration trace CSV.
#[derive(Parser, Debug)]
#[command(name = "adafw-bench", version, about)]
struct Args {
    /// Solver: adafw | adaafw | adapfw | adamp | fixedfw
    #[arg(long)]
    algorithm: String,

    /// Problem: l1_logistic | nuclear_huber | simplex_quadratic | mp_leastsquares
    #[arg(long)]
    problem: String,

    /// Dataset path (libsvm text for l1_logistic, ratings for nuclear_huber);
    /// synthetic data is generated when absent.
    #[arg(long)]
    data: Option<PathBuf>,

    /// Constraint radius (dictionary scale for adamp).
    #[arg(long, default_value_t = 1.0)]
    radius: f64,

    #[arg(long, default_value_t = 1000)]
    max_iter: usize,

    /// Gap tolerance epsilon.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,

    /// Accuracy delta in (0, 1] required of the linear minimization oracle.
    #[arg(long, default_value_t = 1.0)]
    delta: f64,

    /// Lipschitz shrink factor eta in (0, 1].
    #[arg(long, default_value_t = 0.9)]
    eta: f64,

    /// Backtracking growth factor tau > 1.
    #[arg(long, default_value_t = 2.0)]
    tau: f64,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Trace CSV output path.
    #[arg(long, default_value = "trace.csv")]
    out: PathBuf,

    /// Keep every k-th trace row (the final row is always kept).
    #[arg(long, default_value_t = 1)]
    trace_every: usize,

    /// Frozen Lipschitz constant for the fixedfw baseline.
    #[arg(long = "fixed-L")]
    fixed_l: Option<f64>,

    /// Disable the quadratic-interpolation warm start of the Lipschitz estimate.
    #[arg(long)]
    no_warm_start: bool,

    /// Synthetic problem dimension.
    #[arg(long, default_value_t = 50)]
    dim: usize,

    /// Synthetic sample count (l1_logistic).
    #[arg(long, default_value_t = 100)]
    samples: usize,

    /// Initial Lipschitz estimate (finite-difference probe when absent).
    #[arg(long)]
    init_lipschitz: Option<f64>,
}

fn build_spec(args: &Args) -> adafw::Result<BenchmarkSpec> {
    let algorithm: Algorithm = args.algorithm.parse()?;
    let problem: ProblemKind = args.problem.parse()?;
    let config = SolverConfig {
        max_iter: args.max_iter,
        tolerance: args.tol,
        lmo_quality: args.delta,
        backtrack_tau: args.tau,
        backtrack_eta: args.eta,
        init_lipschitz: args.init_lipschitz,
        warm_start: !args.no_warm_start,
        max_backtracks: 100,
        rng_seed: args.seed,
    };
    Ok(BenchmarkSpec {
        algorithm,
        problem,
        data: args.data.clone(),
        radius: args.radius,
        dim: args.dim,
        n_samples: args.samples,
        config,
        fixed_lipschitz: args.fixed_l,
        trace_every: args.trace_every,
        out: args.out.clone(),
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = build_spec(&args).and_then(|spec| run_benchmark(&spec));
    let code = exit_code(&outcome);
    match &outcome {
        Ok(summary) => println!("{summary}"),
        Err(err) => eprintln!("error: {err}"),
    }
    ExitCode::from(code as u8)
}
