//! Shared helpers for the integration and acceptance suites: independent
//! reference solvers and small statistics utilities.

use adafw::linalg::solve_dense;
use adafw::objectives::{Objective, Quadratic};
use adafw::point::Point;
use adafw::trace::TraceRecord;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Minimum of a strongly convex quadratic over the probability simplex by
/// brute force over all supports: solve the equality-constrained KKT system
/// on each face and keep the best feasible candidate.
pub fn simplex_qp_reference(q: &Quadratic<f64>, dim: usize) -> f64 {
    assert!(dim <= 16, "brute force over 2^dim supports");
    let qm = q.matrix();
    let b = q.linear();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << dim) {
        let support: Vec<usize> = (0..dim).filter(|i| mask & (1 << i) != 0).collect();
        let k = support.len();
        // bordered system [Q_SS 1; 1^T 0] [x; lambda] = [b_S; 1]
        let mut a = vec![0.0; (k + 1) * (k + 1)];
        let mut rhs = vec![0.0; k + 1];
        for (r, &i) in support.iter().enumerate() {
            for (c, &j) in support.iter().enumerate() {
                a[r * (k + 1) + c] = qm[i * dim + j];
            }
            a[r * (k + 1) + k] = 1.0;
            a[k * (k + 1) + r] = 1.0;
            rhs[r] = b[i];
        }
        rhs[k] = 1.0;
        let Some(sol) = solve_dense(&a, k + 1, &rhs) else {
            continue;
        };
        if sol[..k].iter().any(|&x| x < -1e-12) {
            continue;
        }
        let mut x = vec![0.0; dim];
        for (r, &i) in support.iter().enumerate() {
            x[i] = sol[r].max(0.0);
        }
        best = best.min(q.value(&Point::dense(x)));
    }
    best
}

/// Random strongly convex quadratic Q = G^T G / dim + mu I with a random
/// linear term.
pub fn random_quadratic(dim: usize, mu: f64, seed: u64) -> Quadratic<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g: Vec<f64> = (0..dim * dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut q = vec![0.0; dim * dim];
    for r in 0..dim {
        for i in 0..dim {
            for j in 0..dim {
                q[i * dim + j] += g[r * dim + i] * g[r * dim + j] / dim as f64;
            }
        }
    }
    for i in 0..dim {
        q[i * dim + i] += mu;
    }
    let b: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    Quadratic::new(q, b).unwrap()
}

/// First trace position with objective within `tol` of the reference.
pub fn first_below(trace: &[TraceRecord<f64>], f_star: f64, tol: f64) -> Option<usize> {
    trace.iter().position(|r| r.objective - f_star <= tol)
}

/// Least-squares slope of y against x.
#[allow(dead_code)] // not every test binary fits slopes
pub fn regression_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mean_x: f64 = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y: f64 = points.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let var: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    cov / var
}
