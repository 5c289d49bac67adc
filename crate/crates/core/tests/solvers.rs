//! Solver-level behavior: termination contracts, gap certificates,
//! monotonicity, and head-to-head comparisons.

mod common;

use adafw::io::{synth_mp_least_squares, synth_simplex_quadratic};
use adafw::objectives::{Objective, Quadratic};
use adafw::oracles::{DegradedLmo, FiniteAtomSet, L1Ball, NuclearBall, Simplex};
use adafw::*;

use common::{first_below, simplex_qp_reference};

fn config(max_iter: usize, tolerance: f64) -> SolverConfig<f64> {
    SolverConfig { max_iter, tolerance, ..SolverConfig::default() }
}

/// f(x) = 0.5 ||x - c||^2 as a quadratic with the matching constant term.
fn shifted_quadratic(center: &[f64]) -> Quadratic<f64> {
    let dim = center.len();
    let mut q = vec![0.0; dim * dim];
    for i in 0..dim {
        q[i * dim + i] = 1.0;
    }
    let c0 = 0.5 * center.iter().map(|x| x * x).sum::<f64>();
    Quadratic::with_constant(q, center.to_vec(), c0).unwrap()
}

#[test]
fn fw_gap_examples() {
    // x = (1, 0) is the constrained optimum of 0.5||x - (2,0)||^2 on the unit l1 ball
    let obj = shifted_quadratic(&[2.0, 0.0]);
    let oracle = L1Ball::new(2, 1.0).unwrap();
    let gap = fw_gap(&obj, &Point::dense(vec![1.0, 0.0]), &oracle).unwrap();
    assert!(gap.abs() < 1e-12);

    // x = 0 with grad (1, -3, 2): gap = 0 - (-3) = 3
    let obj: Quadratic<f64> = Quadratic::new(
        vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
        vec![-1.0, 3.0, -2.0],
    )
    .unwrap();
    let oracle = L1Ball::new(3, 1.0).unwrap();
    let gap = fw_gap(&obj, &Point::zeros(3), &oracle).unwrap();
    assert!((gap - 3.0).abs() < 1e-12);

    // zero gradient anywhere -> gap 0
    let obj = shifted_quadratic(&[0.25, 0.0]);
    let gap = fw_gap(&obj, &Point::dense(vec![0.25, 0.0]), &L1Ball::new(2, 1.0).unwrap()).unwrap();
    assert!(gap.abs() < 1e-12);
}

#[test]
fn mp_gap_examples() {
    let atoms = vec![
        Atom::signed_basis(0, Sign::Plus, 1.0).unwrap(),
        Atom::signed_basis(1, Sign::Plus, 1.0).unwrap(),
    ];
    let dict = FiniteAtomSet::symmetrized(atoms, 2).unwrap();
    // grad at x=0 is -b
    let obj: Quadratic<f64> = Quadratic::new(vec![1.0, 0.0, 0.0, 1.0], vec![-1.0, 3.0]).unwrap();
    let gap = mp_gap(&obj, &Point::zeros(2), &dict).unwrap();
    assert!((gap - 3.0).abs() < 1e-12);

    let zero: Quadratic<f64> = Quadratic::new(vec![1.0, 0.0, 0.0, 1.0], vec![0.0, 0.0]).unwrap();
    assert!(mp_gap(&zero, &Point::zeros(2), &dict).unwrap().abs() < 1e-12);

    let single = FiniteAtomSet::symmetrized(
        vec![Atom::signed_basis(0, Sign::Plus, 1.0).unwrap()],
        2,
    )
    .unwrap();
    let obj: Quadratic<f64> = Quadratic::new(vec![1.0, 0.0, 0.0, 1.0], vec![7.0, -4.0]).unwrap();
    let gap = mp_gap(&obj, &Point::zeros(2), &single).unwrap();
    assert!((gap - 7.0).abs() < 1e-12);
}

#[test]
fn dual_gap_worked_example() {
    // f(x) = 0.5||x - (2,0)||^2, u = (-1, 0), f(x_t) = 0.5:
    // psi(u) = -f*(u) - sigma(-u) = 1.5 - 1 = 0.5 and the gap vanishes.
    let obj = shifted_quadratic(&[2.0, 0.0]);
    let tracker = DualGapTracker::new(Point::dense(vec![-1.0, 0.0]), 1.0);
    let constraint = ConstraintSet::L1Ball { radius: 1.0 };
    let gap = dual_gap(&tracker, &obj, &constraint, 0.5).unwrap();
    assert!(gap.abs() < 1e-12, "gap {gap}");
}

#[test]
fn dual_gap_vanishes_at_interior_optimum() {
    // u = grad f(x*) = 0 at an interior optimum: f(x*) - psi(0) = 0.
    let obj = shifted_quadratic(&[0.2, -0.1]);
    let tracker = DualGapTracker::new(Point::zeros(2), 1.0);
    let constraint = ConstraintSet::L1Ball { radius: 1.0 };
    let f_star = obj.value(&Point::dense(vec![0.2, -0.1]));
    let gap = dual_gap(&tracker, &obj, &constraint, f_star).unwrap();
    assert!(gap.abs() < 1e-12, "gap {gap}");
}

#[test]
fn dual_gap_dominates_suboptimality_on_simplex() {
    let q = common::random_quadratic(6, 0.2, 42);
    let f_star = simplex_qp_reference(&q, 6);
    let oracle = Simplex::new(6);
    let result = run_ada_fw(&q, &oracle, &config(50, 0.0)).unwrap();
    for row in &result.trace {
        let h = row.objective - f_star;
        let dual = row.dual_gap.expect("quadratic exposes a conjugate");
        assert!(dual >= h - 1e-8, "iter {}: dual {dual} < h {h}", row.iter);
        assert!(h >= -1e-9);
    }
}

#[test]
fn dual_tracker_recursion_matches_hand_rolled() {
    let delta = 0.5;
    let grads: [Point<f64>; 3] = [
        Point::dense(vec![1.0, 2.0]),
        Point::dense(vec![-1.0, 0.5]),
        Point::dense(vec![0.25, -0.75]),
    ];
    let mut tracker = DualGapTracker::new(grads[0].clone(), delta);
    let mut expected: [f64; 2] = [1.0, 2.0];
    let mut good_steps = 0.0;
    for (i, grad) in grads.iter().enumerate() {
        let good = i != 1; // middle step is bad: xi = 0
        tracker.update(grad, good);
        if good {
            let xi = 2.0 / (delta * good_steps + 2.0);
            let g = grad.to_dense();
            expected = [
                (1.0 - xi) * expected[0] + xi * g[0],
                (1.0 - xi) * expected[1] + xi * g[1],
            ];
            good_steps += 1.0;
        }
        let u = tracker.dual_point().to_dense();
        assert!((u[0] - expected[0]).abs() < 1e-15);
        assert!((u[1] - expected[1]).abs() < 1e-15);
    }
}

#[test]
fn ada_fw_converges_on_l1_quadratic() {
    // c inside the ball: the reference optimum is c itself.
    let dim = 10;
    let center: Vec<f64> = (0..dim).map(|i| if i < 5 { 0.1 } else { -0.0 }).collect();
    let obj = shifted_quadratic(&center);
    let oracle = L1Ball::new(dim, 1.0).unwrap();
    let result = run_ada_fw(&obj, &oracle, &config(500, 0.0)).unwrap();
    let f_star = obj.value(&Point::dense(center));
    let h = result.final_objective().unwrap() - f_star;
    assert!(h <= 1e-6, "suboptimality {h}");
}

#[test]
fn ada_fw_infinite_tolerance_returns_immediately() {
    let obj = shifted_quadratic(&[2.0, 0.0]);
    let oracle = L1Ball::new(2, 1.0).unwrap();
    let result = run_ada_fw(&obj, &oracle, &config(100, f64::INFINITY)).unwrap();
    assert_eq!(result.termination, Termination::GapTolerance);
    assert_eq!(result.trace.len(), 1);
    assert_eq!(result.trace[0].step_type, StepKind::Terminal);
}

#[test]
fn ada_fw_degraded_oracle_still_converges() {
    let dim = 10;
    let center: Vec<f64> = (0..dim).map(|i| if i < 5 { 0.1 } else { 0.0 }).collect();
    let obj = shifted_quadratic(&center);
    let f_star = obj.value(&Point::dense(center.clone()));

    let exact = run_ada_fw(&obj, &L1Ball::new(dim, 1.0).unwrap(), &config(2000, 0.0)).unwrap();
    let degraded_oracle = DegradedLmo::new(L1Ball::new(dim, 1.0).unwrap(), 0.5).unwrap();
    let mut degraded_config = config(2000, 0.0);
    degraded_config.lmo_quality = 0.5;
    let degraded = run_ada_fw(&obj, &degraded_oracle, &degraded_config).unwrap();

    let exact_iters = first_below(&exact.trace, f_star, 1e-4).expect("exact run converges");
    let degraded_iters =
        first_below(&degraded.trace, f_star, 1e-4).expect("degraded run converges");
    assert!(
        degraded_iters <= 4 * exact_iters.max(1),
        "degraded {degraded_iters} vs exact {exact_iters}"
    );
    // monotone convergence along the way
    for w in degraded.trace.windows(2) {
        assert!(w[1].objective <= w[0].objective + 1e-12 * w[0].objective.abs().max(1.0));
    }
}

#[test]
fn ada_afw_simplex_quadratic_linear_convergence() {
    let q = synth_simplex_quadratic::<f64>(5, 1).unwrap();
    assert!(q.strong_convexity() >= 0.1 - 1e-9);
    let f_star = simplex_qp_reference(&q, 5);
    let oracle = Simplex::new(5);
    let result = run_ada_afw(&q, &oracle, &config(300, 0.0)).unwrap();
    let reached = first_below(&result.trace, f_star, 1e-10);
    assert!(reached.is_some(), "h never reached 1e-10 within 300 iterations");

    // strict decrease on good steps while above the noise floor, and a
    // median per-good-step ratio below one
    let mut ratios = Vec::new();
    for w in result.trace.windows(2) {
        let h0 = w[0].objective - f_star;
        let h1 = w[1].objective - f_star;
        if w[0].step_type == StepKind::Good && h0 > 1e-12 {
            assert!(h1 < h0, "good step did not decrease h: {h0} -> {h1}");
            ratios.push(h1.max(1e-18) / h0);
        }
    }
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = ratios[ratios.len() / 2];
    assert!(median < 1.0, "median good-step ratio {median}");
}

#[test]
fn ada_pfw_simplex_quadratic_beats_plain_fw() {
    let q = synth_simplex_quadratic::<f64>(5, 1).unwrap();
    let f_star = simplex_qp_reference(&q, 5);
    let oracle = Simplex::new(5);
    let pfw = run_ada_pfw(&q, &oracle, &config(300, 0.0)).unwrap();
    let fw = run_ada_fw(&q, &oracle, &config(300, 0.0)).unwrap();
    let pfw_it = first_below(&pfw.trace, f_star, 1e-10);
    assert!(pfw_it.is_some());
    let fw_it = first_below(&fw.trace, f_star, 1e-10).unwrap_or(usize::MAX);
    assert!(pfw_it.unwrap() < fw_it, "pfw {pfw_it:?} vs fw {fw_it}");
}

#[test]
fn ada_mp_least_squares_converges() {
    let dim = 20;
    let (design, rows, targets) = synth_mp_least_squares::<f64>(dim, 3);
    let obj = Quadratic::least_squares(&design, rows, dim, &targets).unwrap();
    let f_star = obj.value(&Point::dense(obj.minimizer().expect("full rank")));
    let atoms: Vec<Atom<f64>> = (0..dim)
        .map(|i| Atom::signed_basis(i, Sign::Plus, 1.0).unwrap())
        .collect();
    let dict = FiniteAtomSet::symmetrized(atoms, dim).unwrap();
    let result = run_ada_mp(&obj, &dict, &config(2000, 0.0)).unwrap();
    let reached = first_below(&result.trace, f_star, 1e-10);
    assert!(reached.is_some(), "h never reached 1e-10 within 2000 iterations");
}

#[test]
fn ada_mp_terminates_at_start_when_already_optimal() {
    // targets = 0 puts the least-squares solution at the origin, which is
    // also the MP starting point.
    let dim = 6;
    let (design, rows, _) = synth_mp_least_squares::<f64>(dim, 5);
    let obj = Quadratic::least_squares(&design, rows, dim, &vec![0.0; rows]).unwrap();
    let atoms: Vec<Atom<f64>> = (0..dim)
        .map(|i| Atom::signed_basis(i, Sign::Plus, 1.0).unwrap())
        .collect();
    let dict = FiniteAtomSet::symmetrized(atoms, dim).unwrap();
    let result = run_ada_mp(&obj, &dict, &config(100, 0.0)).unwrap();
    assert_eq!(result.termination, Termination::GapTolerance);
    assert_eq!(result.trace.len(), 1);
}

#[test]
fn ada_mp_certifies_gap_at_tolerance_termination() {
    let dim = 12;
    let (design, rows, targets) = synth_mp_least_squares::<f64>(dim, 8);
    let obj = Quadratic::least_squares(&design, rows, dim, &targets).unwrap();
    let atoms: Vec<Atom<f64>> = (0..dim)
        .map(|i| Atom::signed_basis(i, Sign::Plus, 1.0).unwrap())
        .collect();
    let dict = FiniteAtomSet::symmetrized(atoms, dim).unwrap();
    let result = run_ada_mp(&obj, &dict, &config(10_000, 1e-6)).unwrap();
    assert_eq!(result.termination, Termination::GapTolerance);
    let certified = mp_gap(&obj, &result.x, &dict).unwrap();
    assert!(certified <= 1e-6 * (1.0 + 1e-9), "certified {certified}");
}

#[test]
fn certified_fw_gap_at_termination_with_degraded_oracle() {
    let dim = 8;
    // ||center||_1 = 0.72 keeps the optimum strictly inside the ball
    let center: Vec<f64> = (0..dim).map(|i| 0.02 * (i as f64 + 1.0)).collect();
    let obj = shifted_quadratic(&center);
    let exact = L1Ball::new(dim, 1.0).unwrap();
    let degraded = DegradedLmo::new(L1Ball::new(dim, 1.0).unwrap(), 0.5).unwrap();
    let mut cfg = config(20_000, 1e-7);
    cfg.lmo_quality = 0.5;
    let result = run_ada_fw(&obj, &degraded, &cfg).unwrap();
    assert_eq!(result.termination, Termination::GapTolerance);
    // g_t <= delta eps certifies g(x) <= eps through the exact oracle
    let certified = fw_gap(&obj, &result.x, &exact).unwrap();
    assert!(certified <= 1e-7 * (1.0 + 1e-6), "certified {certified}");
}

#[test]
fn directional_gap_dominates_fw_gap_estimate() {
    // AFW picks the better of the two directions and PFW adds a nonnegative
    // away term, so g_t >= <grad, x - s_t> at every iteration.
    let q = synth_simplex_quadratic::<f64>(6, 9).unwrap();
    let oracle = Simplex::new(6);
    for result in [
        run_ada_afw(&q, &oracle, &config(200, 0.0)).unwrap(),
        run_ada_pfw(&q, &oracle, &config(200, 0.0)).unwrap(),
        run_ada_fw(&q, &oracle, &config(200, 0.0)).unwrap(),
    ] {
        for row in &result.trace {
            assert!(
                row.directional_gap >= row.gap - 1e-12 * row.gap.abs().max(1.0),
                "iter {}: g_t {} < fw-gap estimate {}",
                row.iter,
                row.directional_gap,
                row.gap
            );
        }
    }
}

#[test]
fn objective_monotone_across_solvers() {
    let q = synth_simplex_quadratic::<f64>(7, 11).unwrap();
    let simplex = Simplex::new(7);
    let l1 = L1Ball::new(7, 1.0).unwrap();
    let results = [
        run_ada_fw(&q, &simplex, &config(400, 0.0)).unwrap(),
        run_ada_afw(&q, &simplex, &config(400, 0.0)).unwrap(),
        run_ada_pfw(&q, &simplex, &config(400, 0.0)).unwrap(),
        run_ada_mp(&q, &l1, &config(400, 0.0)).unwrap(),
    ];
    for result in results {
        for w in result.trace.windows(2) {
            assert!(
                w[1].objective <= w[0].objective + 1e-12 * w[0].objective.abs().max(1.0),
                "objective increased: {} -> {}",
                w[0].objective,
                w[1].objective
            );
            assert!(w[1].backtrack_evals >= w[0].backtrack_evals);
            assert!(w[1].good_steps >= w[0].good_steps);
        }
    }
}

#[test]
fn active_set_stays_a_convex_combination() {
    let q = synth_simplex_quadratic::<f64>(6, 21).unwrap();
    let oracle = Simplex::new(6);
    for result in [
        run_ada_afw(&q, &oracle, &config(250, 0.0)).unwrap(),
        run_ada_pfw(&q, &oracle, &config(250, 0.0)).unwrap(),
    ] {
        let set = result.active_set.expect("active-set solvers return the set");
        let total: f64 = set.iter().map(|(_, _, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert!(set.iter().all(|(_, _, w)| w > 0.0));
        let cached = set.iterate().to_dense();
        let rebuilt = set.materialized().unwrap().to_dense();
        for (a, b) in cached.iter().zip(rebuilt.iter()) {
            assert!((a - b).abs() < 1e-8);
        }
        // the iterate is feasible: on the simplex up to tolerance
        assert!(cached.iter().all(|&x| x >= -1e-9));
        assert!((cached.iter().sum::<f64>() - 1.0).abs() < 1e-8);
    }
}

#[test]
fn active_set_solvers_refuse_rank_one_oracles() {
    let obj = HuberMatrix::new(vec![(0, 0, 1.0), (1, 1, -0.5)], 2, 2, 1.0).unwrap();
    let oracle = NuclearBall::new(2, 2, 1.0, 50, 1e-9, 0).unwrap();
    assert!(matches!(
        run_ada_afw(&obj, &oracle, &config(10, 0.0)),
        Err(Error::RankOneActiveSet)
    ));
    assert!(matches!(
        run_ada_pfw(&obj, &oracle, &config(10, 0.0)),
        Err(Error::RankOneActiveSet)
    ));
}

#[test]
fn nuclear_fw_decreases_huber_objective() {
    let (observed, rows, cols) = adafw::io::synth_nuclear_huber::<f64>(8, 13);
    let obj = HuberMatrix::new(observed, rows, cols, 1.0).unwrap();
    let oracle = NuclearBall::new(rows, cols, 2.0, 100, 1e-9, 13).unwrap();
    let result = run_ada_fw(&obj, &oracle, &config(150, 0.0)).unwrap();
    let first = result.trace.first().unwrap().objective;
    let last = result.trace.last().unwrap().objective;
    assert!(last < first, "no decrease: {first} -> {last}");
    for w in result.trace.windows(2) {
        assert!(w[1].objective <= w[0].objective + 1e-12 * w[0].objective.abs().max(1.0));
    }
}

#[test]
fn backtrack_failure_returns_partial_trace() {
    // Finite at the first evaluation (the starting point), NaN at every
    // trial point afterwards.
    struct Hostile(std::cell::Cell<bool>);
    impl Objective<f64> for Hostile {
        fn value(&self, _x: &Point<f64>) -> f64 {
            if self.0.replace(false) {
                1.0
            } else {
                f64::NAN
            }
        }
        fn gradient(&self, _x: &Point<f64>) -> Point<f64> {
            Point::dense(vec![1.0, 1.0])
        }
    }
    let oracle = L1Ball::new(2, 1.0).unwrap();
    let hostile = Hostile(std::cell::Cell::new(true));
    let result = run_ada_fw(&hostile, &oracle, &config(50, 0.0)).unwrap();
    assert_eq!(result.termination, Termination::BacktrackFailure);
    assert_eq!(result.trace.len(), 1);
}

#[test]
fn fixed_step_matches_adaptive_at_true_curvature() {
    // With the warm start off and L_{-1} = L, backtracking accepts the first
    // trial every time and both loops produce identical iterates.
    let q = common::random_quadratic(6, 0.3, 5);
    let known = q.lipschitz().unwrap();
    let oracle = L1Ball::new(6, 1.0).unwrap();
    let mut adaptive_config = config(120, 0.0);
    adaptive_config.warm_start = false;
    adaptive_config.init_lipschitz = Some(known);
    let adaptive = run_ada_fw(&q, &oracle, &adaptive_config).unwrap();
    let fixed = run_fixed_step_fw(&q, &oracle, &config(120, 0.0), known).unwrap();
    assert_eq!(adaptive.trace.len(), fixed.trace.len());
    for (a, f) in adaptive.trace.iter().zip(fixed.trace.iter()) {
        assert_eq!(a.objective, f.objective, "iter {}", a.iter);
        assert_eq!(a.step_size, f.step_size, "iter {}", a.iter);
        assert_eq!(a.lipschitz, f.lipschitz, "iter {}", a.iter);
    }
}

#[test]
fn fixed_step_overestimation_slows_convergence() {
    let dim = 10;
    // ||center||_1 = 0.825: interior optimum, so value(center) is exact
    let center: Vec<f64> = (0..dim).map(|i| 0.015 * (i as f64 + 1.0)).collect();
    let obj = shifted_quadratic(&center);
    let f_star = obj.value(&Point::dense(center));
    let oracle = L1Ball::new(dim, 1.0).unwrap();
    let ada = run_ada_fw(&obj, &oracle, &config(3000, 0.0)).unwrap();
    let fixed = run_fixed_step_fw(&obj, &oracle, &config(3000, 0.0), 10.0).unwrap();
    let ada_it = first_below(&ada.trace, f_star, 1e-6).expect("adaptive converges");
    let fixed_it = first_below(&fixed.trace, f_star, 1e-6).unwrap_or(usize::MAX);
    assert!(fixed_it >= 2 * ada_it.max(1), "ada {ada_it}, fixed {fixed_it}");
}

#[test]
fn fixed_step_clips_at_step_max() {
    // gap >= L ||d||^2 forces gamma = gamma_max = 1 on the first step
    let obj = shifted_quadratic(&[0.0, 3.0]);
    let oracle = L1Ball::new(2, 1.0).unwrap();
    let result = run_fixed_step_fw(&obj, &oracle, &config(1, 0.0), 1.0).unwrap();
    assert_eq!(result.trace[0].step_size, 1.0);
}

#[test]
fn lipschitz_stats_examples() {
    fn row(step_type: StepKind, lipschitz: f64) -> TraceRecord<f64> {
        TraceRecord {
            iter: 0,
            elapsed: 0.0,
            objective: 0.0,
            gap: 0.0,
            dual_gap: None,
            step_size: 0.0,
            lipschitz,
            step_type,
            backtrack_evals: 0,
            good_steps: 0,
            avg_lipschitz: None,
            max_lipschitz: None,
            directional_gap: 0.0,
            direction_norm_sq: 0.0,
        }
    }
    let trace = vec![row(StepKind::Good, 2.0), row(StepKind::Good, 2.0)];
    assert_eq!(lipschitz_stats(&trace).unwrap(), (2.0, 2.0));

    let trace = vec![
        row(StepKind::Good, 1.0),
        row(StepKind::Drop, 100.0),
        row(StepKind::Good, 3.0),
    ];
    assert_eq!(lipschitz_stats(&trace).unwrap(), (2.0, 3.0));

    let trace = vec![row(StepKind::Drop, 1.0)];
    assert!(lipschitz_stats(&trace).is_err());
}

#[test]
fn solvers_run_at_f32() {
    let q: Quadratic<f32> =
        Quadratic::new(vec![1.0, 0.0, 0.0, 2.0], vec![0.1, -0.2]).unwrap();
    let oracle: L1Ball<f32> = L1Ball::new(2, 1.0).unwrap();
    let cfg = SolverConfig::<f32> { max_iter: 200, tolerance: 1e-4, ..Default::default() };
    for result in [
        run_ada_fw(&q, &oracle, &cfg).unwrap(),
        run_ada_afw(&q, &oracle, &cfg).unwrap(),
        run_ada_pfw(&q, &oracle, &cfg).unwrap(),
        run_ada_mp(&q, &oracle, &cfg).unwrap(),
    ] {
        let last = result.trace.last().unwrap();
        assert!(last.objective.is_finite());
        assert!(last.objective <= result.trace[0].objective);
    }
}

#[test]
fn pfw_recovers_planted_signs_on_synthetic_logistic() {
    let (dataset, planted) = adafw::io::synth_l1_logistic::<f64>(100, 200, 0);
    let n = dataset.rows.len() as f64;
    let objective =
        adafw::objectives::LogisticL2::new(dataset.rows, dataset.dim, dataset.labels, 1.0 / n)
            .unwrap();
    let oracle = L1Ball::new(100, 2.0).unwrap();
    let result = run_ada_pfw(&objective, &oracle, &config(5000, 1e-10)).unwrap();
    let solution = result.x.to_dense();
    let peak = solution.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let mut checked = 0;
    let mut matched = 0;
    for (i, &coef) in planted.iter().enumerate() {
        if coef != 0.0 && solution[i].abs() > 0.05 * peak {
            checked += 1;
            if solution[i].signum() == coef.signum() {
                matched += 1;
            }
        }
    }
    assert!(checked >= 3, "too few recovered coefficients ({checked})");
    assert_eq!(matched, checked, "sign mismatches on the planted support");
}

#[test]
fn gap_tolerance_invariant_last_gap_below_delta_epsilon() {
    let q = synth_simplex_quadratic::<f64>(5, 2).unwrap();
    let oracle = Simplex::new(5);
    let mut cfg = config(10_000, 1e-9);
    cfg.lmo_quality = 0.7;
    let result = run_ada_afw(&q, &oracle, &cfg).unwrap();
    assert_eq!(result.termination, Termination::GapTolerance);
    let last = result.trace.last().unwrap();
    assert!(last.directional_gap <= 0.7 * 1e-9);
}
