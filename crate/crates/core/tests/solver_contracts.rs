//! Cross-checks of the solvers against independent brute-force references.

mod common;

use common::{project_l1, qp_reference_objective, random_vector};
use rand::Rng;
use hcgs_core::linalg::{DenseMatrix, DenseVector, Point};
use hcgs_core::oracles::{IdentityMap, L1Ball, L1Norm, L2Ball, LipschitzTerm, NullSmooth};
use hcgs_core::problems::QuadraticForm;
use hcgs_core::solvers::{
    default_schedule, hcgs_solve, vertex_start, SolverConfig,
};

#[test]
fn l1_projection_oracle_satisfies_kkt() {
    // Feasibility, and optimality against random feasible perturbations.
    for seed in 0..50u64 {
        let v = {
            let mut v = random_vector(12, seed);
            v.scale_mut(2.5);
            v
        };
        let b = 1.0;
        let p = project_l1(&v, b);
        assert!(p.l1_norm() <= b * (1.0 + 1e-12));
        let dist = |x: &DenseVector| {
            let mut d = x.clone();
            d.axpy(-1.0, &v);
            d.dot(&d)
        };
        let dp = dist(&p);
        for probe in 0..40u64 {
            let mut w = random_vector(12, 7000 + 50 * seed + probe);
            let n1 = w.l1_norm();
            if n1 > b {
                w.scale_mut(b / n1);
            }
            assert!(
                dp <= dist(&w) + 1e-10,
                "seed {seed}: projection beaten by a feasible probe"
            );
        }
    }
}

#[test]
fn hcgs_matches_subgradient_reference_on_lipschitz_problem() {
    // f = 0, g = lambda ||.||_1 over the l2 ball: minimum value 0.
    let dim = 5;
    let lambda = 2.0;
    let radius = 1.0;
    let g = L1Norm::new(lambda, dim);
    let domain = L2Ball::new(radius);
    let schedule = default_schedule(
        radius,
        1.0,
        <L1Norm as LipschitzTerm<DenseVector>>::lipschitz_const(&g),
    );
    let config = SolverConfig::new(20_000).with_tol(0.0).with_seed(3);
    let x1 = vertex_start(&domain, &DenseVector::zeros(dim), 11);
    let report = hcgs_solve::<_, _, NullSmooth, _, _, _>(
        None,
        Some(&g),
        &IdentityMap,
        &domain,
        &schedule,
        &config,
        x1,
    )
    .unwrap();
    let reference = common::l2_ball_subgradient_reference(dim, lambda, radius, 100_000, 5);
    let gap = (report.final_objective().unwrap() - reference).abs();
    assert!(gap <= 1e-3, "gap vs subgradient reference: {gap}");
}

#[test]
fn sparse_qp_matches_proximal_reference() {
    // Well-conditioned dense QP with an l1 penalty over the l1 ball.
    let d = 30;
    let mut r = common::rng(77);
    let m = DenseMatrix::from_fn(d, d, |_, _| 2.0 * r.random::<f64>() - 1.0);
    let mut q = m.transpose().matmul(&m).symmetrized();
    q.scale_mut(1.0 / d as f64);
    for i in 0..d {
        q.set(i, i, q.get(i, i) + 0.5);
    }
    let c = DenseVector::from_fn(d, |_| 0.5 * r.random::<f64>() - 0.25);
    let (mu, b) = (0.02, 1.0);

    let reference = qp_reference_objective(&q, &c, mu, b, 50_000);

    let domain = L1Ball::new(b);
    let x1 = vertex_start(&domain, &DenseVector::zeros(d), 19);
    let mut f = QuadraticForm::with_start(q.clone(), c.clone(), &x1);
    let g = L1Norm::new(mu, d);
    let schedule = default_schedule(
        b,
        1.0,
        <L1Norm as LipschitzTerm<DenseVector>>::lipschitz_const(&g),
    );
    let config = SolverConfig::new(300_000).with_tol(0.0).with_seed(7).with_period(1000);
    let report = hcgs_solve(
        Some(&mut f),
        Some(&g),
        &IdentityMap,
        &domain,
        &schedule,
        &config,
        x1,
    )
    .unwrap();
    let final_obj = report.final_objective().unwrap();
    let gap = final_obj - reference;
    assert!(
        gap.abs() <= 1e-3,
        "hybrid {final_obj} vs reference {reference}: gap {gap}"
    );
}
