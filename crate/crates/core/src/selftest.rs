//! A self-contained invariant checklist: oracle optimality against
//! brute-force decompositions, Moreau-envelope properties, rate-bound
//! envelopes, and the hybrid-to-standard reduction. The CLI `selftest`
//! subcommand runs [`run_all`] and reports one line per check.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{
    dominant_eigpair, jacobi_eig, power_svd, singular_values, DenseMatrix, DenseVector, Point,
};
use crate::oracles::{
    lmo_l1_ball, lmo_psd_trace_ball, lmo_spectrahedron, lmo_trace_ball, moreau_gradient,
    moreau_value, IdentityMap, L1Ball, L1Norm, LipschitzTerm, MatrixOperator, SmoothTerm,
};
use crate::solvers::{cg_rate_bound, cg_solve, hcgs_solve, Schedule, SolverConfig};

/// Outcome of one named invariant check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &'static str) -> Self {
        Self {
            name,
            passed: true,
            detail: String::new(),
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        Self {
            name,
            passed: false,
            detail,
        }
    }
}

fn rand_vector(dim: usize, rng: &mut ChaCha8Rng) -> DenseVector {
    DenseVector::from_fn(dim, |_| 2.0 * rng.random::<f64>() - 1.0)
}

fn rand_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| 2.0 * rng.random::<f64>() - 1.0)
}

/// Moreau sandwich `g_b <= g <= g_b + b L^2 / 2` and its two-parameter
/// refinement, evaluated on random points. Generic over the term so a
/// corrupted prox is caught by name.
pub fn moreau_sandwich_check<G: LipschitzTerm<DenseVector>>(
    g: &G,
    dim: usize,
    points: usize,
    seed: u64,
) -> CheckResult {
    const NAME: &str = "moreau-sandwich";
    let lg = g.lipschitz_const();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..points {
        let x = rand_vector(dim, &mut rng);
        let beta = 0.05 + 0.1 * (i % 10) as f64;
        let gb = match moreau_value(g, beta, &x) {
            Ok(v) => v,
            Err(e) => return CheckResult::fail(NAME, e.to_string()),
        };
        let gx = g.value(&x);
        if gb > gx + 1e-10 {
            return CheckResult::fail(
                NAME,
                format!("g_beta(x) = {gb} exceeds g(x) = {gx} at beta = {beta}"),
            );
        }
        if gx > gb + 0.5 * beta * lg * lg + 1e-10 {
            return CheckResult::fail(
                NAME,
                format!("upper sandwich violated: g = {gx}, envelope bound = {}",
                    gb + 0.5 * beta * lg * lg),
            );
        }
        let beta2 = 2.0 * beta;
        let gb2 = moreau_value(g, beta2, &x).unwrap_or(f64::INFINITY);
        if gb2 > gb + 1e-10 || gb > gb2 + 0.5 * (beta2 - beta) * lg * lg + 1e-10 {
            return CheckResult::fail(NAME, "two-parameter sandwich violated".into());
        }
    }
    CheckResult::pass(NAME)
}

/// Envelope gradient against central finite differences of the envelope.
pub fn moreau_gradient_check<G: LipschitzTerm<DenseVector>>(
    g: &G,
    dim: usize,
    points: usize,
    seed: u64,
) -> CheckResult {
    const NAME: &str = "moreau-gradient-fd";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..points {
        let x = rand_vector(dim, &mut rng);
        let beta = 0.35;
        let grad = match moreau_gradient(g, beta, &x) {
            Ok(v) => v,
            Err(e) => return CheckResult::fail(NAME, e.to_string()),
        };
        let mut fd = DenseVector::zeros(dim);
        for i in 0..dim {
            let h = 1e-6 * (1.0 + x[i].abs());
            let mut xp = x.clone();
            xp[i] += h;
            let mut xm = x.clone();
            xm[i] -= h;
            fd[i] = (moreau_value(g, beta, &xp).unwrap() - moreau_value(g, beta, &xm).unwrap())
                / (2.0 * h);
        }
        let mut diff = fd;
        diff.axpy(-1.0, &grad);
        if diff.norm() > 1e-5 * grad.norm().max(1.0) {
            return CheckResult::fail(NAME, format!("fd mismatch {:.3e}", diff.norm()));
        }
    }
    CheckResult::pass(NAME)
}

pub fn prox_nonexpansive_check<G: LipschitzTerm<DenseVector>>(
    g: &G,
    dim: usize,
    pairs: usize,
    seed: u64,
) -> CheckResult {
    const NAME: &str = "prox-nonexpansive";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..pairs {
        let x = rand_vector(dim, &mut rng);
        let y = rand_vector(dim, &mut rng);
        let beta = 0.4;
        let mut dp = g.prox(&x, beta);
        dp.axpy(-1.0, &g.prox(&y, beta));
        let mut dxy = x;
        dxy.axpy(-1.0, &y);
        if dp.norm() > dxy.norm() + 1e-12 {
            return CheckResult::fail(
                NAME,
                format!("prox expanded a pair: {} > {}", dp.norm(), dxy.norm()),
            );
        }
    }
    CheckResult::pass(NAME)
}

/// l1-ball LMO against enumeration of all signed vertices.
pub fn lmo_l1_check(dim: usize, trials: usize, seed: u64) -> CheckResult {
    const NAME: &str = "lmo-l1-optimality";
    let b = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let z = rand_vector(dim, &mut rng);
        let y = match lmo_l1_ball(&z, b) {
            Ok(y) => y,
            Err(e) => return CheckResult::fail(NAME, e.to_string()),
        };
        let attained = y.dot(&z);
        for i in 0..dim {
            for s in [-1.0, 1.0] {
                let mut v = DenseVector::zeros(dim);
                v[i] = s * b;
                if v.dot(&z) > attained + 1e-12 {
                    return CheckResult::fail(
                        NAME,
                        format!("vertex {i} (sign {s}) beats the oracle"),
                    );
                }
            }
        }
    }
    CheckResult::pass(NAME)
}

/// Trace-ball LMO value against the dominant singular value from the
/// Jacobi SVD.
pub fn lmo_trace_check(dim: usize, trials: usize, seed: u64) -> CheckResult {
    const NAME: &str = "lmo-trace-optimality";
    let b = 1.3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let z = rand_matrix(dim, dim, &mut rng);
        let sigma1 = singular_values(&z)[0];
        let lmo = match lmo_trace_ball(&z, b, 1e-8, 20_000, seed ^ t as u64) {
            Ok(l) => l,
            Err(e) => return CheckResult::fail(NAME, e.to_string()),
        };
        let attained = lmo.point.frob_dot(&z);
        if attained < (1.0 - 1e-6) * b * sigma1 {
            return CheckResult::fail(
                NAME,
                format!("attained {attained} < (1 - 1e-6) * {}", b * sigma1),
            );
        }
    }
    CheckResult::pass(NAME)
}

/// Spectrahedron LMO value against the maximum eigenvalue from the Jacobi
/// eigensolver.
pub fn lmo_spectrahedron_check(dim: usize, trials: usize, seed: u64) -> CheckResult {
    const NAME: &str = "lmo-spectrahedron-optimality";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let z = rand_matrix(dim, dim, &mut rng).symmetrized();
        let lam_max = jacobi_eig(&z).max();
        let lmo = match lmo_spectrahedron(&z, 1e-8, 50_000, seed ^ t as u64) {
            Ok(l) => l,
            Err(e) => return CheckResult::fail(NAME, e.to_string()),
        };
        let attained = lmo.point.frob_dot(&z);
        if attained < lam_max - 1e-6 * lam_max.abs().max(1.0) {
            return CheckResult::fail(NAME, format!("attained {attained} < {lam_max}"));
        }
        if (lmo.point.trace() - 1.0).abs() > 1e-12 {
            return CheckResult::fail(NAME, "output trace differs from 1".into());
        }
    }
    CheckResult::pass(NAME)
}

pub fn lmo_psd_trace_check(dim: usize, trials: usize, seed: u64) -> CheckResult {
    const NAME: &str = "lmo-psd-trace-optimality";
    let b = 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let z = rand_matrix(dim, dim, &mut rng).symmetrized();
        let lam_max = jacobi_eig(&z).max();
        let lmo = match lmo_psd_trace_ball(&z, b, 1e-8, 50_000, seed ^ t as u64) {
            Ok(l) => l,
            Err(e) => return CheckResult::fail(NAME, e.to_string()),
        };
        let attained = lmo.point.frob_dot(&z);
        let ideal = (b * lam_max).max(0.0);
        if (attained - ideal).abs() > 1e-6 * ideal.max(1.0) {
            return CheckResult::fail(NAME, format!("attained {attained} vs ideal {ideal}"));
        }
    }
    CheckResult::pass(NAME)
}

/// Power-iteration dominant singular value against the Jacobi SVD oracle.
pub fn power_svd_check(dim: usize, trials: usize, seed: u64) -> CheckResult {
    const NAME: &str = "power-svd-oracle";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let z = rand_matrix(dim, dim, &mut rng);
        let sigma1 = singular_values(&z)[0];
        match power_svd(&z, 1e-9, 20_000, seed ^ t as u64) {
            Ok(r) if r.converged => {
                let rel = (r.value - sigma1).abs() / sigma1.max(1e-300);
                if rel > 1e-8 {
                    return CheckResult::fail(NAME, format!("rel err {rel:.3e}"));
                }
            }
            Ok(_) => return CheckResult::fail(NAME, "power iteration did not converge".into()),
            Err(e) => return CheckResult::fail(NAME, e.to_string()),
        }
    }
    CheckResult::pass(NAME)
}

/// Shifted power iteration eigenvalue against the Jacobi eigensolver.
pub fn eigpair_check(dim: usize, trials: usize, seed: u64) -> CheckResult {
    const NAME: &str = "eigpair-oracle";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let z = rand_matrix(dim, dim, &mut rng).symmetrized();
        let lam_max = jacobi_eig(&z).max();
        match dominant_eigpair(&z, 1e-10, 50_000, seed ^ t as u64) {
            Ok(r) if r.converged => {
                let rel = (r.value - lam_max).abs() / lam_max.abs().max(1e-300);
                if rel > 1e-8 {
                    return CheckResult::fail(NAME, format!("rel err {rel:.3e}"));
                }
            }
            Ok(_) => return CheckResult::fail(NAME, "power iteration did not converge".into()),
            Err(e) => return CheckResult::fail(NAME, e.to_string()),
        }
    }
    CheckResult::pass(NAME)
}

pub fn adjoint_check(seed: u64) -> CheckResult {
    const NAME: &str = "linear-map-adjoint";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let op = MatrixOperator::new(rand_matrix(7, 5, &mut rng));
    for _ in 0..25 {
        let x = rand_vector(5, &mut rng);
        let y = rand_vector(7, &mut rng);
        let lhs = crate::oracles::LinearMap::apply(&op, &x).dot(&y);
        let rhs = x.dot(&crate::oracles::LinearMap::adjoint(&op, &y));
        if (lhs - rhs).abs() > 1e-10 * lhs.abs().max(1.0) {
            return CheckResult::fail(NAME, format!("<Ax,y> = {lhs} vs <x,A*y> = {rhs}"));
        }
    }
    CheckResult::pass(NAME)
}

struct HalfSquaredDistance {
    a: DenseVector,
}

impl SmoothTerm<DenseVector> for HalfSquaredDistance {
    fn value(&self, x: &DenseVector) -> f64 {
        let mut d = x.clone();
        d.axpy(-1.0, &self.a);
        0.5 * d.dot(&d)
    }

    fn gradient(&self, x: &DenseVector) -> DenseVector {
        let mut d = x.clone();
        d.axpy(-1.0, &self.a);
        d
    }

    fn holder_const(&self) -> f64 {
        1.0
    }
}

/// Conditional gradient gap stays under `8 L rho^2 / (k+1)` on a quadratic
/// over the l1 ball (minimizer at the origin).
pub fn cg_rate_check() -> CheckResult {
    const NAME: &str = "cg-rate-envelope";
    let dim = 10;
    let mut f = HalfSquaredDistance {
        a: DenseVector::zeros(dim),
    };
    let domain = L1Ball::new(1.0);
    let schedule = Schedule::standard_cg();
    let config = SolverConfig::new(300).with_tol(0.0).with_seed(4);
    let x1 = DenseVector::basis(dim, 0);
    match cg_solve(&mut f, &domain, &schedule, &config, x1) {
        Ok(report) => {
            for row in &report.trace {
                if row.objective > cg_rate_bound(row.k, 1.0, 1.0) {
                    return CheckResult::fail(
                        NAME,
                        format!("gap {} above bound at k = {}", row.objective, row.k),
                    );
                }
            }
            CheckResult::pass(NAME)
        }
        Err(e) => CheckResult::fail(NAME, e.to_string()),
    }
}

/// `hcgs_solve` with no composite term reproduces `cg_solve` bit for bit.
pub fn hybrid_reduction_check() -> CheckResult {
    const NAME: &str = "hybrid-reduction";
    let dim = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let a = rand_vector(dim, &mut rng);
    let domain = L1Ball::new(1.0);
    let schedule = Schedule::standard_cg();
    let config = SolverConfig::new(60).with_tol(0.0).with_seed(9);
    let x1 = DenseVector::basis(dim, 3);

    let mut f1 = HalfSquaredDistance { a: a.clone() };
    let cg = match cg_solve(&mut f1, &domain, &schedule, &config, x1.clone()) {
        Ok(r) => r,
        Err(e) => return CheckResult::fail(NAME, e.to_string()),
    };
    let mut f2 = HalfSquaredDistance { a };
    let hy = match hcgs_solve::<_, DenseVector, _, L1Norm, _, _>(
        Some(&mut f2),
        None,
        &IdentityMap,
        &domain,
        &schedule,
        &config,
        x1,
    ) {
        Ok(r) => r,
        Err(e) => return CheckResult::fail(NAME, e.to_string()),
    };
    if cg.trace.len() != hy.trace.len() {
        return CheckResult::fail(NAME, "trace lengths differ".into());
    }
    for (a, b) in cg.trace.iter().zip(&hy.trace) {
        if a.objective.to_bits() != b.objective.to_bits() {
            return CheckResult::fail(
                NAME,
                format!("objective diverges at k = {}: {} vs {}", a.k, a.objective, b.objective),
            );
        }
    }
    for (x, y) in cg
        .final_point
        .as_slice()
        .iter()
        .zip(hy.final_point.as_slice())
    {
        if x.to_bits() != y.to_bits() {
            return CheckResult::fail(NAME, "final points differ".into());
        }
    }
    CheckResult::pass(NAME)
}

/// Run every check with its default sizing. Intended budget: a few seconds.
pub fn run_all() -> Vec<CheckResult> {
    let g = L1Norm::new(0.8, 6);
    vec![
        moreau_sandwich_check(&g, 6, 1000, 101),
        moreau_gradient_check(&g, 6, 50, 102),
        prox_nonexpansive_check(&g, 8, 200, 103),
        lmo_l1_check(8, 300, 104),
        lmo_trace_check(6, 60, 105),
        lmo_spectrahedron_check(8, 60, 106),
        lmo_psd_trace_check(8, 60, 107),
        power_svd_check(6, 60, 108),
        eigpair_check(8, 60, 109),
        adjoint_check(110),
        cg_rate_check(),
        hybrid_reduction_check(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_checkout_passes_all_checks() {
        for r in run_all() {
            assert!(r.passed, "{} failed: {}", r.name, r.detail);
        }
    }

    #[test]
    fn corrupted_soft_threshold_fails_moreau_sandwich_by_name() {
        // Sign-flipped threshold: the "prox" expands instead of shrinking,
        // so the envelope rises above g and the sandwich breaks.
        struct CorruptedL1 {
            weight: f64,
        }
        impl LipschitzTerm<DenseVector> for CorruptedL1 {
            fn value(&self, x: &DenseVector) -> f64 {
                self.weight * x.l1_norm()
            }
            fn prox(&self, x: &DenseVector, beta: f64) -> DenseVector {
                // gamma sign flip relative to soft thresholding
                let gamma = -beta * self.weight;
                let mut out = x.clone();
                for e in out.entries_mut() {
                    let a = e.abs() - gamma;
                    *e = if a > 0.0 { e.signum() * a } else { 0.0 };
                }
                out
            }
            fn lipschitz_const(&self) -> f64 {
                self.weight * (6f64).sqrt()
            }
        }
        let bad = CorruptedL1 { weight: 0.8 };
        let r = moreau_sandwich_check(&bad, 6, 200, 55);
        assert!(!r.passed);
        assert_eq!(r.name, "moreau-sandwich");
    }
}
