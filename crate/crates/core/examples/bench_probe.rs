use std::time::Instant;

use hcgs_core::linalg::{singular_values, trace_norm, DenseMatrix, Point};
use hcgs_core::problems::{gen_recovery_instance, solve_recovery_hcgs};
use hcgs_core::baselines::{gfb_solve, ProxSplitConfig};
use hcgs_core::solvers::SolverConfig;

fn main() {
    for n in [50usize, 100, 200, 800] {
        let inst = gen_recovery_instance(n, 5, 0.9, 1e-4, 0.4, 1).unwrap();
        let t0 = Instant::now();
        let sv = singular_values(&inst.observations);
        let dt = t0.elapsed().as_secs_f64();
        println!("svd values n={n}: {:.4}s (sigma1 = {:.4})", dt, sv[0]);
    }

    // HCGS time/iter at 200 and 800 (fixed iteration budget, timing only).
    for (n, iters) in [(200usize, 120usize), (800, 60)] {
        let inst = gen_recovery_instance(n, 5, 0.9, 1e-4, 0.4, 1).unwrap();
        let tau = inst.observations.norm(); // cheap scale proxy
        let l1 = 1.0 / (n * n) as f64;
        let config = SolverConfig::new(iters).with_tol(0.0).with_seed(2).with_period(iters);
        let t0 = Instant::now();
        let report = solve_recovery_hcgs(&inst, l1, tau, &config).unwrap();
        let wall = t0.elapsed().as_secs_f64();
        println!(
            "hcgs n={n}: {iters} iters, solver time {:.3}s ({:.5} s/iter), wall {:.3}s, lmo fails {}",
            report.solver_seconds(),
            report.solver_seconds() / iters as f64,
            wall,
            report.warnings.lmo_nonconverged,
        );
    }

    // GFB time/iter at 200 and 800.
    for (n, iters) in [(200usize, 8usize), (800, 3)] {
        let inst = gen_recovery_instance(n, 5, 0.9, 1e-4, 0.4, 1).unwrap();
        let (l1, l2) = (1.0 / (n * n) as f64, 1e-3 / (n * n) as f64);
        let config = ProxSplitConfig::defaults(inst.p_obs)
            .with_tol(0.0)
            .with_max_iters(iters);
        let t0 = Instant::now();
        let report = gfb_solve(&inst, l1, l2, &config).unwrap();
        let wall = t0.elapsed().as_secs_f64();
        println!(
            "gfb n={n}: {iters} iters, solver time {:.3}s ({:.4} s/iter), wall {:.3}s, tau = {:.3}",
            report.solver_seconds(),
            report.solver_seconds() / iters as f64,
            wall,
            trace_norm(&report.final_point),
        );
    }
}
