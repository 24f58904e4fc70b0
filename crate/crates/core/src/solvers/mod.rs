//! The two generic solver engines: the generalized conditional gradient
//! method ([`cg_solve`]) and the hybrid conditional gradient - smoothing
//! method ([`hcgs_solve`]), together with step/smoothing schedules, the
//! relative-change stopping rule, and evaluators for their theoretical rate
//! bounds.
//!
//! Both engines touch the feasible set only through the domain's linear
//! minimization oracle and keep iterates feasible purely by convex
//! combination; no projection is ever taken.

use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::Point;
use crate::oracles::{moreau_value, BoundedDomain, LinearMap, LipschitzTerm, SmoothTerm};
use crate::{Error, Result};

/// Feasibility tolerance for starting points and iterate checks.
pub const FEASIBILITY_TOL: f64 = 1e-8;

/// Smallest smoothing parameter used in step (I); schedules that fall below
/// are floored here and the event is counted on the report.
pub const BETA_FLOOR: f64 = 1e-12;

/// Step-size and smoothing schedules `k -> alpha_k`, `k -> beta_k`.
///
/// `alpha_k` must lie in `[0, 1]` and `beta_k` must be positive and
/// nonincreasing; `alpha_1 = 1` is required for the hybrid convergence bound
/// to be certified.
pub struct Schedule {
    alpha: Box<dyn Fn(usize) -> f64 + Send + Sync>,
    beta: Box<dyn Fn(usize) -> f64 + Send + Sync>,
}

impl Schedule {
    pub fn new(
        alpha: impl Fn(usize) -> f64 + Send + Sync + 'static,
        beta: impl Fn(usize) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            alpha: Box::new(alpha),
            beta: Box::new(beta),
        }
    }

    /// `alpha_k = 2 / (k + 1)` with no smoothing (for pure conditional
    /// gradient solves).
    pub fn standard_cg() -> Self {
        Self::new(|k| 2.0 / (k as f64 + 1.0), |_| 1.0)
    }

    pub fn alpha(&self, k: usize) -> f64 {
        (self.alpha)(k)
    }

    pub fn beta(&self, k: usize) -> f64 {
        (self.beta)(k)
    }
}

/// The default hybrid schedule `alpha_k = 2/(k+1)`, `beta_k = beta / sqrt(k)`
/// with `beta = 2 sqrt(2) rho ||A|| / L_g` (the asymptotically optimal
/// choice). When there is no composite term (`a_norm = 0` or `l_g <= 0`) the
/// smoothing sequence is unused and `beta = 1`.
pub fn default_schedule(rho: f64, a_norm: f64, l_g: f64) -> Schedule {
    let beta0 = if a_norm > 0.0 && l_g > 0.0 {
        2.0 * std::f64::consts::SQRT_2 * rho * a_norm / l_g
    } else {
        1.0
    };
    Schedule::new(
        |k| 2.0 / (k as f64 + 1.0),
        move |k| beta0 / (k as f64).sqrt(),
    )
}

/// Iteration budget, stopping tolerance, objective evaluation cadence, and
/// the seed that drives every randomized oracle call of a solve.
#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Stop when the relative change between consecutive objective
    /// evaluations falls strictly below this value; `0` disables stopping.
    pub rel_change_tol: f64,
    /// Evaluate the objective every this many iterations.
    pub objective_eval_period: usize,
    pub seed: u64,
}

impl SolverConfig {
    pub fn new(max_iters: usize) -> Self {
        Self {
            max_iters,
            rel_change_tol: 1e-7,
            objective_eval_period: 1,
            seed: 0,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.rel_change_tol = tol;
        self
    }

    pub fn with_period(mut self, period: usize) -> Self {
        self.objective_eval_period = period;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be >= 1".into()));
        }
        if self.objective_eval_period == 0 {
            return Err(Error::InvalidParameter(
                "objective_eval_period must be >= 1".into(),
            ));
        }
        if self.rel_change_tol < 0.0 {
            return Err(Error::InvalidParameter(
                "rel_change_tol must be >= 0".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TerminationReason {
    /// The relative-change stopping rule fired.
    Tolerance,
    /// The iteration budget was exhausted.
    MaxIters,
}

/// One objective evaluation: row `k` holds values at the iterate `x_{k+1}`
/// produced by iteration `k`.
#[derive(Clone, Copy, Debug)]
pub struct TraceRow {
    pub k: usize,
    pub objective: f64,
    pub smoothed_objective: f64,
    /// Relative change against the previous evaluation; `inf` on the first.
    pub rel_change: f64,
    /// Cumulative time spent inside solver iterations (oracle calls and
    /// updates), excluding objective evaluations done for reporting.
    pub elapsed_seconds: f64,
}

/// Counts of in-solve anomalies that were worked around rather than fatal.
#[derive(Clone, Copy, Debug, Default)]
pub struct SolveWarnings {
    /// LMO calls whose inner spectral iteration hit its budget.
    pub lmo_nonconverged: usize,
    /// Iterations where the schedule's beta fell below [`BETA_FLOOR`].
    pub beta_floored: usize,
}

/// Everything a solve produced: the final iterate, the objective trace, and
/// how the run ended.
#[derive(Clone, Debug)]
pub struct SolveReport<P> {
    pub final_point: P,
    pub iterations_run: usize,
    pub trace: Vec<TraceRow>,
    pub termination: TerminationReason,
    pub warnings: SolveWarnings,
}

impl<P> SolveReport<P> {
    pub fn final_objective(&self) -> Option<f64> {
        self.trace.last().map(|r| r.objective)
    }

    pub fn final_rel_change(&self) -> Option<f64> {
        self.trace.last().map(|r| r.rel_change)
    }

    pub fn solver_seconds(&self) -> f64 {
        self.trace.last().map(|r| r.elapsed_seconds).unwrap_or(0.0)
    }

    /// Write the trace as CSV with the schema
    /// `k,objective,smoothed_objective,rel_change,elapsed_seconds`.
    pub fn write_trace_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "k,objective,smoothed_objective,rel_change,elapsed_seconds")?;
        for r in &self.trace {
            writeln!(
                w,
                "{},{},{},{},{}",
                r.k, r.objective, r.smoothed_objective, r.rel_change, r.elapsed_seconds
            )?;
        }
        Ok(())
    }
}

/// Relative change `|(curr - prev) / prev|`, falling back to the absolute
/// change when the previous value is exactly zero.
pub fn relative_change(prev: f64, curr: f64) -> f64 {
    if prev != 0.0 {
        ((curr - prev) / prev).abs()
    } else {
        (curr - prev).abs()
    }
}

/// The stopping decision on a recorded trace: true once the relative change
/// between the last two objective evaluations is strictly below `tol`.
/// Requires at least two evaluations.
pub fn stop_on_relative_change(trace: &[TraceRow], tol: f64) -> bool {
    match trace {
        [.., a, b] => relative_change(a.objective, b.objective) < tol,
        _ => false,
    }
}

/// The conditional gradient rate bound `8 L rho^2 / (k + 1)` on the
/// objective gap at `x_{k+1}` under `alpha_k = 2/(k+1)`.
pub fn cg_rate_bound(k: usize, l: f64, rho: f64) -> f64 {
    debug_assert!(k >= 1);
    8.0 * l * rho * rho / (k as f64 + 1.0)
}

/// The hybrid rate bound on the objective gap at `x_{k+1}` under
/// `alpha_k = 2/(k+1)`, `beta_k = beta / sqrt(k)`:
///
/// ```text
/// (4 rho)^(p+1) L_f / ((p+1) (k+1)^p)
///   + 8 rho^2 ||A||^2 / (beta sqrt(k+1))
///   + L_g^2 beta sqrt(k+2) / (2 k)
///   + L_g^2 beta / (2 sqrt(k+1))
/// ```
#[allow(clippy::too_many_arguments)]
pub fn hcgs_rate_bound(
    k: usize,
    p: f64,
    l_f: f64,
    rho: f64,
    a_norm: f64,
    beta: f64,
    l_g: f64,
) -> f64 {
    debug_assert!(k >= 1);
    debug_assert!(p > 0.0 && p <= 1.0);
    debug_assert!(beta > 0.0);
    let kf = k as f64;
    let smooth = (4.0 * rho).powf(p + 1.0) * l_f / ((p + 1.0) * (kf + 1.0).powf(p));
    let composite = 8.0 * rho * rho * a_norm * a_norm / (beta * (kf + 1.0).sqrt());
    let smoothing_decay = 0.5 * l_g * l_g * beta * (kf + 2.0).sqrt() / kf;
    let smoothing_tail = l_g * l_g * beta / (2.0 * (kf + 1.0).sqrt());
    smooth + composite + smoothing_decay + smoothing_tail
}

/// Deterministic per-iteration seed for LMO calls, derived from the solve
/// seed by a splitmix64 step.
pub(crate) fn lmo_seed(base: u64, k: usize) -> u64 {
    let mut z = base ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A parsimonious feasible start: the domain's LMO applied to a seeded
/// random direction, which lands on a vertex / extreme point.
pub fn vertex_start<P: Point, D: BoundedDomain<P>>(domain: &D, prototype: &P, seed: u64) -> P {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dir = prototype.zeros_like();
    for e in dir.entries_mut() {
        *e = 2.0 * rng.random::<f64>() - 1.0;
    }
    domain.linear_maximizer(&dir, lmo_seed(seed, 0)).point
}

fn check_start<P: Point, D: BoundedDomain<P>>(x1: &P, domain: &D) -> Result<()> {
    if !x1.is_finite() {
        return Err(Error::InvalidInput(
            "starting point has non-finite entries".into(),
        ));
    }
    let resid = domain.membership_residual(x1);
    if resid > FEASIBILITY_TOL {
        return Err(Error::InvalidInput(format!(
            "starting point is infeasible: membership residual {resid:.3e}"
        )));
    }
    Ok(())
}

fn check_alpha(alpha: f64, k: usize) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "schedule produced alpha_{k} = {alpha}, outside [0, 1]"
        )));
    }
    Ok(())
}

/// Generalized conditional gradient: minimize `f(x)` over the domain.
///
/// Each iteration takes one gradient and one LMO call and updates by convex
/// combination, so every iterate stays feasible. The trace records
/// `f(x_{k+1})` per evaluation; the smoothed objective column coincides with
/// the objective (there is no smoothing here).
pub fn cg_solve<P, F, D>(
    f: &mut F,
    domain: &D,
    schedule: &Schedule,
    config: &SolverConfig,
    x1: P,
) -> Result<SolveReport<P>>
where
    P: Point,
    F: SmoothTerm<P>,
    D: BoundedDomain<P>,
{
    cg_solve_observed(f, domain, schedule, config, x1, |_, _| {})
}

/// [`cg_solve`] with a per-iteration observer called as `(k, &x_{k+1})`
/// outside the timed section.
pub fn cg_solve_observed<P, F, D>(
    f: &mut F,
    domain: &D,
    schedule: &Schedule,
    config: &SolverConfig,
    x1: P,
    mut observer: impl FnMut(usize, &P),
) -> Result<SolveReport<P>>
where
    P: Point,
    F: SmoothTerm<P>,
    D: BoundedDomain<P>,
{
    config.validate()?;
    check_start(&x1, domain)?;

    let mut x = x1;
    let mut trace: Vec<TraceRow> = Vec::new();
    let mut prev_obj: Option<f64> = None;
    let mut iter_time = Duration::ZERO;
    let mut warnings = SolveWarnings::default();
    let mut termination = TerminationReason::MaxIters;
    let mut iterations_run = 0;

    for k in 1..=config.max_iters {
        iterations_run = k;
        let t0 = Instant::now();

        let mut z = f.gradient(&x);
        z.scale_mut(-1.0);
        let lmo = domain.linear_maximizer(&z, lmo_seed(config.seed, k));
        if !lmo.converged {
            warnings.lmo_nonconverged += 1;
        }
        let alpha = schedule.alpha(k);
        check_alpha(alpha, k)?;
        x.combine(alpha, &lmo.point);
        f.step_update(&x, &lmo.point, alpha);

        iter_time += t0.elapsed();
        observer(k, &x);

        if k % config.objective_eval_period == 0 || k == config.max_iters {
            let objective = f.value(&x);
            let rel = match prev_obj {
                Some(p) => relative_change(p, objective),
                None => f64::INFINITY,
            };
            trace.push(TraceRow {
                k,
                objective,
                smoothed_objective: objective,
                rel_change: rel,
                elapsed_seconds: iter_time.as_secs_f64(),
            });
            if prev_obj.is_some() && rel < config.rel_change_tol {
                termination = TerminationReason::Tolerance;
                break;
            }
            prev_obj = Some(objective);
        }
    }

    if warnings.lmo_nonconverged > 0 {
        log::warn!(
            "cg_solve: {} LMO call(s) did not converge within budget",
            warnings.lmo_nonconverged
        );
    }

    Ok(SolveReport {
        final_point: x,
        iterations_run,
        trace,
        termination,
        warnings,
    })
}

/// Hybrid conditional gradient - smoothing: minimize
/// `f(x) + g(Ax)` over the domain, where `g` enters only through its
/// proximity operator via the shrinking Moreau envelope `g_{beta_k}`.
///
/// `f = None` runs the Lipschitz-only variant (the gradient term drops from
/// step (I)); `g = None` reduces to the standard conditional gradient and
/// produces, for identical seeds, a trace bit-identical to [`cg_solve`]
/// (timing aside). At least one of the two must be present.
///
/// The trace records both the true objective `f + g(A·)` and the smoothed
/// objective `f + g_{beta_k}(A·)`; the stopping rule watches the true
/// objective, which is what the algorithm minimizes in the limit.
pub fn hcgs_solve<P, Q, F, G, A, D>(
    f: Option<&mut F>,
    g: Option<&G>,
    a: &A,
    domain: &D,
    schedule: &Schedule,
    config: &SolverConfig,
    x1: P,
) -> Result<SolveReport<P>>
where
    P: Point,
    Q: Point,
    F: SmoothTerm<P>,
    G: LipschitzTerm<Q>,
    A: LinearMap<P, Q>,
    D: BoundedDomain<P>,
{
    hcgs_solve_observed(f, g, a, domain, schedule, config, x1, |_, _| {})
}

/// [`hcgs_solve`] with a per-iteration observer called as `(k, &x_{k+1})`
/// outside the timed section.
#[allow(clippy::too_many_arguments)]
pub fn hcgs_solve_observed<P, Q, F, G, A, D>(
    mut f: Option<&mut F>,
    g: Option<&G>,
    a: &A,
    domain: &D,
    schedule: &Schedule,
    config: &SolverConfig,
    x1: P,
    mut observer: impl FnMut(usize, &P),
) -> Result<SolveReport<P>>
where
    P: Point,
    Q: Point,
    F: SmoothTerm<P>,
    G: LipschitzTerm<Q>,
    A: LinearMap<P, Q>,
    D: BoundedDomain<P>,
{
    config.validate()?;
    if f.is_none() && g.is_none() {
        return Err(Error::InvalidInput(
            "hcgs_solve: at least one of f, g must be present".into(),
        ));
    }
    check_start(&x1, domain)?;

    let mut x = x1;
    let mut trace: Vec<TraceRow> = Vec::new();
    let mut prev_obj: Option<f64> = None;
    let mut iter_time = Duration::ZERO;
    let mut warnings = SolveWarnings::default();
    let mut termination = TerminationReason::MaxIters;
    let mut iterations_run = 0;

    for k in 1..=config.max_iters {
        iterations_run = k;
        let t0 = Instant::now();

        let beta_raw = schedule.beta(k);
        let beta = if beta_raw < BETA_FLOOR {
            warnings.beta_floored += 1;
            BETA_FLOOR
        } else {
            beta_raw
        };

        // Step (I): z_k = -grad f(x_k) + A*(prox_{beta g}(A x_k) - A x_k) / beta,
        // organized with a single division by beta.
        let mut z = match f.as_mut() {
            Some(f) => {
                let mut grad = f.gradient(&x);
                grad.scale_mut(-1.0);
                grad
            }
            None => x.zeros_like(),
        };
        if let Some(g) = g {
            let ax = a.apply(&x);
            let mut diff = g.prox(&ax, beta);
            diff.axpy(-1.0, &ax);
            let adj = a.adjoint(&diff);
            z.axpy(1.0 / beta, &adj);
        }

        // Step (II): dual subgradient / linear maximization.
        let lmo = domain.linear_maximizer(&z, lmo_seed(config.seed, k));
        if !lmo.converged {
            warnings.lmo_nonconverged += 1;
        }

        // Step (III): convex combination.
        let alpha = schedule.alpha(k);
        check_alpha(alpha, k)?;
        x.combine(alpha, &lmo.point);
        if let Some(f) = f.as_mut() {
            f.step_update(&x, &lmo.point, alpha);
        }

        iter_time += t0.elapsed();
        observer(k, &x);

        if k % config.objective_eval_period == 0 || k == config.max_iters {
            let f_val = f.as_ref().map(|f| f.value(&x)).unwrap_or(0.0);
            let (objective, smoothed_objective) = match g {
                Some(g) => {
                    let ax = a.apply(&x);
                    let true_obj = f_val + g.value(&ax);
                    let smoothed = f_val + moreau_value(g, beta, &ax)?;
                    (true_obj, smoothed)
                }
                None => (f_val, f_val),
            };
            let rel = match prev_obj {
                Some(p) => relative_change(p, objective),
                None => f64::INFINITY,
            };
            trace.push(TraceRow {
                k,
                objective,
                smoothed_objective,
                rel_change: rel,
                elapsed_seconds: iter_time.as_secs_f64(),
            });
            if prev_obj.is_some() && rel < config.rel_change_tol {
                termination = TerminationReason::Tolerance;
                break;
            }
            prev_obj = Some(objective);
        }
    }

    if warnings.lmo_nonconverged > 0 {
        log::warn!(
            "hcgs_solve: {} LMO call(s) did not converge within budget",
            warnings.lmo_nonconverged
        );
    }
    if warnings.beta_floored > 0 {
        log::warn!(
            "hcgs_solve: beta_k fell below {BETA_FLOOR:e} on {} iteration(s) and was floored",
            warnings.beta_floored
        );
    }

    Ok(SolveReport {
        final_point: x,
        iterations_run,
        trace,
        termination,
        warnings,
    })
}
