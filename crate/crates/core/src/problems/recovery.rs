//! Recovery of a simultaneously sparse and low-rank matrix from a subset of
//! noisy entries.
//!
//! The penalized objective is
//! `J(X) = 1/(2p) ||Omega(Y - X)||_F^2 + lambda1 ||X||_1 + lambda2 ||X||_tr`
//! (`p` = number of observed entries); the constrained form swaps the trace
//! penalty for a trace-norm ball of radius `tau` and is what the hybrid
//! solver runs on.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::linalg::{trace_norm, DenseMatrix, Point, SpectralConfig};
use crate::oracles::{IdentityMap, L1Norm, LipschitzTerm, SmoothTerm, TraceBall};
use crate::solvers::{
    default_schedule, hcgs_solve_observed, vertex_start, SolveReport, SolverConfig,
};
use crate::{Error, Result};

/// The entry-sampling operator `Omega`: keeps observed entries, zeroes the
/// rest. Idempotent by construction.
#[derive(Clone, Debug)]
pub struct SamplingMask {
    n: usize,
    observed: Vec<(usize, usize)>,
    flags: Vec<bool>,
}

impl SamplingMask {
    pub fn new(n: usize, observed: Vec<(usize, usize)>) -> Result<Self> {
        let mut flags = vec![false; n * n];
        for &(i, j) in &observed {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!(
                    "mask index ({i}, {j}) out of range for n = {n}"
                )));
            }
            if flags[i * n + j] {
                return Err(Error::InvalidInput(format!(
                    "duplicate mask index ({i}, {j})"
                )));
            }
            flags[i * n + j] = true;
        }
        Ok(Self { n, observed, flags })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn observed(&self) -> &[(usize, usize)] {
        &self.observed
    }

    pub fn count(&self) -> usize {
        self.observed.len()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.flags[i * self.n + j]
    }

    /// `Omega(X)`.
    pub fn apply(&self, x: &DenseMatrix) -> DenseMatrix {
        assert_eq!(x.rows(), self.n);
        assert_eq!(x.cols(), self.n);
        let mut out = x.clone();
        for (e, &keep) in out.entries_mut().iter_mut().zip(&self.flags) {
            if !keep {
                *e = 0.0;
            }
        }
        out
    }

    /// `sum_{(i,j) observed} (a_ij - b_ij)^2`
    pub fn masked_sq_diff(&self, a: &DenseMatrix, b: &DenseMatrix) -> f64 {
        let mut s = 0.0;
        for ((&x, &y), &keep) in a.entries().iter().zip(b.entries()).zip(&self.flags) {
            if keep {
                let d = x - y;
                s += d * d;
            }
        }
        s
    }
}

/// Generation parameters, kept for manifests and exact replay.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecoveryParams {
    pub n: usize,
    pub rank: usize,
    pub zero_frac: f64,
    pub noise_variance: f64,
    pub obs_frac: f64,
    pub seed: u64,
}

/// A synthetic recovery instance: sparse low-rank ground truth `U V^T`,
/// noisy partial observations, and the sampling mask.
#[derive(Clone, Debug)]
pub struct RecoveryInstance {
    pub ground_truth: DenseMatrix,
    /// `Omega(ground_truth + noise)`: observed entries carry noise, the
    /// rest are zero.
    pub observations: DenseMatrix,
    pub mask: SamplingMask,
    pub noise_variance: f64,
    pub p_obs: usize,
    pub params: RecoveryParams,
}

fn zero_random_entries(m: &mut DenseMatrix, frac: f64, rng: &mut ChaCha8Rng) {
    let total = m.entries().len();
    let count = (frac * total as f64).round() as usize;
    let idx = rand::seq::index::sample(rng, total, count.min(total));
    let data = m.entries_mut();
    for i in idx {
        data[i] = 0.0;
    }
}

/// Generate a recovery instance: `U, V` are `n x rank` uniform `[0, 1]`
/// matrices with a uniformly chosen `zero_frac` of entries zeroed
/// (independently in each), the ground truth is `U V^T`, zero-mean Gaussian
/// noise of the given variance corrupts every entry, and a uniformly chosen
/// fraction `obs_frac` of entries is observed. Deterministic per seed.
pub fn gen_recovery_instance(
    n: usize,
    rank: usize,
    zero_frac: f64,
    noise_variance: f64,
    obs_frac: f64,
    seed: u64,
) -> Result<RecoveryInstance> {
    if rank == 0 || n < rank {
        return Err(Error::InvalidParameter(format!(
            "need n >= rank >= 1, got n = {n}, rank = {rank}"
        )));
    }
    if !(0.0..=1.0).contains(&zero_frac) {
        return Err(Error::InvalidParameter(format!(
            "zero_frac must be in [0, 1], got {zero_frac}"
        )));
    }
    if !(obs_frac > 0.0 && obs_frac <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "obs_frac must be in (0, 1], got {obs_frac}"
        )));
    }
    if noise_variance < 0.0 {
        return Err(Error::InvalidParameter("noise_variance must be >= 0".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = DenseMatrix::from_fn(n, rank, |_, _| rng.random::<f64>());
    zero_random_entries(&mut u, zero_frac, &mut rng);
    let mut v = DenseMatrix::from_fn(n, rank, |_, _| rng.random::<f64>());
    zero_random_entries(&mut v, zero_frac, &mut rng);
    let ground_truth = u.matmul_bt(&v);

    let normal = Normal::new(0.0, noise_variance.sqrt())
        .map_err(|e| Error::InvalidParameter(format!("bad noise distribution: {e}")))?;
    let mut noisy = ground_truth.clone();
    for e in noisy.entries_mut() {
        *e += normal.sample(&mut rng);
    }

    let p = ((obs_frac * (n * n) as f64).round() as usize).clamp(1, n * n);
    let mut idx: Vec<usize> = rand::seq::index::sample(&mut rng, n * n, p).into_vec();
    idx.sort_unstable();
    let observed: Vec<(usize, usize)> = idx.iter().map(|&i| (i / n, i % n)).collect();
    let mask = SamplingMask::new(n, observed)?;
    let observations = mask.apply(&noisy);

    Ok(RecoveryInstance {
        ground_truth,
        observations,
        mask,
        noise_variance,
        p_obs: p,
        params: RecoveryParams {
            n,
            rank,
            zero_frac,
            noise_variance,
            obs_frac,
            seed,
        },
    })
}

/// The penalized objective
/// `J(X) = 1/(2p) ||Omega(Y - X)||_F^2 + lambda1 ||X||_1 + lambda2 ||X||_tr`.
///
/// The trace norm is evaluated by a full SVD; this belongs to reporting,
/// never to the hybrid solver's inner loop.
pub fn recovery_objective_j(
    x: &DenseMatrix,
    instance: &RecoveryInstance,
    lambda1: f64,
    lambda2: f64,
) -> f64 {
    let fit = instance.mask.masked_sq_diff(&instance.observations, x)
        / (2.0 * instance.p_obs as f64);
    fit + lambda1 * x.l1_norm() + lambda2 * trace_norm(x)
}

/// The smooth data-fit term `f(X) = 1/(2p) ||Omega(Y - X)||_F^2` with
/// gradient `Omega(X - Y) / p`; `(1, 1/p)`-smooth.
pub struct RecoveryLoss {
    observations: DenseMatrix,
    mask: SamplingMask,
    p_obs: usize,
}

impl RecoveryLoss {
    pub fn new(instance: &RecoveryInstance) -> Self {
        Self {
            observations: instance.observations.clone(),
            mask: instance.mask.clone(),
            p_obs: instance.p_obs,
        }
    }
}

impl SmoothTerm<DenseMatrix> for RecoveryLoss {
    fn value(&self, x: &DenseMatrix) -> f64 {
        self.mask.masked_sq_diff(&self.observations, x) / (2.0 * self.p_obs as f64)
    }

    fn gradient(&self, x: &DenseMatrix) -> DenseMatrix {
        let mut g = x.clone();
        g.axpy(-1.0, &self.observations);
        let mut g = self.mask.apply(&g);
        g.scale_mut(1.0 / self.p_obs as f64);
        g
    }

    fn holder_const(&self) -> f64 {
        1.0 / self.p_obs as f64
    }
}

/// Solve the constrained recovery problem
/// `min { 1/(2p) ||Omega(Y - X)||_F^2 + lambda1 ||X||_1 : ||X||_tr <= tau }`
/// with the hybrid solver (`g = lambda1 ||.||_1`, `A = I`, trace-ball
/// domain, default schedule).
pub fn solve_recovery_hcgs(
    instance: &RecoveryInstance,
    lambda1: f64,
    tau: f64,
    config: &SolverConfig,
) -> Result<SolveReport<DenseMatrix>> {
    solve_recovery_hcgs_observed(instance, lambda1, tau, config, |_, _| {})
}

/// [`solve_recovery_hcgs`] with a per-iteration observer.
pub fn solve_recovery_hcgs_observed(
    instance: &RecoveryInstance,
    lambda1: f64,
    tau: f64,
    config: &SolverConfig,
    observer: impl FnMut(usize, &DenseMatrix),
) -> Result<SolveReport<DenseMatrix>> {
    let n = instance.mask.n();
    let domain = trace_domain(tau)?;
    let x1 = vertex_start(&domain, &DenseMatrix::zeros(n, n), config.seed);
    solve_recovery_impl(instance, lambda1, tau, config, x1, observer)
}

/// [`solve_recovery_hcgs`] from an explicit feasible starting matrix (used
/// e.g. to run on symmetric data with a symmetric start).
pub fn solve_recovery_hcgs_with_start(
    instance: &RecoveryInstance,
    lambda1: f64,
    tau: f64,
    config: &SolverConfig,
    x1: DenseMatrix,
    observer: impl FnMut(usize, &DenseMatrix),
) -> Result<SolveReport<DenseMatrix>> {
    solve_recovery_impl(instance, lambda1, tau, config, x1, observer)
}

fn trace_domain(tau: f64) -> Result<TraceBall> {
    if tau <= 0.0 {
        return Err(Error::InvalidParameter("tau must be > 0".into()));
    }
    Ok(TraceBall::new(tau, SpectralConfig::default()))
}

fn solve_recovery_impl(
    instance: &RecoveryInstance,
    lambda1: f64,
    tau: f64,
    config: &SolverConfig,
    x1: DenseMatrix,
    observer: impl FnMut(usize, &DenseMatrix),
) -> Result<SolveReport<DenseMatrix>> {
    if lambda1 < 0.0 {
        return Err(Error::InvalidParameter("lambda1 must be >= 0".into()));
    }
    let n = instance.mask.n();
    let domain = trace_domain(tau)?;
    let mut f = RecoveryLoss::new(instance);
    let g = L1Norm::new(lambda1, n * n);
    let l_g = <L1Norm as LipschitzTerm<DenseMatrix>>::lipschitz_const(&g);
    let schedule = default_schedule(tau, 1.0, l_g);
    hcgs_solve_observed(
        Some(&mut f),
        Some(&g),
        &IdentityMap,
        &domain,
        &schedule,
        config,
        x1,
        observer,
    )
}
