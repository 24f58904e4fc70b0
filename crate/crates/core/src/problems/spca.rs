//! The sparse PCA semidefinite relaxation
//! `max { <C, X> - lambda ||X||_1 : trace(X) = 1, X PSD }`
//! solved over the spectrahedron with the hybrid method.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{jacobi_eig, DenseMatrix, DenseVector, Point, SpectralConfig};
use crate::oracles::{IdentityMap, L1Norm, LipschitzTerm, SmoothTerm, Spectrahedron};
use crate::solvers::{
    default_schedule, hcgs_solve_observed, vertex_start, SolveReport, SolverConfig,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpcaParams {
    pub n: usize,
    pub seed: u64,
}

/// A planted sparse PCA instance: `C = U U^T / n + 10 v v^T` for `U` an
/// `n x n` uniform `[0, 1]` matrix and `v` a vector with exactly
/// `ceil(0.1 n)` uniform `[0, 1]` nonzeros.
///
/// The `1/n` factor on the Gram part carries the objective rescaling: it
/// keeps the data term `O(1)` per unit trace so the planted spike `10 v v^T`
/// is the dominant structure and the relaxation can recover it.
#[derive(Clone, Debug)]
pub struct SpcaInstance {
    pub c: DenseMatrix,
    pub planted: DenseVector,
    pub lambda: f64,
    pub params: SpcaParams,
}

pub fn gen_spca_instance(n: usize, seed: u64) -> Result<SpcaInstance> {
    if n < 10 {
        return Err(Error::InvalidParameter(format!(
            "spca instance needs n >= 10, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = DenseMatrix::from_fn(n, n, |_, _| rng.random::<f64>());
    let mut v = DenseVector::from_fn(n, |_| rng.random::<f64>());
    let nonzeros = (0.1 * n as f64).ceil() as usize;
    let zeroed = rand::seq::index::sample(&mut rng, n, n - nonzeros);
    for i in zeroed {
        v[i] = 0.0;
    }

    let mut c = u.matmul_bt(&u);
    c.scale_mut(1.0 / n as f64);
    for i in 0..n {
        for j in 0..n {
            let val = c.get(i, j) + 10.0 * v[i] * v[j];
            c.set(i, j, val);
        }
    }

    Ok(SpcaInstance {
        c,
        planted: v,
        lambda: 1.0,
        params: SpcaParams { n, seed },
    })
}

/// Linear term `f(X) = -<C, X>` (the solver minimizes the negated
/// maximization objective); gradient is the constant `-C`, so `L_f = 0`.
struct NegatedLinear {
    neg_c: DenseMatrix,
}

impl SmoothTerm<DenseMatrix> for NegatedLinear {
    fn value(&self, x: &DenseMatrix) -> f64 {
        self.neg_c.dot(x)
    }

    fn gradient(&self, x: &DenseMatrix) -> DenseMatrix {
        let _ = x;
        self.neg_c.clone()
    }

    fn holder_const(&self) -> f64 {
        0.0
    }
}

/// Maximize `<C, X> - lambda ||X||_1` over the spectrahedron by minimizing
/// its negation through the hybrid solver (`f` linear, `g = lambda ||.||_1`,
/// `A = I`).
///
/// Trace rows are re-negated before returning so `objective` matches the
/// maximization view; the stopping rule is unaffected (relative change is
/// sign-invariant).
pub fn solve_spca_hcgs(
    instance: &SpcaInstance,
    config: &SolverConfig,
) -> Result<SolveReport<DenseMatrix>> {
    solve_spca_hcgs_observed(instance, config, |_, _| {})
}

/// [`solve_spca_hcgs`] with a per-iteration observer.
pub fn solve_spca_hcgs_observed(
    instance: &SpcaInstance,
    config: &SolverConfig,
    observer: impl FnMut(usize, &DenseMatrix),
) -> Result<SolveReport<DenseMatrix>> {
    let n = instance.params.n;
    let mut f = NegatedLinear {
        neg_c: instance.c.scaled(-1.0),
    };
    let g = L1Norm::new(instance.lambda, n * n);
    let l_g = <L1Norm as LipschitzTerm<DenseMatrix>>::lipschitz_const(&g);
    let domain = Spectrahedron::new(SpectralConfig::default());
    let schedule = default_schedule(1.0, 1.0, l_g);
    let x1 = vertex_start(&domain, &DenseMatrix::zeros(n, n), config.seed);

    let mut report = hcgs_solve_observed(
        Some(&mut f),
        Some(&g),
        &IdentityMap,
        &domain,
        &schedule,
        config,
        x1,
        observer,
    )?;
    for row in &mut report.trace {
        row.objective = -row.objective;
        row.smoothed_objective = -row.smoothed_objective;
    }
    Ok(report)
}

/// `|cos|` overlap between the dominant eigenvector of `x` and the planted
/// direction (full eigendecomposition; diagnostic use).
pub fn planted_overlap(instance: &SpcaInstance, x: &DenseMatrix) -> f64 {
    let top = jacobi_eig(x).top_vector();
    let v = instance.planted.normalized();
    top.dot(&v).abs()
}
