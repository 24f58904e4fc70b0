//! Sparse multicomposite quadratic programs
//! `min { 0.5 <x, Qx> + <c, x> + mu ||x||_1 : ||x||_1 <= B }`.
//!
//! Run from a one-sparse vertex, the conditional-gradient iterate `x_k` has
//! at most `k` nonzeros, and the gradient `Q x + c` is maintained
//! incrementally at `O(d)` per iteration from one row of `Q` (the update
//! direction is a signed scaled basis vector).

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{DenseMatrix, DenseVector, Point};
use crate::oracles::{IdentityMap, L1Ball, L1Norm, LipschitzTerm, SmoothTerm};
use crate::solvers::{
    default_schedule, hcgs_solve_observed, vertex_start, SolveReport, SolverConfig,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SparseQpParams {
    pub dim: usize,
    pub seed: u64,
}

/// A sparse QP instance: PSD `Q`, linear term `c`, l1-ball radius `b`, and
/// the weight of the additional l1 penalty (`0` disables it, reducing the
/// solve to plain conditional gradient).
#[derive(Clone, Debug)]
pub struct SparseQpInstance {
    pub q: DenseMatrix,
    pub c: DenseVector,
    pub b: f64,
    pub penalty_weight: f64,
    pub params: SparseQpParams,
}

/// Generate an instance with `Q = sym(M^T M) / d` for `M` uniform on
/// `[-1, 1]` (PSD, spectral norm around 4/3) and `c` uniform on
/// `[-0.1, 0.1]`.
pub fn gen_sparse_qp_instance(
    dim: usize,
    b: f64,
    penalty_weight: f64,
    seed: u64,
) -> Result<SparseQpInstance> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dim must be >= 1".into()));
    }
    if b <= 0.0 {
        return Err(Error::InvalidParameter("b must be > 0".into()));
    }
    if penalty_weight < 0.0 {
        return Err(Error::InvalidParameter("penalty_weight must be >= 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = DenseMatrix::from_fn(dim, dim, |_, _| 2.0 * rng.random::<f64>() - 1.0);
    let mut q = m.transpose().matmul(&m).symmetrized();
    q.scale_mut(1.0 / dim as f64);
    let c = DenseVector::from_fn(dim, |_| 0.2 * rng.random::<f64>() - 0.1);
    Ok(SparseQpInstance {
        q,
        c,
        b,
        penalty_weight,
        params: SparseQpParams { dim, seed },
    })
}

/// `f(x) = 0.5 <x, Qx> + <c, x>` with an incrementally maintained `Q x`.
///
/// The cache tracks the solver's iterate through [`SmoothTerm::step_update`]:
/// after `x_new = (1 - alpha) x + alpha y` with sparse `y`, the product
/// updates as `(1 - alpha) Qx + alpha * sum_j y_j Q e_j`, touching one row
/// of the symmetric `Q` per nonzero of `y`. `value` and `gradient` are
/// valid for the tracked iterate.
pub struct QuadraticForm {
    q: DenseMatrix,
    c: DenseVector,
    qx: DenseVector,
    l_f: f64,
}

impl QuadraticForm {
    /// Build the form with its cache initialized at `x1`.
    pub fn with_start(q: DenseMatrix, c: DenseVector, x1: &DenseVector) -> Self {
        assert!(q.is_square());
        assert_eq!(q.rows(), c.dim());
        let qx = q.matvec(x1);
        // Gradient Lipschitz constant: a rigorous bound on ||Q||_2.
        let l_f = q.frob_norm();
        Self { q, c, qx, l_f }
    }

    /// The gradient recomputed from scratch; consistency oracle for the
    /// incremental cache.
    pub fn gradient_direct(&self, x: &DenseVector) -> DenseVector {
        let mut g = self.q.matvec(x);
        g.axpy(1.0, &self.c);
        g
    }
}

impl SmoothTerm<DenseVector> for QuadraticForm {
    fn value(&self, x: &DenseVector) -> f64 {
        0.5 * x.dot(&self.qx) + self.c.dot(x)
    }

    fn gradient(&self, x: &DenseVector) -> DenseVector {
        let _ = x;
        let mut g = self.qx.clone();
        g.axpy(1.0, &self.c);
        g
    }

    fn holder_const(&self) -> f64 {
        self.l_f
    }

    fn step_update(&mut self, _x_new: &DenseVector, y: &DenseVector, alpha: f64) {
        self.qx.scale_mut(1.0 - alpha);
        for (j, &yj) in y.as_slice().iter().enumerate() {
            if yj != 0.0 {
                // Row j of the symmetric Q is column j.
                self.qx.axpy(alpha * yj, &row_vector(&self.q, j));
            }
        }
    }
}

fn row_vector(q: &DenseMatrix, j: usize) -> DenseVector {
    DenseVector::new(q.row(j).to_vec()).expect("finite by construction")
}

/// Solve the sparse QP with the hybrid method over the l1 ball, starting
/// from a one-sparse vertex `B e_i`.
pub fn solve_sparse_qp_hcgs(
    instance: &SparseQpInstance,
    config: &SolverConfig,
) -> Result<SolveReport<DenseVector>> {
    solve_sparse_qp_hcgs_observed(instance, config, |_, _| {})
}

/// [`solve_sparse_qp_hcgs`] with a per-iteration observer (e.g. to record
/// the sparsity of every iterate).
pub fn solve_sparse_qp_hcgs_observed(
    instance: &SparseQpInstance,
    config: &SolverConfig,
    observer: impl FnMut(usize, &DenseVector),
) -> Result<SolveReport<DenseVector>> {
    let d = instance.params.dim;
    let domain = L1Ball::new(instance.b);
    let x1 = vertex_start(&domain, &DenseVector::zeros(d), config.seed);
    let mut f = QuadraticForm::with_start(instance.q.clone(), instance.c.clone(), &x1);

    if instance.penalty_weight > 0.0 {
        let g = L1Norm::new(instance.penalty_weight, d);
        let l_g = <L1Norm as LipschitzTerm<DenseVector>>::lipschitz_const(&g);
        let schedule = default_schedule(instance.b, 1.0, l_g);
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
    } else {
        let schedule = default_schedule(instance.b, 0.0, 0.0);
        hcgs_solve_observed(
            Some(&mut f),
            None::<&L1Norm>,
            &IdentityMap,
            &domain,
            &schedule,
            config,
            x1,
            observer,
        )
    }
}
