//! Shared brute-force oracles for the integration and acceptance suites.
//! Independent of the solver code paths they are used to check.

#![allow(dead_code)]

use hcgs_core::linalg::{DenseMatrix, DenseVector, Point};
use hcgs_core::oracles::SmoothTerm;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(dim: usize, seed: u64) -> DenseVector {
    let mut r = rng(seed);
    DenseVector::from_fn(dim, |_| 2.0 * r.random::<f64>() - 1.0)
}

/// Euclidean projection onto the l1 ball of radius `b` (sort-based exact
/// algorithm).
pub fn project_l1(v: &DenseVector, b: f64) -> DenseVector {
    assert!(b > 0.0);
    if v.l1_norm() <= b {
        return v.clone();
    }
    let mut mags: Vec<f64> = v.as_slice().iter().map(|x| x.abs()).collect();
    mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (j, &u) in mags.iter().enumerate() {
        cum += u;
        let t = (cum - b) / (j as f64 + 1.0);
        if u > t {
            theta = t;
        } else {
            break;
        }
    }
    let mut out = v.clone();
    for e in out.entries_mut() {
        let a = e.abs() - theta;
        *e = if a > 0.0 { e.signum() * a } else { 0.0 };
    }
    out
}

/// `f(x) = 0.5 ||x - a||^2`.
pub struct QuadDist {
    pub a: DenseVector,
}

impl SmoothTerm<DenseVector> for QuadDist {
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

/// High-accuracy reference for
/// `min { 0.5 <x,Qx> + <c,x> + mu ||x||_1 : ||x||_1 <= b }`
/// by proximal gradient with the exact composite prox (soft thresholding
/// followed by l1-ball projection, which compose exactly for l1 geometry).
pub fn qp_reference_objective(
    q: &DenseMatrix,
    c: &DenseVector,
    mu: f64,
    b: f64,
    iters: usize,
) -> f64 {
    let d = c.dim();
    let lips = q.frob_norm().max(1e-12);
    let step = 1.0 / lips;
    let mut x = DenseVector::zeros(d);
    let objective = |x: &DenseVector, qx: &DenseVector| {
        0.5 * x.dot(qx) + c.dot(x) + mu * x.l1_norm()
    };
    let mut best = f64::INFINITY;
    for _ in 0..iters {
        let qx = q.matvec(&x);
        best = best.min(objective(&x, &qx));
        let mut fwd = x.clone();
        fwd.axpy(-step, &qx);
        fwd.axpy(-step, c);
        let soft = hcgs_core::oracles::soft_threshold(&fwd, step * mu);
        x = project_l1(&soft, b);
    }
    let qx = q.matvec(&x);
    best.min(objective(&x, &qx))
}

/// Projected subgradient descent for `lambda ||x||_1` over the Euclidean
/// ball, with Polyak step sizes against the analytic optimal value 0 (the
/// ball contains the origin). The sharp minimum makes this converge
/// linearly, giving a high-accuracy reference.
pub fn l2_ball_subgradient_reference(
    dim: usize,
    lambda: f64,
    radius: f64,
    iters: usize,
    seed: u64,
) -> f64 {
    let mut r = rng(seed);
    let mut x = DenseVector::from_fn(dim, |_| (2.0 * r.random::<f64>() - 1.0) * radius / dim as f64);
    let mut best = lambda * x.l1_norm();
    for _ in 0..iters {
        let g = DenseVector::from_fn(dim, |i| lambda * x[i].signum());
        let g2 = g.dot(&g);
        if g2 == 0.0 {
            break;
        }
        let t = (lambda * x.l1_norm()) / g2; // Polyak: (f - f*) / ||g||^2
        x.axpy(-t, &g);
        let n = x.norm();
        if n > radius {
            x.scale_mut(radius / n);
        }
        best = best.min(lambda * x.l1_norm());
    }
    best
}
