use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{DenseMatrix, DenseVector, Point};
use crate::{Error, Result};

/// Tolerance and iteration budget for the seeded spectral iterations.
///
/// `max_iters: None` resolves to `10 * dim + 200`, where `dim` is the larger
/// matrix dimension.
#[derive(Clone, Copy, Debug)]
pub struct SpectralConfig {
    pub tol: f64,
    pub max_iters: Option<usize>,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iters: None,
        }
    }
}

impl SpectralConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            max_iters: None,
        }
    }

    pub fn resolved_max_iters(&self, dim: usize) -> usize {
        self.max_iters.unwrap_or(10 * dim + 200)
    }
}

/// Result of a spectral iteration: an approximate dominant singular triple
/// (`left`, `value`, `right`) or eigenpair (`left == right`).
#[derive(Clone, Debug)]
pub struct SpectralResult {
    pub left: DenseVector,
    pub right: DenseVector,
    pub value: f64,
    pub iterations_used: usize,
    pub converged: bool,
}

fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> DenseVector {
    loop {
        let v = DenseVector::from_fn(dim, |_| 2.0 * rng.random::<f64>() - 1.0);
        let n = v.norm();
        if n > 1e-12 {
            let mut v = v;
            v.scale_mut(1.0 / n);
            return v;
        }
    }
}

/// Dominant singular triple of `z` by alternating power iteration.
///
/// Returns `(u, sigma, v)` with `||Z v - sigma u|| <= tol * sigma` on
/// convergence. The start vector is a seeded uniform random unit vector, so
/// results are deterministic for a fixed `(z, tol, max_iters, seed)`.
/// A zero matrix yields `sigma = 0` with arbitrary unit vectors and counts
/// as converged; running out of iterations returns `converged = false` and
/// leaves the decision to the caller.
pub fn power_svd(z: &DenseMatrix, tol: f64, max_iters: usize, seed: u64) -> Result<SpectralResult> {
    if tol <= 0.0 {
        return Err(Error::InvalidParameter("power_svd: tol must be > 0".into()));
    }
    let (m, n) = (z.rows(), z.cols());
    if z.max_abs() == 0.0 {
        return Ok(SpectralResult {
            left: DenseVector::basis(m, 0),
            right: DenseVector::basis(n, 0),
            value: 0.0,
            iterations_used: 0,
            converged: true,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = random_unit(n, &mut rng);
    let mut u = DenseVector::zeros(m);
    let mut sigma = 0.0f64;
    let mut converged = false;
    let mut iters = 0;

    for k in 1..=max_iters {
        iters = k;
        let w = z.matvec(&v);
        if k > 1 {
            // Residual of the previous triple against the refreshed right
            // vector; the companion identity Z^T u = sigma v holds exactly
            // because v was set to Z^T u / ||Z^T u||.
            let mut r2 = 0.0;
            for (wi, ui) in w.as_slice().iter().zip(u.as_slice()) {
                let d = wi - sigma * ui;
                r2 += d * d;
            }
            if r2.sqrt() <= tol * sigma {
                converged = true;
                break;
            }
        }
        let nu = w.norm();
        if nu == 0.0 {
            // v fell in the null space; redraw and keep iterating.
            v = random_unit(n, &mut rng);
            continue;
        }
        u = w;
        u.scale_mut(1.0 / nu);
        let t = z.tr_matvec(&u);
        sigma = t.norm();
        if sigma == 0.0 {
            v = random_unit(n, &mut rng);
            continue;
        }
        v = t;
        v.scale_mut(1.0 / sigma);
    }

    Ok(SpectralResult {
        left: u,
        right: v,
        value: sigma,
        iterations_used: iters,
        converged,
    })
}

/// Eigenvector of the maximum (signed, not largest-magnitude) eigenvalue of a
/// symmetric matrix, via power iteration on `S + cI` with a Gershgorin shift
/// `c` that makes the shifted matrix positive semidefinite.
///
/// `z` must be symmetric within `1e-12` relative to its magnitude; it is
/// symmetrized internally before iterating.
pub fn dominant_eigpair(
    z: &DenseMatrix,
    tol: f64,
    max_iters: usize,
    seed: u64,
) -> Result<SpectralResult> {
    if tol <= 0.0 {
        return Err(Error::InvalidParameter(
            "dominant_eigpair: tol must be > 0".into(),
        ));
    }
    if !z.is_square() {
        return Err(Error::InvalidInput(
            "dominant_eigpair: matrix must be square".into(),
        ));
    }
    let scale = z.max_abs().max(1.0);
    if z.max_asymmetry() > 1e-12 * scale {
        return Err(Error::InvalidInput(
            "dominant_eigpair: matrix is not symmetric within 1e-12".into(),
        ));
    }
    let s = z.symmetrized();
    let n = s.rows();

    // Gershgorin bound on -lambda_min: every eigenvalue satisfies
    // lambda >= s_ii - sum_{j != i} |s_ij|, so this shift makes S + cI PSD.
    let mut shift = 0.0f64;
    for i in 0..n {
        let off: f64 = s
            .row(i)
            .iter()
            .enumerate()
            .map(|(j, x)| if j == i { 0.0 } else { x.abs() })
            .sum();
        shift = shift.max(off - s.get(i, i));
    }
    let shift = shift.max(0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = random_unit(n, &mut rng);
    let mut converged = false;
    let mut iters = 0;
    let mut value = 0.0;

    for k in 1..=max_iters {
        iters = k;
        let mut y = s.matvec(&x);
        y.axpy(shift, &x);
        let mu = x.dot(&y); // Rayleigh quotient of the PSD shifted matrix
        let mut r2 = 0.0;
        for (yi, xi) in y.as_slice().iter().zip(x.as_slice()) {
            let d = yi - mu * xi;
            r2 += d * d;
        }
        value = mu - shift;
        if r2.sqrt() <= tol * mu.max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
        let ny = y.norm();
        if ny == 0.0 {
            // S + cI annihilated x; any such x spans an eigenspace of the
            // shift itself, which the residual test above accepts next pass.
            x = random_unit(n, &mut rng);
            continue;
        }
        x = y;
        x.scale_mut(1.0 / ny);
    }

    Ok(SpectralResult {
        left: x.clone(),
        right: x,
        value,
        iterations_used: iters,
        converged,
    })
}
