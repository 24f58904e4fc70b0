//! Bounded domains and their linear minimization oracles.
//!
//! Every oracle returns an exactly feasible point: rank-one outputs are
//! rebuilt from re-normalized unit vectors so feasibility does not depend on
//! the tolerance of the inner spectral iteration.

use super::{BoundedDomain, Lmo};
use crate::linalg::{
    dominant_eigpair, jacobi_eig, power_svd, trace_norm, DenseMatrix, DenseVector, Point,
    SpectralConfig,
};
use crate::{Error, Result};

/// `argmax { <y, z> : ||y||_1 <= b }`: the signed vertex `b sgn(z_j) e_j`
/// for `j` the smallest index attaining `max_i |z_i|`. The degenerate
/// direction `z = 0` returns the fixed vertex `b e_1`.
pub fn lmo_l1_ball(z: &DenseVector, b: f64) -> Result<DenseVector> {
    if b <= 0.0 {
        return Err(Error::InvalidParameter("lmo_l1_ball: b must be > 0".into()));
    }
    let mut j = 0;
    let mut best = 0.0f64;
    for (i, &zi) in z.as_slice().iter().enumerate() {
        if zi.abs() > best {
            best = zi.abs();
            j = i;
        }
    }
    let mut y = DenseVector::zeros(z.dim());
    y[j] = if z[j] < 0.0 { -b } else { b };
    Ok(y)
}

/// `argmax { <Y, Z> : ||Y||_tr <= b }`: the rank-one matrix `b u v^T` built
/// from the dominant singular pair of `z`.
pub fn lmo_trace_ball(
    z: &DenseMatrix,
    b: f64,
    tol: f64,
    max_iters: usize,
    seed: u64,
) -> Result<Lmo<DenseMatrix>> {
    if b <= 0.0 {
        return Err(Error::InvalidParameter(
            "lmo_trace_ball: b must be > 0".into(),
        ));
    }
    let r = power_svd(z, tol, max_iters, seed)?;
    let u = r.left.normalized();
    let v = r.right.normalized();
    Ok(Lmo {
        point: DenseMatrix::outer(&u, &v, b),
        converged: r.converged,
        iterations: r.iterations_used,
    })
}

/// `argmax { <Y, Z> : trace(Y) = 1, Y PSD }`: the projector `u u^T` onto the
/// eigenvector of the maximum (signed) eigenvalue.
pub fn lmo_spectrahedron(
    z: &DenseMatrix,
    tol: f64,
    max_iters: usize,
    seed: u64,
) -> Result<Lmo<DenseMatrix>> {
    let s = z.symmetrized();
    let r = dominant_eigpair(&s, tol, max_iters, seed)?;
    let u = r.left.normalized();
    Ok(Lmo {
        point: DenseMatrix::outer(&u, &u, 1.0),
        converged: r.converged,
        iterations: r.iterations_used,
    })
}

/// `argmax { <Y, Z> : Y PSD, trace(Y) <= b }`: `b u u^T` when the maximum
/// eigenvalue is positive, otherwise the zero matrix (the optimum then lies
/// at the cone vertex).
pub fn lmo_psd_trace_ball(
    z: &DenseMatrix,
    b: f64,
    tol: f64,
    max_iters: usize,
    seed: u64,
) -> Result<Lmo<DenseMatrix>> {
    if b <= 0.0 {
        return Err(Error::InvalidParameter(
            "lmo_psd_trace_ball: b must be > 0".into(),
        ));
    }
    let s = z.symmetrized();
    let r = dominant_eigpair(&s, tol, max_iters, seed)?;
    let point = if r.value > 0.0 {
        let u = r.left.normalized();
        DenseMatrix::outer(&u, &u, b)
    } else {
        z.zeros_like()
    };
    Ok(Lmo {
        point,
        converged: r.converged,
        iterations: r.iterations_used,
    })
}

fn validated(spectral: SpectralConfig) -> SpectralConfig {
    assert!(spectral.tol > 0.0, "spectral tolerance must be > 0");
    spectral
}

/// The l1 ball `{ x : ||x||_1 <= radius }` over vectors.
#[derive(Clone, Debug)]
pub struct L1Ball {
    radius: f64,
}

impl L1Ball {
    pub fn new(radius: f64) -> Self {
        assert!(radius > 0.0);
        Self { radius }
    }
}

impl BoundedDomain<DenseVector> for L1Ball {
    fn linear_maximizer(&self, direction: &DenseVector, _seed: u64) -> Lmo<DenseVector> {
        Lmo::exact(lmo_l1_ball(direction, self.radius).expect("radius validated"))
    }

    fn radius(&self) -> f64 {
        self.radius
    }

    fn membership_residual(&self, x: &DenseVector) -> f64 {
        (x.l1_norm() - self.radius).max(0.0)
    }
}

/// The Euclidean ball `{ x : ||x|| <= radius }` over vectors.
#[derive(Clone, Debug)]
pub struct L2Ball {
    radius: f64,
}

impl L2Ball {
    pub fn new(radius: f64) -> Self {
        assert!(radius > 0.0);
        Self { radius }
    }
}

impl BoundedDomain<DenseVector> for L2Ball {
    fn linear_maximizer(&self, direction: &DenseVector, _seed: u64) -> Lmo<DenseVector> {
        let n = direction.norm();
        let y = if n == 0.0 {
            let mut e = DenseVector::basis(direction.dim(), 0);
            e.scale_mut(self.radius);
            e
        } else {
            let mut y = direction.clone();
            y.scale_mut(self.radius / n);
            y
        };
        Lmo::exact(y)
    }

    fn radius(&self) -> f64 {
        self.radius
    }

    fn membership_residual(&self, x: &DenseVector) -> f64 {
        (x.norm() - self.radius).max(0.0)
    }
}

/// The trace-norm (nuclear-norm) ball of the given radius over matrices.
#[derive(Clone, Debug)]
pub struct TraceBall {
    radius: f64,
    spectral: SpectralConfig,
}

impl TraceBall {
    pub fn new(radius: f64, spectral: SpectralConfig) -> Self {
        assert!(radius > 0.0);
        Self {
            radius,
            spectral: validated(spectral),
        }
    }
}

impl BoundedDomain<DenseMatrix> for TraceBall {
    fn linear_maximizer(&self, direction: &DenseMatrix, seed: u64) -> Lmo<DenseMatrix> {
        let dim = direction.rows().max(direction.cols());
        lmo_trace_ball(
            direction,
            self.radius,
            self.spectral.tol,
            self.spectral.resolved_max_iters(dim),
            seed,
        )
        .expect("parameters validated at construction")
    }

    fn radius(&self) -> f64 {
        self.radius
    }

    /// Needs a full SVD; intended for start-point validation and
    /// diagnostics, never for the solver's inner loop.
    fn membership_residual(&self, x: &DenseMatrix) -> f64 {
        (trace_norm(x) - self.radius).max(0.0)
    }
}

/// The spectrahedron `{ X : X PSD, trace(X) = 1 }`.
#[derive(Clone, Debug)]
pub struct Spectrahedron {
    spectral: SpectralConfig,
}

impl Spectrahedron {
    pub fn new(spectral: SpectralConfig) -> Self {
        Self {
            spectral: validated(spectral),
        }
    }
}

impl BoundedDomain<DenseMatrix> for Spectrahedron {
    fn linear_maximizer(&self, direction: &DenseMatrix, seed: u64) -> Lmo<DenseMatrix> {
        lmo_spectrahedron(
            direction,
            self.spectral.tol,
            self.spectral.resolved_max_iters(direction.rows()),
            seed,
        )
        .expect("parameters validated at construction")
    }

    fn radius(&self) -> f64 {
        // ||X||_F <= trace(X) = 1 on the PSD cone.
        1.0
    }

    /// Full eigendecomposition; diagnostic use only.
    fn membership_residual(&self, x: &DenseMatrix) -> f64 {
        let trace_dev = (x.trace() - 1.0).abs();
        let lam_min = jacobi_eig(x).min();
        trace_dev.max((-lam_min).max(0.0))
    }
}

/// The PSD cone intersected with the trace ball, `{ X PSD, trace(X) <= b }`.
#[derive(Clone, Debug)]
pub struct PsdTraceBall {
    radius: f64,
    spectral: SpectralConfig,
}

impl PsdTraceBall {
    pub fn new(radius: f64, spectral: SpectralConfig) -> Self {
        assert!(radius > 0.0);
        Self {
            radius,
            spectral: validated(spectral),
        }
    }
}

impl BoundedDomain<DenseMatrix> for PsdTraceBall {
    fn linear_maximizer(&self, direction: &DenseMatrix, seed: u64) -> Lmo<DenseMatrix> {
        lmo_psd_trace_ball(
            direction,
            self.radius,
            self.spectral.tol,
            self.spectral.resolved_max_iters(direction.rows()),
            seed,
        )
        .expect("parameters validated at construction")
    }

    fn radius(&self) -> f64 {
        self.radius
    }

    fn membership_residual(&self, x: &DenseMatrix) -> f64 {
        let trace_excess = (x.trace() - self.radius).max(0.0);
        let lam_min = jacobi_eig(x).min();
        trace_excess.max((-lam_min).max(0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{jacobi_svd, singular_values};
    use crate::testsupport::{random_matrix, random_symmetric, random_vector};

    #[test]
    fn l1_lmo_picks_max_abs_coordinate() {
        let z = DenseVector::new(vec![1.0, -3.0, 2.0]).unwrap();
        let y = lmo_l1_ball(&z, 2.0).unwrap();
        assert_eq!(y.as_slice(), &[0.0, -2.0, 0.0]);
    }

    #[test]
    fn l1_lmo_degenerate_and_tie_break() {
        let z = DenseVector::zeros(4);
        let y = lmo_l1_ball(&z, 1.0).unwrap();
        assert_eq!(y.as_slice(), &[1.0, 0.0, 0.0, 0.0]);
        // Ties resolve to the smallest index.
        let z = DenseVector::new(vec![2.0, -2.0, 2.0]).unwrap();
        let y = lmo_l1_ball(&z, 1.0).unwrap();
        assert_eq!(y.as_slice(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn l1_lmo_beats_all_signed_vertices() {
        let b = 1.0;
        for seed in 0..500u64 {
            let z = random_vector(7, seed);
            let y = lmo_l1_ball(&z, b).unwrap();
            let best = y.dot(&z);
            for i in 0..7 {
                for s in [-1.0, 1.0] {
                    let mut v = DenseVector::zeros(7);
                    v[i] = s * b;
                    assert!(v.dot(&z) <= best + 1e-12, "seed {seed}: vertex beats lmo");
                }
            }
        }
    }

    #[test]
    fn trace_lmo_diagonal_case() {
        let z = DenseMatrix::diag(&[3.0, 1.0]);
        let lmo = lmo_trace_ball(&z, 2.0, 1e-10, 1000, 4).unwrap();
        assert!(lmo.converged);
        let expect = DenseMatrix::diag(&[2.0, 0.0]);
        let mut d = lmo.point.clone();
        d.axpy(-1.0, &expect);
        assert!(d.norm() < 1e-6);
    }

    #[test]
    fn trace_lmo_zero_matrix() {
        let z = DenseMatrix::zeros(3, 3);
        let lmo = lmo_trace_ball(&z, 5.0, 1e-8, 100, 0).unwrap();
        assert!(lmo.converged);
        assert!((trace_norm(&lmo.point) - 5.0).abs() < 1e-10);
        assert_eq!(lmo.point.frob_dot(&z), 0.0);
    }

    #[test]
    fn trace_lmo_attains_top_singular_value() {
        let b = 1.7;
        for seed in 0..30u64 {
            let z = random_matrix(6, 6, seed);
            let sigma1 = singular_values(&z)[0];
            let lmo = lmo_trace_ball(&z, b, 1e-8, 20_000, seed).unwrap();
            let attained = lmo.point.frob_dot(&z);
            assert!(
                attained >= (1.0 - 1e-6) * b * sigma1,
                "seed {seed}: {attained} vs {}",
                b * sigma1
            );
            // Exactly feasible rank-one output.
            let s = singular_values(&lmo.point);
            assert!((s[0] - b).abs() <= 1e-12 * b);
            assert!(s[1] <= 1e-12 * b);
        }
    }

    #[test]
    fn spectrahedron_lmo_signed_max_eigenvalue() {
        let z = DenseMatrix::diag(&[1.0, -5.0]);
        let lmo = lmo_spectrahedron(&z, 1e-10, 1000, 3).unwrap();
        let expect = DenseMatrix::diag(&[1.0, 0.0]);
        let mut d = lmo.point.clone();
        d.axpy(-1.0, &expect);
        assert!(d.norm() < 1e-6, "got {:?}", lmo.point);
    }

    #[test]
    fn spectrahedron_lmo_identity_objective() {
        let z = DenseMatrix::identity(4);
        let lmo = lmo_spectrahedron(&z, 1e-8, 500, 9).unwrap();
        assert!((lmo.point.frob_dot(&z) - 1.0).abs() < 1e-8);
        assert!((lmo.point.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spectrahedron_lmo_attains_lambda_max() {
        for seed in 0..30u64 {
            let z = random_symmetric(8, seed);
            let lam_max = jacobi_eig(&z).max();
            let lmo = lmo_spectrahedron(&z, 1e-8, 50_000, seed).unwrap();
            let attained = lmo.point.frob_dot(&z);
            assert!(
                attained >= lam_max - 1e-6 * lam_max.abs().max(1.0),
                "seed {seed}: {attained} vs {lam_max}"
            );
        }
    }

    #[test]
    fn psd_trace_lmo_cases() {
        let z = DenseMatrix::diag(&[2.0, 1.0]);
        let lmo = lmo_psd_trace_ball(&z, 3.0, 1e-10, 1000, 1).unwrap();
        let expect = DenseMatrix::diag(&[3.0, 0.0]);
        let mut d = lmo.point.clone();
        d.axpy(-1.0, &expect);
        assert!(d.norm() < 1e-6);

        let neg = DenseMatrix::diag(&[-1.0, -1.0]);
        let lmo = lmo_psd_trace_ball(&neg, 3.0, 1e-8, 1000, 1).unwrap();
        assert_eq!(lmo.point, DenseMatrix::zeros(2, 2));
    }

    #[test]
    fn psd_trace_lmo_matches_clamped_eigenvalue() {
        let b = 2.5;
        for seed in 0..30u64 {
            let z = random_symmetric(8, seed + 300);
            let lam_max = jacobi_eig(&z).max();
            let lmo = lmo_psd_trace_ball(&z, b, 1e-8, 50_000, seed).unwrap();
            let attained = lmo.point.frob_dot(&z);
            let ideal = (b * lam_max).max(0.0);
            assert!(
                (attained - ideal).abs() <= 1e-6 * ideal.max(1.0),
                "seed {seed}: {attained} vs {ideal}"
            );
        }
    }

    #[test]
    fn domain_outputs_are_feasible() {
        let spectral = SpectralConfig::default();
        let trace = TraceBall::new(1.5, spectral);
        let spectra = Spectrahedron::new(spectral);
        let psd = PsdTraceBall::new(2.0, spectral);
        for seed in 0..10u64 {
            let z = random_matrix(6, 6, seed);
            let zs = z.symmetrized();
            assert!(trace.membership_residual(&trace.linear_maximizer(&z, seed).point) <= 1e-8);
            assert!(
                spectra.membership_residual(&spectra.linear_maximizer(&zs, seed).point) <= 1e-8
            );
            assert!(psd.membership_residual(&psd.linear_maximizer(&zs, seed).point) <= 1e-8);
        }
        let ball = L1Ball::new(2.0);
        let l2 = L2Ball::new(0.7);
        for seed in 0..10u64 {
            let z = random_vector(9, seed);
            assert!(ball.membership_residual(&ball.linear_maximizer(&z, seed).point) <= 1e-12);
            assert!(l2.membership_residual(&l2.linear_maximizer(&z, seed).point) <= 1e-12);
        }
    }

    #[test]
    fn trace_lmo_output_is_rank_one_outer_product() {
        let z = random_matrix(5, 5, 77);
        let lmo = lmo_trace_ball(&z, 1.0, 1e-8, 10_000, 5).unwrap();
        let svd = jacobi_svd(&lmo.point);
        assert!((svd.values[0] - 1.0).abs() < 1e-12);
        for &s in &svd.values[1..] {
            assert!(s < 1e-12);
        }
    }
}
