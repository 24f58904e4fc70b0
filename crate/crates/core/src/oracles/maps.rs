use super::LinearMap;
use crate::linalg::{DenseMatrix, DenseVector, Point};

/// The identity operator on any point type.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityMap;

impl<P: Point> LinearMap<P, P> for IdentityMap {
    fn apply(&self, x: &P) -> P {
        x.clone()
    }

    fn adjoint(&self, y: &P) -> P {
        y.clone()
    }

    fn norm_bound(&self) -> f64 {
        1.0
    }
}

/// A dense matrix acting on vectors, with its transpose as adjoint.
#[derive(Clone, Debug)]
pub struct MatrixOperator {
    a: DenseMatrix,
    norm_bound: f64,
}

impl MatrixOperator {
    /// Uses the Frobenius norm as the (rigorous) operator-norm bound.
    pub fn new(a: DenseMatrix) -> Self {
        let norm_bound = a.frob_norm();
        Self { a, norm_bound }
    }

    /// Caller-supplied bound, e.g. a computed dominant singular value.
    pub fn with_norm_bound(a: DenseMatrix, norm_bound: f64) -> Self {
        assert!(norm_bound >= 0.0);
        Self { a, norm_bound }
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.a
    }
}

impl LinearMap<DenseVector, DenseVector> for MatrixOperator {
    fn apply(&self, x: &DenseVector) -> DenseVector {
        self.a.matvec(x)
    }

    fn adjoint(&self, y: &DenseVector) -> DenseVector {
        self.a.tr_matvec(y)
    }

    fn norm_bound(&self) -> f64 {
        self.norm_bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testsupport::{random_matrix, random_vector};

    #[test]
    fn adjoint_identity_holds() {
        let op = MatrixOperator::new(random_matrix(6, 4, 3));
        for seed in 0..20u64 {
            let x = random_vector(4, seed);
            let y = random_vector(6, seed + 100);
            let lhs = op.apply(&x).dot(&y);
            let rhs = x.dot(&op.adjoint(&y));
            assert!(
                (lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0),
                "<Ax,y> = {lhs} vs <x,A*y> = {rhs}"
            );
        }
    }

    #[test]
    fn norm_bound_dominates_action() {
        let op = MatrixOperator::new(random_matrix(5, 7, 11));
        for seed in 0..20u64 {
            let x = random_vector(7, seed);
            assert!(op.apply(&x).norm() <= op.norm_bound() * x.norm() * (1.0 + 1e-12));
        }
    }
}
