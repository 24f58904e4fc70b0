/// A point in a finite-dimensional real inner-product space, exposed as a
/// flat slice of entries.
///
/// The two implementors are [`super::DenseVector`] and
/// [`super::DenseMatrix`] (with the Frobenius inner product). The solver
/// engines are generic over this trait, so vector and matrix problems run
/// through the same code path.
pub trait Point: Clone {
    fn entries(&self) -> &[f64];

    fn entries_mut(&mut self) -> &mut [f64];

    /// A zero point with the same shape as `self`.
    fn zeros_like(&self) -> Self;

    fn dim(&self) -> usize {
        self.entries().len()
    }

    fn dot(&self, other: &Self) -> f64 {
        let (a, b) = (self.entries(), other.entries());
        assert_eq!(a.len(), b.len(), "dot: shape mismatch");
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    fn l1_norm(&self) -> f64 {
        self.entries().iter().map(|x| x.abs()).sum()
    }

    fn max_abs(&self) -> f64 {
        self.entries().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    fn scale_mut(&mut self, a: f64) {
        for e in self.entries_mut() {
            *e *= a;
        }
    }

    /// `self += a * other`
    fn axpy(&mut self, a: f64, other: &Self) {
        let b = other.entries();
        let s = self.entries_mut();
        assert_eq!(s.len(), b.len(), "axpy: shape mismatch");
        for (x, y) in s.iter_mut().zip(b) {
            *x += a * y;
        }
    }

    /// The convex-combination update `self = (1 - alpha) * self + alpha * other`.
    fn combine(&mut self, alpha: f64, other: &Self) {
        let b = other.entries();
        let s = self.entries_mut();
        assert_eq!(s.len(), b.len(), "combine: shape mismatch");
        let keep = 1.0 - alpha;
        for (x, y) in s.iter_mut().zip(b) {
            *x = keep * *x + alpha * y;
        }
    }

    fn is_finite(&self) -> bool {
        self.entries().iter().all(|e| e.is_finite())
    }
}
