use super::LipschitzTerm;
use crate::linalg::Point;
use crate::{Error, Result};

/// Entrywise soft thresholding `sgn(x) · max(|x| − gamma, 0)`, the proximity
/// operator of `gamma ||·||_1`. Total for `gamma >= 0`.
pub fn soft_threshold<P: Point>(x: &P, gamma: f64) -> P {
    debug_assert!(gamma >= 0.0, "soft_threshold: negative threshold");
    let mut out = x.clone();
    for e in out.entries_mut() {
        let a = e.abs() - gamma;
        *e = if a > 0.0 { e.signum() * a } else { 0.0 };
    }
    out
}

/// The weighted elementwise l1 norm `weight · ||x||_1` on a space of
/// dimension `dim` (vector length or matrix entry count).
///
/// The Lipschitz constant is reported in the Euclidean norm, `weight · sqrt(dim)`.
#[derive(Clone, Debug)]
pub struct L1Norm {
    weight: f64,
    dim: usize,
}

impl L1Norm {
    pub fn new(weight: f64, dim: usize) -> Self {
        assert!(weight >= 0.0 && dim > 0);
        Self { weight, dim }
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }
}

impl<P: Point> LipschitzTerm<P> for L1Norm {
    fn value(&self, x: &P) -> f64 {
        self.weight * x.l1_norm()
    }

    fn prox(&self, x: &P, beta: f64) -> P {
        soft_threshold(x, beta * self.weight)
    }

    fn lipschitz_const(&self) -> f64 {
        self.weight * (self.dim as f64).sqrt()
    }
}

fn check_beta(beta: f64, what: &str) -> Result<()> {
    if beta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{what}: smoothing parameter beta must be > 0, got {beta}"
        )))
    }
}

/// Moreau envelope `g_beta(x) = min_u (1/(2 beta)) ||x − u||^2 + g(u)`,
/// evaluated at the minimizer `u* = prox(x, beta)`.
pub fn moreau_value<P: Point, G: LipschitzTerm<P> + ?Sized>(
    g: &G,
    beta: f64,
    x: &P,
) -> Result<f64> {
    check_beta(beta, "moreau_value")?;
    let u = g.prox(x, beta);
    let mut d = x.clone();
    d.axpy(-1.0, &u);
    Ok(d.dot(&d) / (2.0 * beta) + g.value(&u))
}

/// Gradient of the Moreau envelope, `(x − prox(x, beta)) / beta`; as a map
/// of `x` it is Lipschitz with constant `1/beta`.
pub fn moreau_gradient<P: Point, G: LipschitzTerm<P> + ?Sized>(
    g: &G,
    beta: f64,
    x: &P,
) -> Result<P> {
    check_beta(beta, "moreau_gradient")?;
    let u = g.prox(x, beta);
    let mut d = x.clone();
    d.axpy(-1.0, &u);
    d.scale_mut(1.0 / beta);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{DenseMatrix, DenseVector};
    use crate::testsupport::{random_matrix, random_vector};

    #[test]
    fn soft_threshold_matches_formula() {
        let x = DenseMatrix::from_rows(&[&[2.0, -0.3], &[0.0, 1.0]]).unwrap();
        let y = soft_threshold(&x, 0.5);
        assert_eq!(y.data(), &[1.5, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn soft_threshold_zero_gamma_is_identity() {
        let x = random_matrix(3, 4, 8);
        assert_eq!(soft_threshold(&x, 0.0), x);
    }

    #[test]
    fn soft_threshold_minimizes_per_entry_objective() {
        // Independent 1-D oracle: dense grid search of
        // 0.5 (x - u)^2 + gamma |u| per entry.
        let gamma = 0.7;
        let x = random_matrix(4, 4, 21);
        let out = soft_threshold(&x, gamma);
        for (&xi, &oi) in x.entries().iter().zip(out.entries()) {
            let obj = |u: f64| 0.5 * (xi - u).powi(2) + gamma * u.abs();
            let mut best = f64::INFINITY;
            let mut best_u = 0.0;
            let mut u = -2.0;
            while u <= 2.0 {
                let v = obj(u);
                if v < best {
                    best = v;
                    best_u = u;
                }
                u += 1e-4;
            }
            assert!(
                (oi - best_u).abs() <= 1e-3,
                "entry {xi}: grid {best_u} vs {oi}"
            );
            assert!(obj(oi) <= best + 1e-6);
        }
    }

    #[test]
    fn moreau_scalar_l1_cases() {
        // g = lambda |x| in one dimension.
        let lam = 2.0;
        let g = L1Norm::new(lam, 1);
        let beta = 0.5;
        // |x| <= beta lambda: prox = 0, gradient = x / beta
        let x = DenseVector::new(vec![0.7]).unwrap();
        let grad = moreau_gradient(&g, beta, &x).unwrap();
        assert!((grad[0] - 0.7 / beta).abs() < 1e-14);
        // x > beta lambda: prox = x - beta lambda, gradient = lambda
        let x = DenseVector::new(vec![3.0]).unwrap();
        let grad = moreau_gradient(&g, beta, &x).unwrap();
        assert!((grad[0] - lam).abs() < 1e-14);
    }

    #[test]
    fn moreau_value_huber_cases() {
        let g = L1Norm::new(1.0, 1);
        let zero = DenseVector::new(vec![0.0]).unwrap();
        assert_eq!(moreau_value(&g, 1.0, &zero).unwrap(), 0.0);
        let one = DenseVector::new(vec![1.0]).unwrap();
        assert!((moreau_value(&g, 1.0, &one).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn moreau_rejects_nonpositive_beta() {
        let g = L1Norm::new(1.0, 2);
        let x = DenseVector::zeros(2);
        assert!(moreau_value(&g, 0.0, &x).is_err());
        assert!(moreau_gradient(&g, -1.0, &x).is_err());
    }

    #[test]
    fn moreau_sandwich_on_random_points() {
        let dim = 6;
        let g = L1Norm::new(0.8, dim);
        let lg = <L1Norm as LipschitzTerm<DenseVector>>::lipschitz_const(&g);
        for seed in 0..1000u64 {
            let x = random_vector(dim, seed);
            let beta = 0.05 + (seed % 10) as f64 * 0.1;
            let gb = moreau_value(&g, beta, &x).unwrap();
            let gx = <L1Norm as LipschitzTerm<DenseVector>>::value(&g, &x);
            assert!(gb <= gx + 1e-12);
            assert!(gx <= gb + 0.5 * beta * lg * lg + 1e-12);
            // Monotone comparison for a larger smoothing parameter.
            let beta2 = beta * 2.0;
            let gb2 = moreau_value(&g, beta2, &x).unwrap();
            assert!(gb2 <= gb + 1e-12);
            assert!(gb <= gb2 + 0.5 * (beta2 - beta) * lg * lg + 1e-12);
        }
    }

    #[test]
    fn moreau_gradient_matches_finite_differences() {
        let dim = 5;
        let g = L1Norm::new(1.3, dim);
        for seed in 0..50u64 {
            let x = random_vector(dim, 1000 + seed);
            let beta = 0.4;
            let grad = moreau_gradient(&g, beta, &x).unwrap();
            let mut fd = DenseVector::zeros(dim);
            for i in 0..dim {
                let h = 1e-6 * (1.0 + x[i].abs());
                let mut xp = x.clone();
                xp[i] += h;
                let mut xm = x.clone();
                xm[i] -= h;
                fd[i] = (moreau_value(&g, beta, &xp).unwrap()
                    - moreau_value(&g, beta, &xm).unwrap())
                    / (2.0 * h);
            }
            let mut diff = fd.clone();
            diff.axpy(-1.0, &grad);
            assert!(
                diff.norm() <= 1e-5 * grad.norm().max(1.0),
                "seed {seed}: fd mismatch {}",
                diff.norm()
            );
        }
    }

    #[test]
    fn prox_is_nonexpansive() {
        let g = L1Norm::new(0.9, 8);
        for seed in 0..200u64 {
            let x = random_vector(8, seed);
            let y = random_vector(8, seed + 7000);
            let beta = 0.3;
            let px: DenseVector = g.prox(&x, beta);
            let py = g.prox(&y, beta);
            let mut dp = px;
            dp.axpy(-1.0, &py);
            let mut dxy = x;
            dxy.axpy(-1.0, &y);
            assert!(dp.norm() <= dxy.norm() + 1e-14);
        }
    }
}
