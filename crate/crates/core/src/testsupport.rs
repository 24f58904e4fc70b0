//! Seeded random test fixtures shared by the unit tests.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{DenseMatrix, DenseVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut r = rng(seed);
    DenseMatrix::from_fn(rows, cols, |_, _| 2.0 * r.random::<f64>() - 1.0)
}

pub fn random_symmetric(n: usize, seed: u64) -> DenseMatrix {
    random_matrix(n, n, seed).symmetrized()
}

pub fn random_vector(dim: usize, seed: u64) -> DenseVector {
    let mut r = rng(seed);
    DenseVector::from_fn(dim, |_| 2.0 * r.random::<f64>() - 1.0)
}
