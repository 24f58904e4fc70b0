//! Dense real vectors and matrices plus the iterative spectral routines
//! (power method for dominant singular triples and eigenpairs) that back
//! every linear minimization oracle in this crate.
//!
//! Storage is dense `f64` throughout; non-finite entries are rejected at
//! construction and I/O boundaries so NaN/Inf never enter solver state.

mod jacobi;
mod matrix;
mod power;
mod space;
mod vector;

pub mod io;

pub use jacobi::{jacobi_eig, jacobi_svd, singular_values, trace_norm, Svd, SymEig};
pub use matrix::DenseMatrix;
pub use power::{dominant_eigpair, power_svd, SpectralConfig, SpectralResult};
pub use space::Point;
pub use vector::DenseVector;

pub(crate) fn check_finite(entries: &[f64], what: &str) -> crate::Result<()> {
    if entries.iter().all(|e| e.is_finite()) {
        Ok(())
    } else {
        Err(crate::Error::InvalidInput(format!(
            "{what} contains a non-finite entry"
        )))
    }
}
