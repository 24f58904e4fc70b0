//! First-order convex optimization built around linear minimization oracles.
//!
//! The crate provides two generic solver engines:
//!
//! - [`solvers::cg_solve`]: the generalized conditional gradient (Frank-Wolfe)
//!   method for minimizing a smooth function over a bounded convex domain,
//!   using only gradient and linear-minimization-oracle calls.
//! - [`solvers::hcgs_solve`]: the hybrid conditional gradient - smoothing
//!   method, which additionally handles a Lipschitz term `g(Ax)` by replacing
//!   it with a Moreau envelope whose smoothing parameter shrinks over the
//!   iterations. Only the proximity operator of `g` is required.
//!
//! On top of the engines, [`problems`] wires up three ready-to-run
//! applications (sparse + low-rank matrix recovery, the sparse PCA
//! semidefinite relaxation, and sparse multicomposite quadratic programs),
//! and [`baselines`] implements proximal-splitting comparison solvers
//! (generalized forward-backward and incremental proximal descent) built on
//! full-SVD trace-norm shrinkage.
//!
//! All randomness is seeded and the solvers are deterministic: identical
//! inputs and seeds produce bit-identical iterate traces.

pub mod baselines;
pub mod linalg;
pub mod oracles;
pub mod problems;
pub mod selftest;
pub mod solvers;

mod error;

pub use error::{Error, Result};

#[cfg(test)]
pub(crate) mod testsupport;
