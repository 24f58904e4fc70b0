//! The first-order computational oracles the solvers are built from:
//! smooth terms (value + gradient), Lipschitz terms (value + proximity
//! operator), bounded domains (dual subgradient / linear minimization
//! oracle), and bounded linear maps.

mod domains;
mod maps;
mod prox;

pub use domains::{
    lmo_l1_ball, lmo_psd_trace_ball, lmo_spectrahedron, lmo_trace_ball, L1Ball, L2Ball,
    PsdTraceBall, Spectrahedron, TraceBall,
};
pub use maps::{IdentityMap, MatrixOperator};
pub use prox::{moreau_gradient, moreau_value, soft_threshold, L1Norm};

use crate::linalg::Point;

/// A convex function with Hölder continuous gradient: `f` with
/// `||∇f(x) − ∇f(y)|| ≤ L ||x − y||^p` for `p ∈ (0, 1]`.
pub trait SmoothTerm<P: Point> {
    fn value(&self, x: &P) -> f64;

    fn gradient(&self, x: &P) -> P;

    /// Hölder exponent `p`; `1` means Lipschitz-continuous gradient.
    fn holder_exponent(&self) -> f64 {
        1.0
    }

    /// Hölder constant `L_f` of the gradient.
    fn holder_const(&self) -> f64;

    /// Hook invoked by the solvers after the update
    /// `x_new = (1 - alpha) x_old + alpha y`, so quadratic objectives can
    /// refresh a cached gradient incrementally instead of recomputing it.
    fn step_update(&mut self, _x_new: &P, _y: &P, _alpha: f64) {}
}

/// A Lipschitz continuous convex function accessed through its proximity
/// operator `prox(x, beta) = argmin_u (1/(2 beta)) ||x − u||^2 + g(u)`.
pub trait LipschitzTerm<P: Point> {
    fn value(&self, x: &P) -> f64;

    fn prox(&self, x: &P, beta: f64) -> P;

    /// Lipschitz constant `L_g` in the Euclidean norm.
    fn lipschitz_const(&self) -> f64;
}

/// A bounded linear operator together with its adjoint and an upper bound on
/// its operator norm.
pub trait LinearMap<X: Point, Y: Point> {
    fn apply(&self, x: &X) -> Y;

    fn adjoint(&self, y: &Y) -> X;

    /// An upper bound on `||A||` (need not be tight).
    fn norm_bound(&self) -> f64;
}

/// Output of a linear minimization oracle call.
#[derive(Clone, Debug)]
pub struct Lmo<P> {
    pub point: P,
    /// False when an inner spectral iteration ran out of its budget; the
    /// returned point is still feasible and usable.
    pub converged: bool,
    pub iterations: usize,
}

impl<P> Lmo<P> {
    pub fn exact(point: P) -> Self {
        Self {
            point,
            converged: true,
            iterations: 0,
        }
    }
}

/// A bounded convex domain accessed through linear maximization: the oracle
/// returns a point of the domain maximizing `<y, direction>`, i.e. an
/// element of the subdifferential of the support function at `direction`.
pub trait BoundedDomain<P: Point> {
    /// `argmax { <y, direction> : y in the domain }`. The seed drives any
    /// internal randomized iteration; calls are deterministic given
    /// `(direction, seed)`.
    fn linear_maximizer(&self, direction: &P, seed: u64) -> Lmo<P>;

    /// Radius `rho` of a Euclidean ball containing the domain.
    fn radius(&self) -> f64;

    /// Feasibility residual: zero (up to round-off) exactly on the domain.
    fn membership_residual(&self, x: &P) -> f64;
}

/// The identically-zero smooth term, for solves with no smooth part.
#[derive(Clone, Copy, Debug, Default)]
pub struct NullSmooth;

impl<P: Point> SmoothTerm<P> for NullSmooth {
    fn value(&self, _x: &P) -> f64 {
        0.0
    }

    fn gradient(&self, x: &P) -> P {
        x.zeros_like()
    }

    fn holder_const(&self) -> f64 {
        0.0
    }
}
