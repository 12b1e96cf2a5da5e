//! Numerical geometry of the identity component of GL(2, R) as a
//! Lorentzian manifold (bi-invariant trace-form metric) and as a flat
//! affine manifold (matrix-multiplication connection).
//!
//! The crate realizes the closed-form curvature stack, causal structure,
//! geodesics, Jacobi fields and parallel transport of the Lorentzian
//! side, and the universal cover, developing map and Hessian potential
//! of the affine side, together with a verification suite that
//! cross-validates every closed form against independent numerics.
//!
//! With the `parallel` feature (default) the verification sweeps run on
//! a rayon pool; without it they run sequentially with identical results.

// Dense frame-index math reads best with plain index loops.
#![allow(clippy::needless_range_loop)]

pub mod affine;
pub mod algebra;
pub mod coords;
pub mod curvature;
pub mod dynamics;
mod error;
pub mod linalg;
pub mod mat2;
pub mod tol;
pub mod verify;

pub use error::{GeomError, Result};
