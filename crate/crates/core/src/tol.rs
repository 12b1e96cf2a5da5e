//! Centralized numerical tolerances.
//!
//! Every threshold used by the library and its verification suite lives
//! here. The closed forms in this crate are exact in real arithmetic, so
//! most tolerances only absorb floating-point rounding; the looser ones
//! belong to numerical integration and finite differences.

/// Closed-form table comparisons. Values such as `-1/2` or `3/2*sqrt(2)`
/// are exact; only a handful of multiplications separate them from the
/// computed result.
pub const TABLE_TOL: f64 = 1e-12;

/// Causal classification threshold on q(u) = a^2 + 2bc + d^2.
/// |q| below this counts as lightlike. Lightlike vectors form a
/// measure-zero cone, so tests that need them construct them exactly.
pub const CAUSAL_TOL: f64 = 1e-10;

/// Nondegeneracy threshold for the plane denominator
/// k(u,u)k(v,v) - k(u,v)^2 in the sectional curvature.
pub const PLANE_TOL: f64 = 1e-10;

/// Branch selection for the Jacobi closed form: |a^2 - b^2 - c^2| below
/// this switches to the polynomial (degenerate) modes.
pub const JACOBI_BRANCH_TOL: f64 = 1e-8;

/// Agreement between the Jacobi closed form and the RK4 integrator on
/// [0, 1] with 1000 steps.
pub const JACOBI_CROSS_TOL: f64 = 1e-6;

/// Conservation of k(y,y) and k(x0,y) along parallel transport,
/// [0, 1] with 1000 RK4 steps.
pub const TRANSPORT_CONSERVATION_TOL: f64 = 1e-8;

/// Matrix identities that compose a few exponentials/products, e.g. the
/// one-parameter subgroup law and the lightlike closed form vs exp.
pub const CURVE_TOL: f64 = 1e-9;

/// Invertibility threshold for metric operators and frame metrics.
pub const SINGULAR_TOL: f64 = 1e-10;

/// Series switch-over for sin(x)/x style limits in the 2x2 exponential
/// and the lightlike closed form.
pub const SINC_SERIES_TOL: f64 = 1e-6;

/// Denominator guard in the closed-form SPD square root
/// (T + sqrt(det T) I) / sqrt(trace T + 2 sqrt(det T)).
pub const SQRT_DENOM_TOL: f64 = 1e-12;

/// Duality and coordinate-expression checks in the natural chart.
pub const COORD_TOL: f64 = 1e-10;

/// Homomorphism property of the covering projection.
pub const COVER_HOM_TOL: f64 = 1e-10;

/// Cover multiplication associativity and the cross-check between the
/// two product formulas (matrix square root vs corrected angle form).
pub const COVER_TOL: f64 = 1e-9;

/// Jacobi identity, ad-antisymmetry and tidal-trace identities over
/// random samples (a few hundred bracket compositions).
pub const IDENTITY_TOL: f64 = 1e-10;

/// Path-independence of the developing map line integral.
pub const DEV_PATH_TOL: f64 = 1e-8;

/// Central-difference gradient of the Hessian potential (h = 1e-5).
pub const FD_GRADIENT_TOL: f64 = 1e-6;

/// Central-difference Hessian of the potential.
pub const FD_HESSIAN_TOL: f64 = 1e-5;

/// Finite-difference geodesic-variation oracle for the Jacobi system
/// (h = 1e-4, second differences).
pub const FD_JACOBI_TOL: f64 = 1e-3;

/// Step used by central-difference gradients.
pub const FD_STEP: f64 = 1e-5;

/// Step used by the geodesic-variation oracle.
pub const FD_JACOBI_STEP: f64 = 1e-4;
