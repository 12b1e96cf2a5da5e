//! The bi-invariant flat affine structure from matrix multiplication,
//! the universal covering group R x SDP(2) with its lifted product, the
//! developing map, and the Hessian potential.

use crate::algebra::{AlgebraVector, GroupPoint};
use crate::error::{GeomError, Result};
use crate::linalg::Mat4;
use crate::mat2::Mat2;
use crate::tol::TABLE_TOL;

/// Point of the universal cover: an unbounded angle and a symmetric
/// positive-definite factor, projecting to rotation(t) * spd.
#[derive(Debug, Clone, Copy)]
pub struct CoverPoint {
    t: f64,
    spd: Mat2,
}

impl CoverPoint {
    pub fn new(t: f64, spd: Mat2) -> Result<Self> {
        if !spd.is_spd(TABLE_TOL) {
            return Err(GeomError::NotSpd);
        }
        Ok(CoverPoint { t, spd })
    }

    pub fn identity() -> Self {
        CoverPoint {
            t: 0.0,
            spd: Mat2::IDENTITY,
        }
    }

    pub fn angle(&self) -> f64 {
        self.t
    }

    pub fn spd(&self) -> Mat2 {
        self.spd
    }
}

/// Local coordinates (y1, y2, y3, y4) of the cover with the SPD factor
/// [[y2, y3], [y3, y4]].
#[derive(Debug, Clone, Copy)]
pub struct CoverCoords {
    y: [f64; 4],
}

impl CoverCoords {
    pub fn new(y: [f64; 4]) -> Result<Self> {
        let [_, y2, y3, y4] = y;
        if y2 <= 0.0 || y4 <= 0.0 || y2 * y4 - y3 * y3 <= 0.0 {
            return Err(GeomError::NotCoverCoords);
        }
        Ok(CoverCoords { y })
    }

    pub fn coords(&self) -> [f64; 4] {
        self.y
    }

    pub fn to_point(&self) -> CoverPoint {
        let [y1, y2, y3, y4] = self.y;
        CoverPoint {
            t: y1,
            spd: Mat2::new(y2, y3, y3, y4),
        }
    }

    pub fn from_point(p: &CoverPoint) -> Self {
        let s = p.spd();
        let off = 0.5 * (s.b + s.c);
        CoverCoords {
            y: [p.angle(), s.a, off, s.d],
        }
    }

    /// Basepoint over the identity: (0, 1, 0, 1).
    pub fn basepoint() -> Self {
        CoverCoords {
            y: [0.0, 1.0, 0.0, 1.0],
        }
    }
}

/// The flat affine product: nabla_{u+} v+ = (u v)+ on left-invariant
/// fields, realized as the matrix product expanded over the basis.
/// Associativity of matrix multiplication is exactly the flatness of
/// the connection.
pub fn flat_affine_product(u: &AlgebraVector, v: &AlgebraVector) -> AlgebraVector {
    AlgebraVector::from_matrix(u.to_matrix() * v.to_matrix())
}

/// Polar decomposition of a positive-determinant matrix into a cover
/// point: g = rotation(t) * (g^T g)^{1/2} with t in (-pi, pi].
pub fn polar_decompose(g: &GroupPoint) -> CoverPoint {
    let (t, spd) = g.matrix().polar();
    CoverPoint { t, spd }
}

/// Covering projection (t, T) -> rotation(t) * T.
pub fn cover_project(p: &CoverPoint) -> GroupPoint {
    GroupPoint::new(Mat2::rotation(p.angle()) * p.spd())
        .expect("rotation times SPD has positive determinant")
}

fn correction_angle(p: &CoverPoint, q: &CoverPoint) -> Result<f64> {
    // theta = trace(O_{-r} T O_r R w) / trace(O_{-r} T O_r R),
    // w = [[0, 1], [-1, 0]]; the denominator is the trace of a product
    // of SPD matrices, positive in exact arithmetic.
    let inner = Mat2::rotation(-q.angle()) * p.spd() * Mat2::rotation(q.angle()) * q.spd();
    let omega = Mat2::new(0.0, 1.0, -1.0, 0.0);
    let denom = inner.trace();
    if denom.abs() < 1e-12 {
        return Err(GeomError::FormulaBreakdown { denom });
    }
    Ok(((inner * omega).trace() / denom).atan())
}

/// Product on the cover, angle-correction form:
/// (t, T) . (r, R) = (arctan(theta) + t + r, O_{-arctan(theta) - r} T O_r R).
/// The angle component accumulates over R and is never reduced mod 2pi.
pub fn cover_multiply(p: &CoverPoint, q: &CoverPoint) -> Result<CoverPoint> {
    let ang = correction_angle(p, q)?;
    let second = Mat2::rotation(-ang - q.angle()) * p.spd() * Mat2::rotation(q.angle()) * q.spd();
    if !second.is_spd(crate::tol::COVER_HOM_TOL) {
        return Err(GeomError::NotSpd);
    }
    // Symmetrize away the rounding skew before constructing the point.
    let off = 0.5 * (second.b + second.c);
    CoverPoint::new(
        ang + p.angle() + q.angle(),
        Mat2::new(second.a, off, off, second.d),
    )
}

/// Product on the cover, matrix-square-root form: the second component
/// is (R O_{-r} T^2 O_r R)^{1/2}, i.e. the SPD polar factor of the
/// projected product. Used as a cross-check of `cover_multiply`.
pub fn cover_multiply_sqrt_route(p: &CoverPoint, q: &CoverPoint) -> Mat2 {
    let t2 = p.spd() * p.spd();
    (q.spd() * Mat2::rotation(-q.angle()) * t2 * Mat2::rotation(q.angle()) * q.spd()).sqrt_spd()
}

/// The developing map of the flat affine structure in cover coordinates:
/// (y1, y2, y3, y4) -> (y1, y2 - 1, y3, y4 - 1); the basepoint
/// (0, 1, 0, 1) goes to the origin.
pub fn developing_map(y: &CoverCoords) -> [f64; 4] {
    let [y1, y2, y3, y4] = y.coords();
    [y1, y2 - 1.0, y3, y4 - 1.0]
}

/// Hessian potential f(M) = trace(M^2) / 2.
pub fn hessian_potential(p: &GroupPoint) -> f64 {
    let m = p.matrix();
    (m * m).trace() / 2.0
}

/// Gradient of the potential in natural coordinates: (x1, x3, x2, x4).
pub fn hessian_gradient(p: &GroupPoint) -> [f64; 4] {
    let [x1, x2, x3, x4] = p.matrix().to_array();
    [x1, x3, x2, x4]
}

/// The constant coordinate Hessian of the potential: rows
/// (1,0,0,0), (0,0,1,0), (0,1,0,0), (0,0,0,1); eigenvalues {-1, 1, 1, 1}.
pub fn hessian_matrix() -> Mat4 {
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
}
