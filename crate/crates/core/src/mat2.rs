//! Real 2x2 matrices with the closed forms the rest of the crate relies
//! on: exponential, SPD square root, polar decomposition.

use std::ops::{Add, Mul, Neg, Sub};

use crate::tol::{SINC_SERIES_TOL, SQRT_DENOM_TOL};

/// Row-major 2x2 real matrix [[a, b], [c, d]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2::new(0.0, 0.0, 0.0, 0.0);
    pub const IDENTITY: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    /// Counterclockwise rotation by angle `t`.
    pub fn rotation(t: f64) -> Self {
        let (s, c) = t.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    /// Entries in row-major order, matching the natural coordinates
    /// (x1, x2, x3, x4).
    pub fn to_array(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn from_array(x: [f64; 4]) -> Self {
        Mat2::new(x[0], x[1], x[2], x[3])
    }

    pub fn trace(self) -> f64 {
        self.a + self.d
    }

    pub fn det(self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn transpose(self) -> Self {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    pub fn scale(self, s: f64) -> Self {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn inverse(self) -> Option<Self> {
        let det = self.det();
        if det == 0.0 {
            return None;
        }
        Some(Mat2::new(
            self.d / det,
            -self.b / det,
            -self.c / det,
            self.a / det,
        ))
    }

    pub fn norm_inf(self) -> f64 {
        self.a
            .abs()
            .max(self.b.abs())
            .max(self.c.abs())
            .max(self.d.abs())
    }

    pub fn is_symmetric(self, tol: f64) -> bool {
        (self.b - self.c).abs() <= tol
    }

    /// Symmetric positive-definite test via trace/det (both eigenvalues
    /// positive iff trace > 0 and det > 0 for a symmetric matrix).
    pub fn is_spd(self, sym_tol: f64) -> bool {
        self.is_symmetric(sym_tol) && self.trace() > 0.0 && self.det() > 0.0
    }

    /// Matrix exponential, exact 2x2 structure: with M = mu*I + N where N
    /// is trace-free and N^2 = delta*I, exp(M) = e^mu (C(delta) I + S(delta) N)
    /// using the cosh/cos and sinh/sin branches on the sign of delta and a
    /// series near zero.
    pub fn exp(self) -> Self {
        let mu = self.trace() / 2.0;
        let n = self - Mat2::IDENTITY.scale(mu);
        // N^2 = delta I with delta = n.a^2 + n.b*n.c (n.d = -n.a).
        let delta = n.a * n.a + n.b * n.c;
        let (cosf, sincf) = cos_sinc_pair(delta);
        (Mat2::IDENTITY.scale(cosf) + n.scale(sincf)).scale(mu.exp())
    }

    /// Square root of a symmetric positive-definite matrix, closed form
    /// T^(1/2) = (T + sqrt(det T) I) / sqrt(trace T + 2 sqrt(det T)),
    /// with an eigendecomposition fallback when the denominator degenerates.
    pub fn sqrt_spd(self) -> Self {
        debug_assert!(self.is_spd(1e-9), "sqrt_spd needs an SPD matrix");
        let root_det = self.det().sqrt();
        let denom_sq = self.trace() + 2.0 * root_det;
        if denom_sq > SQRT_DENOM_TOL {
            (self + Mat2::IDENTITY.scale(root_det)).scale(1.0 / denom_sq.sqrt())
        } else {
            self.sqrt_spd_eigen()
        }
    }

    fn sqrt_spd_eigen(self) -> Self {
        // Symmetric 2x2 eigendecomposition; b == c up to rounding.
        let half_tr = self.trace() / 2.0;
        let off = 0.5 * (self.b + self.c);
        let disc = ((self.a - self.d) / 2.0).hypot(off);
        let l1 = half_tr + disc;
        let l2 = half_tr - disc;
        let theta = 0.5 * (2.0 * off).atan2(self.a - self.d);
        let (s, c) = theta.sin_cos();
        let r1 = l1.max(0.0).sqrt();
        let r2 = l2.max(0.0).sqrt();
        Mat2::new(
            r1 * c * c + r2 * s * s,
            (r1 - r2) * s * c,
            (r1 - r2) * s * c,
            r1 * s * s + r2 * c * c,
        )
    }

    /// Polar decomposition of a matrix with positive determinant:
    /// returns (t, T) with rotation(t) * T = self, T SPD, t in (-pi, pi].
    pub fn polar(self) -> (f64, Mat2) {
        debug_assert!(self.det() > 0.0, "polar needs det > 0");
        let spd = (self.transpose() * self).sqrt_spd();
        let rot = self * spd.inverse().expect("SPD factor is invertible");
        // For a rotation [[cos, -sin], [sin, cos]]: t = atan2(m21, m11).
        let t = rot.c.atan2(rot.a);
        (t, spd)
    }
}

/// (C, S) with C = cos(sqrt(-delta)) / cosh(sqrt(delta)) and
/// S = sin(sqrt(-delta))/sqrt(-delta) / sinh(sqrt(delta))/sqrt(delta),
/// continued analytically through delta = 0 by series.
fn cos_sinc_pair(delta: f64) -> (f64, f64) {
    if delta.abs() < SINC_SERIES_TOL {
        // cos-like: 1 + d/2 + d^2/24; sinc-like: 1 + d/6 + d^2/120.
        let c = 1.0 + delta / 2.0 + delta * delta / 24.0;
        let s = 1.0 + delta / 6.0 + delta * delta / 120.0;
        (c, s)
    } else if delta > 0.0 {
        let r = delta.sqrt();
        (r.cosh(), r.sinh() / r)
    } else {
        let r = (-delta).sqrt();
        (r.cos(), r.sin() / r)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}
