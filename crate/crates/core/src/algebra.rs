//! The Lie algebra gl(2,R) with the trace form k, its orthonormal basis,
//! brackets, the Cartan-Killing form, and the causal structure of the
//! resulting Minkowski space.
//!
//! The basis is fixed once and for all as
//!
//! ```text
//! e1 = (sqrt2/2) [[0, 1], [-1, 0]]   (timelike)
//! e2 = (sqrt2/2) [[0, 1], [ 1, 0]]
//! e3 = (sqrt2/2) [[1, 0], [0, -1]]
//! e4 = (sqrt2/2) [[1, 0], [0,  1]]
//! ```
//!
//! and index 0 of every coefficient array is the timelike direction.
//! The form k(u, v) = trace(uv) has the Gram matrix diag(-1, 1, 1, 1)
//! on this basis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{GeomError, Result};
use crate::linalg::Mat4;
use crate::mat2::Mat2;
use crate::tol::CAUSAL_TOL;

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;
pub const FRAC_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Signature weights of k on the orthonormal basis.
pub const SIGNATURE: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

/// Element of gl(2,R), stored as coefficients over (e1, e2, e3, e4).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraVector {
    coeffs: [f64; 4],
}

impl AlgebraVector {
    pub const ZERO: AlgebraVector = AlgebraVector { coeffs: [0.0; 4] };

    pub fn from_coeffs(coeffs: [f64; 4]) -> Self {
        AlgebraVector { coeffs }
    }

    /// Basis vector e_{i+1} for i in 0..4.
    pub fn basis(i: usize) -> Self {
        let mut coeffs = [0.0; 4];
        coeffs[i] = 1.0;
        AlgebraVector { coeffs }
    }

    pub fn coeffs(&self) -> [f64; 4] {
        self.coeffs
    }

    /// Expansion over the basis; total on all 2x2 matrices since the
    /// basis spans gl(2,R). With entries [[a, b], [c, d]]:
    /// f = ((b-c)/sqrt2, (b+c)/sqrt2, (a-d)/sqrt2, (a+d)/sqrt2).
    pub fn from_matrix(m: Mat2) -> Self {
        AlgebraVector {
            coeffs: [
                (m.b - m.c) / SQRT_2,
                (m.b + m.c) / SQRT_2,
                (m.a - m.d) / SQRT_2,
                (m.a + m.d) / SQRT_2,
            ],
        }
    }

    pub fn to_matrix(&self) -> Mat2 {
        let [f1, f2, f3, f4] = self.coeffs;
        Mat2::new(
            FRAC_SQRT_2 * (f3 + f4),
            FRAC_SQRT_2 * (f1 + f2),
            FRAC_SQRT_2 * (f2 - f1),
            FRAC_SQRT_2 * (f4 - f3),
        )
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }
}

impl Add for AlgebraVector {
    type Output = AlgebraVector;
    fn add(self, o: AlgebraVector) -> AlgebraVector {
        let mut coeffs = self.coeffs;
        for (c, oc) in coeffs.iter_mut().zip(o.coeffs) {
            *c += oc;
        }
        AlgebraVector { coeffs }
    }
}

impl Sub for AlgebraVector {
    type Output = AlgebraVector;
    fn sub(self, o: AlgebraVector) -> AlgebraVector {
        let mut coeffs = self.coeffs;
        for (c, oc) in coeffs.iter_mut().zip(o.coeffs) {
            *c -= oc;
        }
        AlgebraVector { coeffs }
    }
}

impl Mul<f64> for AlgebraVector {
    type Output = AlgebraVector;
    fn mul(self, s: f64) -> AlgebraVector {
        AlgebraVector {
            coeffs: self.coeffs.map(|c| c * s),
        }
    }
}

impl Neg for AlgebraVector {
    type Output = AlgebraVector;
    fn neg(self) -> AlgebraVector {
        self * -1.0
    }
}

/// Point of the identity component: a 2x2 matrix with positive determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupPoint {
    m: Mat2,
}

impl GroupPoint {
    pub fn new(m: Mat2) -> Result<Self> {
        let det = m.det();
        if det <= 0.0 {
            return Err(GeomError::NonPositiveDeterminant { det });
        }
        Ok(GroupPoint { m })
    }

    pub fn identity() -> Self {
        GroupPoint { m: Mat2::IDENTITY }
    }

    pub fn matrix(&self) -> Mat2 {
        self.m
    }

    pub fn det(&self) -> f64 {
        self.m.det()
    }

    pub fn inverse(&self) -> GroupPoint {
        GroupPoint {
            m: self.m.inverse().expect("positive determinant"),
        }
    }

    pub fn compose(&self, o: &GroupPoint) -> GroupPoint {
        GroupPoint { m: self.m * o.m }
    }
}

/// Causal type of a tangent vector under k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalType {
    Timelike,
    Lightlike,
    Spacelike,
}

impl fmt::Display for CausalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CausalType::Timelike => write!(f, "timelike"),
            CausalType::Lightlike => write!(f, "lightlike"),
            CausalType::Spacelike => write!(f, "spacelike"),
        }
    }
}

/// Position relative to the timecone containing e1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeconeSide {
    Forward,
    Backward,
    NotTimelike,
}

impl fmt::Display for TimeconeSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeconeSide::Forward => write!(f, "forward"),
            TimeconeSide::Backward => write!(f, "backward"),
            TimeconeSide::NotTimelike => write!(f, "not-timelike"),
        }
    }
}

/// Lie bracket `[u, v] = uv - vu`, computed on matrices and expanded back
/// over the basis. The nonzero basis brackets are
/// `[e1,e2] = sqrt2 e3`, `[e1,e3] = -sqrt2 e2`, `[e2,e3] = -sqrt2 e1`.
pub fn bracket(u: &AlgebraVector, v: &AlgebraVector) -> AlgebraVector {
    let (mu, mv) = (u.to_matrix(), v.to_matrix());
    AlgebraVector::from_matrix(mu * mv - mv * mu)
}

/// k(u, v) = trace(uv).
pub fn k_form(u: &AlgebraVector, v: &AlgebraVector) -> f64 {
    let (cu, cv) = (u.coeffs(), v.coeffs());
    (0..4).map(|i| SIGNATURE[i] * cu[i] * cv[i]).sum()
}

/// The matrix of ad_u on the basis: column j holds `[u, e_j]`.
pub fn ad_matrix(u: &AlgebraVector) -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for j in 0..4 {
        let col = bracket(u, &AlgebraVector::basis(j)).coeffs();
        for i in 0..4 {
            m[i][j] = col[i];
        }
    }
    m
}

/// Cartan-Killing form B(u, v) = trace(ad_u ad_v). On the basis:
/// B(e1,e1) = -4, B(e2,e2) = B(e3,e3) = 4, B(e4,e4) = 0, off-diagonal 0.
pub fn killing_form(u: &AlgebraVector, v: &AlgebraVector) -> f64 {
    let (au, av) = (ad_matrix(u), ad_matrix(v));
    let mut tr = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            tr += au[i][j] * av[j][i];
        }
    }
    tr
}

/// The lightcone quadric q(u) = a^2 + 2bc + d^2 on matrix entries
/// [[a, b], [c, d]]. Identically equal to k(u, u).
pub fn causal_quadric(u: &AlgebraVector) -> f64 {
    let m = u.to_matrix();
    m.a * m.a + 2.0 * m.b * m.c + m.d * m.d
}

/// Causal classification from the sign of q(u), with |q| < CAUSAL_TOL
/// classified lightlike.
pub fn classify(u: &AlgebraVector) -> CausalType {
    let q = causal_quadric(u);
    if q.abs() < CAUSAL_TOL {
        CausalType::Lightlike
    } else if q < 0.0 {
        CausalType::Timelike
    } else {
        CausalType::Spacelike
    }
}

/// Side of the timecone `C(e1) = { [[a,b],[c,d]] : c < b, q < 0 }`.
/// Membership agrees with the sign test k(e1, u) < 0, since
/// k(e1, u) = (c - b)/sqrt2 on matrix entries.
pub fn in_timecone_e1(u: &AlgebraVector) -> Result<TimeconeSide> {
    if classify(u) != CausalType::Timelike {
        return Ok(TimeconeSide::NotTimelike);
    }
    let m = u.to_matrix();
    if (m.b - m.c).abs() < CAUSAL_TOL {
        // Timelike with b = c would make u k-orthogonal to the timelike
        // e1, which is impossible; only reachable within tolerance.
        return Err(GeomError::DegenerateTimecone);
    }
    if m.c < m.b {
        Ok(TimeconeSide::Forward)
    } else {
        Ok(TimeconeSide::Backward)
    }
}

/// Whether the convex combination t*u + (1-t)*v of two same-cone timelike
/// vectors is again timelike in that cone. Always true for valid inputs
/// (timecones are convex); exposed as a checkable operation.
pub fn timecone_convexity_check(u: &AlgebraVector, v: &AlgebraVector, t: f64) -> Result<bool> {
    if !(0.0..=1.0).contains(&t) {
        return Err(GeomError::InvalidInput(format!(
            "combination parameter {t} outside [0, 1]"
        )));
    }
    let su = in_timecone_e1(u)?;
    let sv = in_timecone_e1(v)?;
    match (su, sv) {
        (TimeconeSide::Forward, TimeconeSide::Forward)
        | (TimeconeSide::Backward, TimeconeSide::Backward) => {}
        _ => {
            return Err(GeomError::InvalidInput(
                "inputs must be timelike and in the same timecone".into(),
            ))
        }
    }
    let w = *u * t + *v * (1.0 - t);
    Ok(classify(&w) == CausalType::Timelike && in_timecone_e1(&w)? == su)
}
