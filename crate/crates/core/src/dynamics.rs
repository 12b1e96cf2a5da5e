//! Geodesics through the identity, parallel transport along them via the
//! reflected ODE system, Jacobi fields (closed form and integrated), the
//! reflection machinery, and the geodesic-reversing isometries.
//!
//! Everything here works in reflection coordinates: a field Y along a
//! curve sigma is represented by the algebra-valued curve
//! y(t) = sigma(t)^{-1} Y(t). Along exp-geodesics the reflected velocity
//! is constant, which turns both the transport and Jacobi equations into
//! constant-coefficient linear systems.

use crate::algebra::{AlgebraVector, GroupPoint, SQRT_2};
use crate::error::{GeomError, Result};
use crate::linalg::{mat4_vec, Mat4, MAT4_ZERO};
use crate::mat2::Mat2;
use crate::tol::{CAUSAL_TOL, JACOBI_BRANCH_TOL, SINC_SERIES_TOL};

/// A geodesic through a start point with a given initial velocity
/// (reflection coefficients over the basis).
#[derive(Debug, Clone, Copy)]
pub struct GeodesicSpec {
    pub initial_point: GroupPoint,
    pub initial_velocity: AlgebraVector,
}

/// Time-stamped states produced by an integrator.
#[derive(Debug, Clone)]
pub struct CurveSample<S> {
    times: Vec<f64>,
    states: Vec<S>,
}

impl<S> CurveSample<S> {
    pub fn new(times: Vec<f64>, states: Vec<S>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(GeomError::InvalidInput(
                "times and states must have equal length".into(),
            ));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GeomError::InvalidInput(
                "times must be strictly increasing".into(),
            ));
        }
        Ok(CurveSample { times, states })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &S)> {
        self.times.iter().copied().zip(self.states.iter())
    }
}

/// Classical fixed-step RK4 over a fixed-size state.
fn rk4<const N: usize>(
    f: impl Fn(&[f64; N]) -> [f64; N],
    y0: [f64; N],
    t1: f64,
    steps: usize,
) -> (Vec<f64>, Vec<[f64; N]>) {
    let h = t1 / steps as f64;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut y = y0;
    times.push(0.0);
    states.push(y);
    let axpy = |y: &[f64; N], s: f64, d: &[f64; N]| {
        let mut out = *y;
        for i in 0..N {
            out[i] += s * d[i];
        }
        out
    };
    for step in 0..steps {
        let k1 = f(&y);
        let k2 = f(&axpy(&y, h / 2.0, &k1));
        let k3 = f(&axpy(&y, h / 2.0, &k2));
        let k4 = f(&axpy(&y, h, &k3));
        for i in 0..N {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        times.push((step + 1) as f64 * h);
        states.push(y);
    }
    (times, states)
}

/// The geodesic through the identity with initial velocity u, evaluated
/// at parameter s: the matrix exponential of s u.
pub fn exp_geodesic(u: &AlgebraVector, s: f64) -> GroupPoint {
    let m = u.to_matrix().scale(s).exp();
    GroupPoint::new(m).expect("exponentials have positive determinant")
}

fn entry_data(u: &AlgebraVector) -> (f64, f64, f64, f64) {
    let m = u.to_matrix();
    (m.a, m.b, m.c, m.d)
}

/// The closed-form integral curve of a lightlike direction
/// [[a, b], [c, d]] with a^2 + 2bc + d^2 = 0:
///
/// alpha(s) = e^{(a+d)s/2} [ cos(th s/2) I + (2 sin(th s/2)/th) N ]
///
/// with N the trace-free part and th the modulus of the complex root
/// sqrt(2bc - 2ad); on the lightcone 2bc - 2ad = -(a+d)^2, so th = |a+d|
/// and th -> 0 degenerates to the sinc limit sin(x)/x -> 1.
pub fn lightlike_curve(u: &AlgebraVector, s: f64) -> Result<GroupPoint> {
    let (a, b, c, d) = entry_data(u);
    let q = a * a + 2.0 * b * c + d * d;
    if q.abs() >= CAUSAL_TOL {
        return Err(GeomError::NotLightlike { q });
    }
    let theta = (2.0 * b * c - 2.0 * a * d).abs().sqrt();
    let half = theta * s / 2.0;
    // cos(th s/2) and sin(th s/2)/th, with series below the switch-over.
    let (cosf, sincf) = if (theta * s).abs() < SINC_SERIES_TOL {
        (
            1.0 - half * half / 2.0,
            (s / 2.0) * (1.0 - half * half / 6.0),
        )
    } else {
        (half.cos(), half.sin() / theta)
    };
    let pref = ((a + d) * s / 2.0).exp();
    let m = Mat2::new(
        pref * (cosf + (a - d) * sincf),
        pref * (2.0 * b * sincf),
        pref * (2.0 * c * sincf),
        pref * (cosf - (a - d) * sincf),
    );
    GroupPoint::new(m)
}

/// Closed-form trace/determinant data for a lightlike integral curve,
/// next to the values of the evaluated matrix.
///
/// The determinant formula is the printed one read with squared
/// trigonometric factors, which reproduces the evaluated determinant
/// exactly: e^{(a+d)s}(cos^2(th s/2) + 2 (ad - bc)/th^2 sin^2(th s/2)).
/// The printed trace formula e^{(a+d)s/2} cos(th s/2) is kept literally;
/// it disagrees with the evaluated trace (already at s = 0, where it
/// gives 1 against trace(I) = 2), and the deviation is reported rather
/// than asserted.
#[derive(Debug, Clone, Copy)]
pub struct LightlikeCurveAudit {
    pub trace_eval: f64,
    pub det_eval: f64,
    pub trace_formula: f64,
    pub det_formula: f64,
}

impl LightlikeCurveAudit {
    pub fn trace_deviation(&self) -> f64 {
        (self.trace_eval - self.trace_formula).abs()
    }

    pub fn det_deviation(&self) -> f64 {
        (self.det_eval - self.det_formula).abs()
    }
}

pub fn curve_trace_det_check(u: &AlgebraVector, s: f64) -> Result<LightlikeCurveAudit> {
    let alpha = lightlike_curve(u, s)?;
    let (a, b, c, d) = entry_data(u);
    let theta = (2.0 * b * c - 2.0 * a * d).abs().sqrt();
    let half = theta * s / 2.0;
    let trace_formula = ((a + d) * s / 2.0).exp() * half.cos();
    let det_formula = if theta < 1e-12 {
        ((a + d) * s).exp()
    } else {
        ((a + d) * s).exp()
            * (half.cos().powi(2) + 2.0 * ((a * d - b * c) / (theta * theta)) * half.sin().powi(2))
    };
    Ok(LightlikeCurveAudit {
        trace_eval: alpha.matrix().trace(),
        det_eval: alpha.matrix().det(),
        trace_formula,
        det_formula,
    })
}

/// Right-hand side of the reflected parallel-transport system along a
/// geodesic with constant reflected velocity x = (x1, x2, x3, x4):
///
/// y1' = (sqrt2/2)(y3 x2 - y2 x3)
/// y2' = (sqrt2/2)(y3 x1 - y1 x3)
/// y3' = (sqrt2/2)(y1 x2 - y2 x1)
/// y4' = 0
fn transport_rhs(x: &[f64; 4], y: &[f64; 4]) -> [f64; 4] {
    let h = SQRT_2 / 2.0;
    [
        h * (y[2] * x[1] - y[1] * x[2]),
        h * (y[2] * x[0] - y[0] * x[2]),
        h * (y[0] * x[1] - y[1] * x[0]),
        0.0,
    ]
}

/// Parallel transport of y0 along the geodesic exp(t x0), returned as a
/// sampled curve of reflected vectors. The start point must be the
/// identity and the horizon t1 positive.
pub fn parallel_transport(
    spec: &GeodesicSpec,
    y0: &AlgebraVector,
    t1: f64,
    steps: usize,
) -> Result<CurveSample<AlgebraVector>> {
    if (spec.initial_point.matrix() - Mat2::IDENTITY).norm_inf() > 1e-12 {
        return Err(GeomError::NonIdentityStart);
    }
    if steps == 0 {
        return Err(GeomError::ZeroSteps);
    }
    if t1 <= 0.0 {
        return Err(GeomError::InvalidInput("t1 must be positive".into()));
    }
    let x = spec.initial_velocity.coeffs();
    let (times, states) = rk4(|y| transport_rhs(&x, y), y0.coeffs(), t1, steps);
    CurveSample::new(
        times,
        states.into_iter().map(AlgebraVector::from_coeffs).collect(),
    )
}

/// Coefficient matrix of the first-order Jacobi system z' = M z for
/// z = y' and velocity coefficients (a, b, c, d):
///
/// y1'' = -sqrt2 c y2' + sqrt2 b y3'
/// y2'' = -sqrt2 c y1' + sqrt2 a y3'
/// y3'' =  sqrt2 b y1' - sqrt2 a y2'
/// y4'' = 0
pub fn jacobi_matrix(velocity: &[f64; 4]) -> Mat4 {
    let [a, b, c, _] = *velocity;
    let mut m = MAT4_ZERO;
    m[0][1] = -SQRT_2 * c;
    m[0][2] = SQRT_2 * b;
    m[1][0] = -SQRT_2 * c;
    m[1][2] = SQRT_2 * a;
    m[2][0] = SQRT_2 * b;
    m[2][1] = -SQRT_2 * a;
    m
}

/// Literal right-hand side (y1'', y2'', y3'', y4'') of the Jacobi system.
pub fn jacobi_rhs(velocity: &[f64; 4], yprime: &[f64; 4]) -> [f64; 4] {
    mat4_vec(&jacobi_matrix(velocity), yprime)
}

/// State of the integrated Jacobi system: the field and its derivative.
#[derive(Debug, Clone, Copy)]
pub struct JacobiState {
    pub y: [f64; 4],
    pub yprime: [f64; 4],
}

/// RK4 integration of the Jacobi system as a first-order
/// eight-dimensional system.
pub fn jacobi_integrate(
    velocity: &[f64; 4],
    y0: &[f64; 4],
    yprime0: &[f64; 4],
    t1: f64,
    steps: usize,
) -> Result<CurveSample<JacobiState>> {
    if steps == 0 {
        return Err(GeomError::ZeroSteps);
    }
    if t1 <= 0.0 {
        return Err(GeomError::InvalidInput("t1 must be positive".into()));
    }
    let m = jacobi_matrix(velocity);
    let mut state0 = [0.0_f64; 8];
    state0[..4].copy_from_slice(y0);
    state0[4..].copy_from_slice(yprime0);
    let (times, states) = rk4(
        |s: &[f64; 8]| {
            let z = [s[4], s[5], s[6], s[7]];
            let zdot = mat4_vec(&m, &z);
            [z[0], z[1], z[2], z[3], zdot[0], zdot[1], zdot[2], zdot[3]]
        },
        state0,
        t1,
        steps,
    );
    CurveSample::new(
        times,
        states
            .into_iter()
            .map(|s| JacobiState {
                y: [s[0], s[1], s[2], s[3]],
                yprime: [s[4], s[5], s[6], s[7]],
            })
            .collect(),
    )
}

/// Branch of the Jacobi closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobiBranch {
    /// a^2 != b^2 + c^2: exponential modes e^{+-alpha t} with
    /// alpha^2 = 2(-a^2 + b^2 + c^2), trigonometric when alpha^2 < 0.
    Generic,
    /// a^2 = b^2 + c^2: polynomial modes up to t^3.
    Degenerate,
}

/// Mode constants of the closed-form solution, per branch.
#[derive(Debug, Clone, Copy)]
pub enum JacobiModes {
    /// y(t) = constant + linear t + plus e^{alpha t} + minus e^{-alpha t}
    Exponential {
        alpha: f64,
        constant: [f64; 4],
        linear: [f64; 4],
        plus: [f64; 4],
        minus: [f64; 4],
    },
    /// y(t) = constant + linear t + cos_term cos(omega t) + sin_term sin(omega t)
    Trigonometric {
        omega: f64,
        constant: [f64; 4],
        linear: [f64; 4],
        cos_term: [f64; 4],
        sin_term: [f64; 4],
    },
    /// y(t) = c0 + c1 t + c2 t^2 + c3 t^3
    Polynomial {
        c0: [f64; 4],
        c1: [f64; 4],
        c2: [f64; 4],
        c3: [f64; 4],
    },
}

/// Closed-form Jacobi field. The coefficient matrix M of the first-order
/// system satisfies M^3 = mu M with mu = 2(b^2 + c^2 - a^2), so
/// y(t) = y0 + (t I + G(t) M + H(t) M^2) y'(0) with scalar functions
/// G, H built from cosh/cos and sinh/sin of sqrt(|mu|) t. This solves
/// the mode-matching of the printed solution basis in closed form for
/// every branch; y4 stays exactly affine since M annihilates it.
#[derive(Debug, Clone)]
pub struct JacobiClosedForm {
    pub branch: JacobiBranch,
    pub velocity: [f64; 4],
    mu: f64,
    m: Mat4,
    m2: Mat4,
    y0: [f64; 4],
    z0: [f64; 4],
}

pub fn jacobi_closed_form(
    velocity: &[f64; 4],
    y0: &[f64; 4],
    yprime0: &[f64; 4],
) -> JacobiClosedForm {
    let [a, b, c, _] = *velocity;
    let discr = a * a - b * b - c * c;
    let branch = if discr.abs() <= JACOBI_BRANCH_TOL {
        JacobiBranch::Degenerate
    } else {
        JacobiBranch::Generic
    };
    let m = jacobi_matrix(velocity);
    let m2 = crate::linalg::mat4_mul(&m, &m);
    JacobiClosedForm {
        branch,
        velocity: *velocity,
        mu: -2.0 * discr,
        m,
        m2,
        y0: *y0,
        z0: *yprime0,
    }
}

impl JacobiClosedForm {
    /// Scalar mode functions (G, H) with
    /// exp(tM) = I + f M + g M^2 and W(t) = integral of exp(sM):
    /// W(t) = t I + G M + H M^2.
    fn gh(&self, t: f64) -> (f64, f64) {
        let mu = self.mu;
        if self.branch == JacobiBranch::Degenerate || mu.abs() < 1e-300 {
            return (t * t / 2.0, t * t * t / 6.0);
        }
        if mu > 0.0 {
            let al = mu.sqrt();
            (
                (((al * t).cosh()) - 1.0) / mu,
                ((al * t).sinh() / al - t) / mu,
            )
        } else {
            let om = (-mu).sqrt();
            (
                (((om * t).cos()) - 1.0) / mu,
                ((om * t).sin() / om - t) / mu,
            )
        }
    }

    pub fn evaluate(&self, t: f64) -> [f64; 4] {
        let (g, h) = self.gh(t);
        let mz = mat4_vec(&self.m, &self.z0);
        let m2z = mat4_vec(&self.m2, &self.z0);
        let mut y = self.y0;
        for i in 0..4 {
            y[i] += t * self.z0[i] + g * mz[i] + h * m2z[i];
        }
        y
    }

    /// Expansion constants over the branch's solution basis.
    pub fn modes(&self) -> JacobiModes {
        let mz = mat4_vec(&self.m, &self.z0);
        let m2z = mat4_vec(&self.m2, &self.z0);
        match self.branch {
            JacobiBranch::Degenerate => JacobiModes::Polynomial {
                c0: self.y0,
                c1: self.z0,
                c2: mz.map(|v| v / 2.0),
                c3: m2z.map(|v| v / 6.0),
            },
            JacobiBranch::Generic if self.mu > 0.0 => {
                let mu = self.mu;
                let alpha = mu.sqrt();
                let mut constant = self.y0;
                let mut linear = self.z0;
                let mut plus = [0.0; 4];
                let mut minus = [0.0; 4];
                for i in 0..4 {
                    constant[i] -= mz[i] / mu;
                    linear[i] -= m2z[i] / mu;
                    plus[i] = mz[i] / (2.0 * mu) + m2z[i] / (2.0 * alpha * mu);
                    minus[i] = mz[i] / (2.0 * mu) - m2z[i] / (2.0 * alpha * mu);
                }
                JacobiModes::Exponential {
                    alpha,
                    constant,
                    linear,
                    plus,
                    minus,
                }
            }
            JacobiBranch::Generic => {
                let mu = self.mu;
                let omega = (-mu).sqrt();
                let mut constant = self.y0;
                let mut linear = self.z0;
                let mut cos_term = [0.0; 4];
                let mut sin_term = [0.0; 4];
                for i in 0..4 {
                    constant[i] -= mz[i] / mu;
                    linear[i] -= m2z[i] / mu;
                    cos_term[i] = mz[i] / mu;
                    sin_term[i] = m2z[i] / (omega * mu);
                }
                JacobiModes::Trigonometric {
                    omega,
                    constant,
                    linear,
                    cos_term,
                    sin_term,
                }
            }
        }
    }
}

/// The isometry I_sigma(tau) = sigma tau^{-1} sigma; reverses geodesics
/// through sigma.
pub fn isometry_i_sigma(sigma: &GroupPoint, tau: &GroupPoint) -> GroupPoint {
    sigma.compose(&tau.inverse()).compose(sigma)
}

/// Reflect tangent vectors attached along a curve of group points back
/// to the algebra: y(t) = sigma(t)^{-1} Y(t), expanded over the basis.
pub fn reflect(
    curve: &CurveSample<GroupPoint>,
    fields: &[Mat2],
) -> Result<CurveSample<AlgebraVector>> {
    if fields.len() != curve.len() {
        return Err(GeomError::InvalidInput(
            "one tangent vector per curve sample required".into(),
        ));
    }
    let states = curve
        .states()
        .iter()
        .zip(fields)
        .map(|(sigma, y)| {
            AlgebraVector::from_matrix(sigma.matrix().inverse().expect("group point") * *y)
        })
        .collect();
    CurveSample::new(curve.times().to_vec(), states)
}

/// Inverse of `reflect`: Y(t) = sigma(t) y(t).
pub fn unreflect(
    curve: &CurveSample<GroupPoint>,
    reflected: &CurveSample<AlgebraVector>,
) -> Result<Vec<Mat2>> {
    if reflected.len() != curve.len() {
        return Err(GeomError::InvalidInput(
            "one reflected vector per curve sample required".into(),
        ));
    }
    Ok(curve
        .states()
        .iter()
        .zip(reflected.states())
        .map(|(sigma, y)| sigma.matrix() * y.to_matrix())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{classify, k_form, CausalType};
    use crate::tol::{
        CURVE_TOL, FD_JACOBI_STEP, FD_JACOBI_TOL, JACOBI_CROSS_TOL, TABLE_TOL,
        TRANSPORT_CONSERVATION_TOL,
    };
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn e(i: usize) -> AlgebraVector {
        AlgebraVector::basis(i - 1)
    }

    fn rand_vec(rng: &mut ChaCha8Rng) -> AlgebraVector {
        AlgebraVector::from_coeffs([
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5),
        ])
    }

    /// Lightlike matrices constructed exactly: pick a, b, d and solve
    /// c = -(a^2 + d^2) / (2b).
    fn rand_lightlike(rng: &mut ChaCha8Rng) -> AlgebraVector {
        loop {
            let a: f64 = rng.gen_range(-1.0..1.0);
            let b: f64 = rng.gen_range(-1.5..1.5);
            let d: f64 = rng.gen_range(-1.0..1.0);
            if b.abs() < 0.2 {
                continue;
            }
            let c = -(a * a + d * d) / (2.0 * b);
            return AlgebraVector::from_matrix(Mat2::new(a, b, c, d));
        }
    }

    #[test]
    fn exp_geodesic_examples() {
        // e1 generates the printed rotation with angle (sqrt2/2) s.
        let s = 1.3;
        let angle = SQRT_2 / 2.0 * s;
        let got = exp_geodesic(&e(1), s).matrix();
        let want = Mat2::new(angle.cos(), angle.sin(), -angle.sin(), angle.cos());
        assert!((got - want).norm_inf() < CURVE_TOL);
        // u = 0 gives the identity.
        assert!(
            (exp_geodesic(&AlgebraVector::ZERO, 2.0).matrix() - Mat2::IDENTITY).norm_inf() == 0.0
        );
        // e4 exponentiates to a scalar matrix.
        let got = exp_geodesic(&e(4), s).matrix();
        let want = Mat2::IDENTITY.scale((SQRT_2 / 2.0 * s).exp());
        assert!((got - want).norm_inf() < CURVE_TOL);
    }

    #[test]
    fn exp_geodesic_subgroup_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let u = rand_vec(&mut rng);
            let s = rng.gen_range(-2.0..2.0);
            let t = rng.gen_range(-2.0..2.0);
            let lhs = exp_geodesic(&u, s + t).matrix();
            let rhs = exp_geodesic(&u, s).matrix() * exp_geodesic(&u, t).matrix();
            assert!((lhs - rhs).norm_inf() < CURVE_TOL);
        }
    }

    #[test]
    fn lightlike_curve_matches_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..50 {
            let u = rand_lightlike(&mut rng);
            for k in 0..13 {
                let s = -3.0 + 0.5 * k as f64;
                let closed = lightlike_curve(&u, s).unwrap().matrix();
                let exp = exp_geodesic(&u, s).matrix();
                assert!((closed - exp).norm_inf() < CURVE_TOL);
            }
        }
    }

    #[test]
    fn lightlike_curve_nilpotent_case() {
        // (a, b, c, d) = (1, 1, -1, -1) has a + d = 0: theta = 0 exactly,
        // the sinc limit applies and the exponential is I + sN.
        let u = AlgebraVector::from_matrix(Mat2::new(1.0, 1.0, -1.0, -1.0));
        assert_eq!(classify(&u), CausalType::Lightlike);
        for s in [-2.0, -0.5, 0.0, 0.7, 2.5] {
            let closed = lightlike_curve(&u, s).unwrap().matrix();
            let want = Mat2::new(1.0 + s, s, -s, 1.0 - s);
            assert!((closed - want).norm_inf() < CURVE_TOL);
        }
    }

    #[test]
    fn lightlike_curve_rejects_non_lightlike() {
        assert!(matches!(
            lightlike_curve(&e(1), 1.0),
            Err(GeomError::NotLightlike { .. })
        ));
    }

    #[test]
    fn lightlike_curve_of_zero_is_identity() {
        // q(0) = 0, so the zero vector passes the lightlike gate and the
        // closed form degenerates to the identity curve.
        let zero = AlgebraVector::ZERO;
        for s in [-2.0, 0.0, 1.7] {
            let got = lightlike_curve(&zero, s).unwrap().matrix();
            assert!((got - Mat2::IDENTITY).norm_inf() < TABLE_TOL);
        }
    }

    #[test]
    fn lightlike_nonzero_trace_ray() {
        // Entries (1, 1, -1, 1): lightlike with a + d = 2, so the
        // oscillation rate is |a + d| = 2 and the closed form still has
        // to match the exponential.
        let u = AlgebraVector::from_matrix(Mat2::new(1.0, 1.0, -1.0, 1.0));
        assert_eq!(classify(&u), CausalType::Lightlike);
        for s in [-1.5, 0.3, 1.0, 2.0] {
            let closed = lightlike_curve(&u, s).unwrap().matrix();
            let exp = exp_geodesic(&u, s).matrix();
            assert!((closed - exp).norm_inf() < CURVE_TOL);
        }
    }

    #[test]
    fn trace_det_audit() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..50 {
            let u = rand_lightlike(&mut rng);
            let s = rng.gen_range(-2.0..2.0);
            let audit = curve_trace_det_check(&u, s).unwrap();
            // Determinant closed form (squared-factor reading) matches.
            assert!(audit.det_deviation() < CURVE_TOL);
            // det(alpha(s)) = e^{(a+d)s} exactly.
            let (a, _, _, d) = entry_data(&u);
            assert!((audit.det_eval - ((a + d) * s).exp()).abs() < CURVE_TOL);
        }
        // The printed trace formula misses a factor 2 already at s = 0.
        let u = rand_lightlike(&mut rng);
        let audit = curve_trace_det_check(&u, 0.0).unwrap();
        assert!((audit.trace_eval - 2.0).abs() < TABLE_TOL);
        assert!((audit.trace_formula - 1.0).abs() < TABLE_TOL);
        assert!((audit.trace_deviation() - 1.0).abs() < TABLE_TOL);
    }

    #[test]
    fn transport_constant_for_central_velocity() {
        let spec = GeodesicSpec {
            initial_point: GroupPoint::identity(),
            initial_velocity: e(4),
        };
        let y0 = AlgebraVector::from_coeffs([0.3, -1.0, 0.5, 2.0]);
        let sample = parallel_transport(&spec, &y0, 1.0, 64).unwrap();
        for (_, y) in sample.iter() {
            assert!((*y - y0).norm_inf() == 0.0);
        }
    }

    #[test]
    fn transport_rotates_e2_around_e1() {
        let spec = GeodesicSpec {
            initial_point: GroupPoint::identity(),
            initial_velocity: e(1),
        };
        let sample = parallel_transport(&spec, &e(2), 1.0, 1000).unwrap();
        // (y2, y3) rotates with rate sqrt2/2; closed-form oracle.
        for (t, y) in sample.iter() {
            let ang = SQRT_2 / 2.0 * t;
            let want = [0.0, ang.cos(), -ang.sin(), 0.0];
            let got = y.coeffs();
            for i in 0..4 {
                assert!((got[i] - want[i]).abs() < 1e-9, "t = {t}");
            }
        }
    }

    #[test]
    fn transport_conserves_k_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..25 {
            let x0 = rand_vec(&mut rng);
            let y0 = rand_vec(&mut rng);
            let spec = GeodesicSpec {
                initial_point: GroupPoint::identity(),
                initial_velocity: x0,
            };
            let sample = parallel_transport(&spec, &y0, 1.0, 1000).unwrap();
            let kyy = k_form(&y0, &y0);
            let kxy = k_form(&x0, &y0);
            for (_, y) in sample.iter() {
                assert!((k_form(y, y) - kyy).abs() < TRANSPORT_CONSERVATION_TOL);
                assert!((k_form(&x0, y) - kxy).abs() < TRANSPORT_CONSERVATION_TOL);
            }
        }
    }

    #[test]
    fn transport_is_linear_in_initial_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let x0 = rand_vec(&mut rng);
        let spec = GeodesicSpec {
            initial_point: GroupPoint::identity(),
            initial_velocity: x0,
        };
        let y0 = rand_vec(&mut rng);
        let z0 = rand_vec(&mut rng);
        let (al, be) = (0.7, -1.3);
        let a = parallel_transport(&spec, &y0, 1.0, 400).unwrap();
        let b = parallel_transport(&spec, &z0, 1.0, 400).unwrap();
        let c = parallel_transport(&spec, &(y0 * al + z0 * be), 1.0, 400).unwrap();
        for i in 0..a.len() {
            let combo = a.states()[i] * al + b.states()[i] * be;
            assert!((combo - c.states()[i]).norm_inf() < CURVE_TOL);
        }
    }

    #[test]
    fn transport_zero_stays_zero() {
        let spec = GeodesicSpec {
            initial_point: GroupPoint::identity(),
            initial_velocity: e(2),
        };
        let sample = parallel_transport(&spec, &AlgebraVector::ZERO, 1.0, 16).unwrap();
        for (_, y) in sample.iter() {
            assert!(y.norm_inf() == 0.0);
        }
    }

    #[test]
    fn transport_rejects_bad_inputs() {
        let off_identity = GeodesicSpec {
            initial_point: GroupPoint::new(Mat2::new(2.0, 0.0, 0.0, 1.0)).unwrap(),
            initial_velocity: e(1),
        };
        assert!(matches!(
            parallel_transport(&off_identity, &e(2), 1.0, 10),
            Err(GeomError::NonIdentityStart)
        ));
        let spec = GeodesicSpec {
            initial_point: GroupPoint::identity(),
            initial_velocity: e(1),
        };
        assert!(matches!(
            parallel_transport(&spec, &e(2), 1.0, 0),
            Err(GeomError::ZeroSteps)
        ));
    }

    #[test]
    fn jacobi_rhs_examples() {
        // b = c = 0: the system reduces to a rotation of (y2', y3').
        let got = jacobi_rhs(&[2.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]);
        assert!((got[0]).abs() < TABLE_TOL);
        assert!((got[1]).abs() < TABLE_TOL);
        assert!((got[2] - -SQRT_2 * 2.0).abs() < TABLE_TOL);
        // yprime = 0 kills the right-hand side.
        assert_eq!(jacobi_rhs(&[1.0, 2.0, 3.0, 4.0], &[0.0; 4]), [0.0; 4]);
        // Literal substitution: velocity (0,1,0,0), yprime (1,0,0,0).
        let got = jacobi_rhs(&[0.0, 1.0, 0.0, 0.0], &[1.0, 0.0, 0.0, 0.0]);
        assert!((got[2] - SQRT_2).abs() < TABLE_TOL);
        assert!(got[0].abs() < TABLE_TOL && got[1].abs() < TABLE_TOL);
    }

    #[test]
    fn jacobi_constant_when_derivative_vanishes() {
        let y0 = [0.4, -0.3, 1.0, 2.0];
        let sample = jacobi_integrate(&[1.0, 1.0, 0.0, 0.5], &y0, &[0.0; 4], 1.0, 100).unwrap();
        for (_, st) in sample.iter() {
            for i in 0..4 {
                assert!((st.y[i] - y0[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn jacobi_rotation_oracle() {
        // velocity (1,0,0,0), y0 = 0, y'(0) = (0,1,0,0):
        // (y2', y3') rotates at rate sqrt2, so
        // y2(t) = sin(sqrt2 t)/sqrt2, y3(t) = (cos(sqrt2 t) - 1)/sqrt2.
        let sample = jacobi_integrate(
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0; 4],
            &[0.0, 1.0, 0.0, 0.0],
            1.0,
            1000,
        )
        .unwrap();
        for (t, st) in sample.iter() {
            let want2 = (SQRT_2 * t).sin() / SQRT_2;
            let want3 = ((SQRT_2 * t).cos() - 1.0) / SQRT_2;
            assert!((st.y[1] - want2).abs() < 1e-9);
            assert!((st.y[2] - want3).abs() < 1e-9);
            assert!(st.y[0].abs() < 1e-12 && st.y[3].abs() < 1e-12);
        }
    }

    #[test]
    fn jacobi_y4_is_affine() {
        let y0 = [0.1, 0.2, 0.3, -0.7];
        let z0 = [1.0, -2.0, 0.5, 1.1];
        let velocity = [0.9, -1.2, 0.4, 0.3];
        let sample = jacobi_integrate(&velocity, &y0, &z0, 1.0, 1000).unwrap();
        for (t, st) in sample.iter() {
            assert!((st.y[3] - (y0[3] + z0[3] * t)).abs() < 1e-12);
        }
        let cf = jacobi_closed_form(&velocity, &y0, &z0);
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            let y = cf.evaluate(t);
            assert_eq!(y[3], y0[3] + t * z0[3]);
        }
    }

    #[test]
    fn jacobi_closed_form_branches_match_integrator() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for trial in 0..100 {
            let mut velocity: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.5..1.5));
            // Cover all three regimes: real modes, trigonometric modes,
            // and the exactly degenerate branch.
            if trial % 3 == 0 {
                let (b, c) = (velocity[1], velocity[2]);
                velocity[0] = (b * b + c * c).sqrt();
            }
            let y0 = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let z0 = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let cf = jacobi_closed_form(&velocity, &y0, &z0);
            let sample = jacobi_integrate(&velocity, &y0, &z0, 1.0, 1000).unwrap();
            let mut sup = 0.0_f64;
            for (t, st) in sample.iter() {
                let y = cf.evaluate(t);
                for i in 0..4 {
                    sup = sup.max((y[i] - st.y[i]).abs());
                }
            }
            assert!(sup < JACOBI_CROSS_TOL, "branch {:?}: sup {sup}", cf.branch);
        }
    }

    #[test]
    fn jacobi_closed_form_constant_solutions() {
        // y'(0) = 0 freezes the closed form in every branch.
        let y0 = [0.3, -0.7, 1.1, 0.2];
        for velocity in [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [1.0, 1.0, 0.0, 0.0],
        ] {
            let cf = jacobi_closed_form(&velocity, &y0, &[0.0; 4]);
            for k in 0..=8 {
                let y = cf.evaluate(k as f64 / 4.0);
                for i in 0..4 {
                    assert_eq!(y[i], y0[i]);
                }
            }
        }
    }

    #[test]
    fn jacobi_branch_selection() {
        let cf = jacobi_closed_form(&[1.0, 1.0, 0.0, 0.0], &[0.0; 4], &[1.0; 4]);
        assert_eq!(cf.branch, JacobiBranch::Degenerate);
        assert!(matches!(cf.modes(), JacobiModes::Polynomial { .. }));
        // velocity (1,0,0,0): -a^2 + b^2 + c^2 = -1 < 0, trig modes of rate sqrt2.
        let cf = jacobi_closed_form(&[1.0, 0.0, 0.0, 0.0], &[0.0; 4], &[1.0; 4]);
        assert_eq!(cf.branch, JacobiBranch::Generic);
        match cf.modes() {
            JacobiModes::Trigonometric { omega, .. } => {
                assert!((omega - SQRT_2).abs() < TABLE_TOL)
            }
            other => panic!("expected trigonometric modes, got {other:?}"),
        }
        // b^2 + c^2 > a^2 gives real exponential modes.
        let cf = jacobi_closed_form(&[0.0, 1.0, 0.0, 0.0], &[0.0; 4], &[1.0; 4]);
        match cf.modes() {
            JacobiModes::Exponential { alpha, .. } => {
                assert!((alpha - SQRT_2).abs() < TABLE_TOL)
            }
            other => panic!("expected exponential modes, got {other:?}"),
        }
    }

    #[test]
    fn jacobi_modes_reconstruct_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for _ in 0..40 {
            let velocity = [
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.5..1.5),
                0.0,
            ];
            let y0: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let z0: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let cf = jacobi_closed_form(&velocity, &y0, &z0);
            for k in 0..=8 {
                let t = k as f64 / 8.0;
                let direct = cf.evaluate(t);
                let via_modes: [f64; 4] = match cf.modes() {
                    JacobiModes::Exponential {
                        alpha,
                        constant,
                        linear,
                        plus,
                        minus,
                    } => std::array::from_fn(|i| {
                        constant[i]
                            + linear[i] * t
                            + plus[i] * (alpha * t).exp()
                            + minus[i] * (-alpha * t).exp()
                    }),
                    JacobiModes::Trigonometric {
                        omega,
                        constant,
                        linear,
                        cos_term,
                        sin_term,
                    } => std::array::from_fn(|i| {
                        constant[i]
                            + linear[i] * t
                            + cos_term[i] * (omega * t).cos()
                            + sin_term[i] * (omega * t).sin()
                    }),
                    JacobiModes::Polynomial { c0, c1, c2, c3 } => std::array::from_fn(|i| {
                        c0[i] + c1[i] * t + c2[i] * t * t + c3[i] * t * t * t
                    }),
                };
                for i in 0..4 {
                    assert!((direct[i] - via_modes[i]).abs() < 1e-10);
                }
            }
        }
    }

    /// Independent oracle: differentiate the two-parameter family
    /// L(s, eps) = exp(s(u + eps w)) in eps at 0 by central differences,
    /// reflect it, and check the printed second-order system.
    #[test]
    fn jacobi_system_matches_geodesic_variation() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let h = FD_JACOBI_STEP;
        for _ in 0..10 {
            let u = rand_vec(&mut rng);
            let w = rand_vec(&mut rng);
            let y_at = |s: f64| -> [f64; 4] {
                let plus = exp_geodesic(&(u + w * h), s).matrix();
                let minus = exp_geodesic(&(u - w * h), s).matrix();
                let deriv = (plus - minus).scale(1.0 / (2.0 * h));
                let sigma_inv = exp_geodesic(&u, s).matrix().inverse().unwrap();
                AlgebraVector::from_matrix(sigma_inv * deriv).coeffs()
            };
            for s in [0.2, 0.5, 0.9] {
                let yp = y_at(s + h);
                let ym = y_at(s - h);
                let yc = y_at(s);
                let mut ypp = [0.0; 4];
                let mut ydot = [0.0; 4];
                for i in 0..4 {
                    ypp[i] = (yp[i] - 2.0 * yc[i] + ym[i]) / (h * h);
                    ydot[i] = (yp[i] - ym[i]) / (2.0 * h);
                }
                let want = jacobi_rhs(&u.coeffs(), &ydot);
                for i in 0..4 {
                    assert!(
                        (ypp[i] - want[i]).abs() < FD_JACOBI_TOL,
                        "s = {s}, component {i}: {} vs {}",
                        ypp[i],
                        want[i]
                    );
                }
            }
        }
    }

    #[test]
    fn isometry_examples() {
        // I_eps reverses the rotation geodesic of e1.
        let s = 0.9;
        let gamma = exp_geodesic(&e(1), s);
        let got = isometry_i_sigma(&GroupPoint::identity(), &gamma).matrix();
        let angle = SQRT_2 / 2.0 * s;
        let want = Mat2::new(angle.cos(), -angle.sin(), angle.sin(), angle.cos());
        assert!((got - want).norm_inf() < CURVE_TOL);
        // I_sigma(sigma) = sigma; I_eps is an involution.
        let sigma = GroupPoint::new(Mat2::new(2.0, 1.0, 1.0, 1.0)).unwrap();
        assert!(
            (isometry_i_sigma(&sigma, &sigma).matrix() - sigma.matrix()).norm_inf() < TABLE_TOL
        );
        let tau = GroupPoint::new(Mat2::new(1.0, 0.5, -0.5, 2.0)).unwrap();
        let twice = isometry_i_sigma(
            &GroupPoint::identity(),
            &isometry_i_sigma(&GroupPoint::identity(), &tau),
        );
        assert!((twice.matrix() - tau.matrix()).norm_inf() < TABLE_TOL);
    }

    #[test]
    fn isometry_reverses_geodesics() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..20 {
            let u = rand_vec(&mut rng);
            let sigma = exp_geodesic(&rand_vec(&mut rng), 0.4);
            let s = rng.gen_range(-1.5..1.5);
            // I_sigma(sigma exp(s u)) = sigma exp(-s u) sigma^{-1} sigma
            // ... for the geodesic gamma(s) = exp(s u) through eps:
            // I_sigma(gamma(s)) = sigma gamma(-s) sigma.
            let lhs = isometry_i_sigma(&sigma, &exp_geodesic(&u, s)).matrix();
            let rhs = sigma.matrix() * exp_geodesic(&u, -s).matrix() * sigma.matrix();
            assert!((lhs - rhs).norm_inf() < CURVE_TOL);
        }
    }

    /// Finite-difference isometry check: the differential of I_sigma
    /// pulls the coordinate metric back to itself.
    #[test]
    fn isometry_preserves_metric() {
        use crate::coords::metric_at;
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        let h = 1e-6;
        for _ in 0..10 {
            let sigma = exp_geodesic(&rand_vec(&mut rng), 0.5);
            let tau = exp_geodesic(&rand_vec(&mut rng), 0.3);
            let image = isometry_i_sigma(&sigma, &tau);
            // Differential by central differences on matrix entries.
            let mut diff = MAT4_ZERO;
            for j in 0..4 {
                let mut bump = [0.0; 4];
                bump[j] = h;
                let tp = GroupPoint::new(tau.matrix() + Mat2::from_array(bump)).unwrap();
                let tm = GroupPoint::new(tau.matrix() - Mat2::from_array(bump)).unwrap();
                let ip = isometry_i_sigma(&sigma, &tp).matrix().to_array();
                let im = isometry_i_sigma(&sigma, &tm).matrix().to_array();
                for i in 0..4 {
                    diff[i][j] = (ip[i] - im[i]) / (2.0 * h);
                }
            }
            let g_tau = metric_at(&tau);
            let g_img = metric_at(&image);
            for a in 0..4 {
                for b in 0..4 {
                    let mut ua = [0.0; 4];
                    ua[a] = 1.0;
                    let mut ub = [0.0; 4];
                    ub[b] = 1.0;
                    let da = mat4_vec(&diff, &ua);
                    let db = mat4_vec(&diff, &ub);
                    let pulled: f64 = {
                        let gv = mat4_vec(&g_img, &db);
                        (0..4).map(|m| da[m] * gv[m]).sum()
                    };
                    assert!(
                        (pulled - g_tau[a][b]).abs() < 1e-5,
                        "entry ({a},{b}): {pulled} vs {}",
                        g_tau[a][b]
                    );
                }
            }
        }
    }

    #[test]
    fn reflect_left_invariant_field_is_constant() {
        let u = AlgebraVector::from_coeffs([0.5, -0.2, 1.0, 0.1]);
        let times: Vec<f64> = (0..10).map(|k| k as f64 * 0.1).collect();
        let points: Vec<GroupPoint> = times
            .iter()
            .map(|&t| exp_geodesic(&AlgebraVector::from_coeffs([1.0, 0.3, 0.0, 0.2]), t))
            .collect();
        let fields: Vec<Mat2> = points.iter().map(|p| p.matrix() * u.to_matrix()).collect();
        let curve = CurveSample::new(times, points).unwrap();
        let reflected = reflect(&curve, &fields).unwrap();
        for (_, y) in reflected.iter() {
            assert!((*y - u).norm_inf() < TABLE_TOL);
        }
    }

    #[test]
    fn reflect_unreflect_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        let times: Vec<f64> = (0..12).map(|k| k as f64 * 0.2).collect();
        let points: Vec<GroupPoint> = times
            .iter()
            .map(|&t| exp_geodesic(&rand_vec(&mut rng), 0.2 + t * 0.1))
            .collect();
        let fields: Vec<Mat2> = (0..12).map(|_| rand_vec(&mut rng).to_matrix()).collect();
        let curve = CurveSample::new(times, points).unwrap();
        let reflected = reflect(&curve, &fields).unwrap();
        let back = unreflect(&curve, &reflected).unwrap();
        for (orig, got) in fields.iter().zip(back) {
            assert!((*orig - got).norm_inf() < 1e-12);
        }
    }

    #[test]
    fn curve_sample_invariants() {
        assert!(CurveSample::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(CurveSample::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(CurveSample::new(vec![0.0, 0.5, 1.0], vec![1, 2, 3]).is_ok());
    }
}
