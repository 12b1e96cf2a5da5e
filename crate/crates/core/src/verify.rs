//! Runtime verification suite: every module invariant and every
//! printed-table audit as a named check with a tolerance and an observed
//! deviation.
//!
//! Checks are pure and deterministic (fixed ChaCha seeds; inputs are
//! generated sequentially before any parallel evaluation), so the report
//! is byte-identical between the sequential and parallel execution
//! modes. Audit checks compare computed values against tables as
//! printed; where a print is known to deviate from its own defining
//! formula the check reports `Warn` with the localized discrepancy and
//! never `Fail`.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::affine::{
    cover_multiply, cover_multiply_sqrt_route, cover_project, developing_map, flat_affine_product,
    hessian_gradient, hessian_matrix, hessian_potential, polar_decompose, CoverCoords, CoverPoint,
};
use crate::algebra::{
    self, bracket, causal_quadric, classify, in_timecone_e1, k_form, killing_form, AlgebraVector,
    CausalType, GroupPoint, SIGNATURE, SQRT_2,
};
use crate::coords;
use crate::curvature::{
    self, christoffel_left_invariant, curvature_operator, kulkarni_nomizu, reference_metrics,
    ricci_form, ricci_tensor, riemann, riemann_covariant_table, sectional, tidal_trace,
    weyl_printed_reconstruction, weyl_printed_table, weyl_tensor, Form2,
};
use crate::dynamics::{
    self, curve_trace_det_check, exp_geodesic, jacobi_closed_form, jacobi_integrate, jacobi_rhs,
    parallel_transport, CurveSample, GeodesicSpec,
};
use crate::linalg::{mat4_norm_inf, mat4_sub, mat4_vec, sym_eigenvalues, MAT4_ZERO};
use crate::mat2::Mat2;
use crate::tol;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Execution mode of the suite. `Parallel` uses the rayon pool when the
/// `parallel` feature is enabled and silently degrades to sequential
/// otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Warn,
    Fail,
}

impl std::fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CheckStatus::Pass => write!(f, "PASS"),
            CheckStatus::Warn => write!(f, "WARN"),
            CheckStatus::Fail => write!(f, "FAIL"),
        }
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: &'static str,
    pub status: CheckStatus,
    pub tolerance: f64,
    pub observed: f64,
    pub detail: String,
}

impl CheckReport {
    fn pass_fail(
        name: &'static str,
        tolerance: f64,
        observed: f64,
        detail: impl Into<String>,
    ) -> Self {
        let status = if observed <= tolerance {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        CheckReport {
            name,
            status,
            tolerance,
            observed,
            detail: detail.into(),
        }
    }

    /// Audit outcome: `Warn` carrying the observed printed-vs-computed
    /// deviation, unless the stated reconstruction claim itself breaks,
    /// which is a real failure.
    fn audit(
        name: &'static str,
        tolerance: f64,
        observed: f64,
        reconstruction_ok: bool,
        detail: impl Into<String>,
    ) -> Self {
        CheckReport {
            name,
            status: if reconstruction_ok {
                CheckStatus::Warn
            } else {
                CheckStatus::Fail
            },
            tolerance,
            observed,
            detail: detail.into(),
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rand_vec(rng: &mut ChaCha8Rng, s: f64) -> AlgebraVector {
    AlgebraVector::from_coeffs(std::array::from_fn(|_| rng.gen_range(-s..s)))
}

fn rand_timelike(rng: &mut ChaCha8Rng) -> AlgebraVector {
    loop {
        let v = rand_vec(rng, 1.5);
        if classify(&v) == CausalType::Timelike && in_timecone_e1(&v).is_ok() {
            return v;
        }
    }
}

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

fn rand_group_point(rng: &mut ChaCha8Rng) -> GroupPoint {
    loop {
        let m = Mat2::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        if m.det() > 0.1 {
            return GroupPoint::new(m).unwrap();
        }
    }
}

fn rand_cover_point(rng: &mut ChaCha8Rng) -> CoverPoint {
    let a = Mat2::new(
        rng.gen_range(-1.5..1.5),
        rng.gen_range(-1.5..1.5),
        rng.gen_range(-1.5..1.5),
        rng.gen_range(-1.5..1.5),
    );
    let spd = a * a.transpose() + Mat2::IDENTITY.scale(0.3);
    CoverPoint::new(rng.gen_range(-6.0..6.0), spd).unwrap()
}

/// Max of a pure per-index evaluation, parallel in `Parallel` mode when
/// the feature is on. Inputs must already be materialized so the result
/// does not depend on evaluation order.
fn sweep_max<F>(mode: Mode, n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == Mode::Parallel {
        return (0..n)
            .into_par_iter()
            .map(&f)
            .reduce(|| f64::NEG_INFINITY, f64::max)
            .max(0.0);
    }
    let _ = mode;
    (0..n).map(f).fold(0.0_f64, f64::max)
}

fn e(i: usize) -> AlgebraVector {
    AlgebraVector::basis(i)
}

// ---------------------------------------------------------------------
// algebra
// ---------------------------------------------------------------------

fn check_k_table(_: Mode) -> CheckReport {
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            let want = if i == j { SIGNATURE[i] } else { 0.0 };
            worst = worst.max((k_form(&e(i), &e(j)) - want).abs());
            // Matrix-trace oracle.
            let tr = (e(i).to_matrix() * e(j).to_matrix()).trace();
            worst = worst.max((tr - want).abs());
        }
    }
    CheckReport::pass_fail(
        "k-table",
        tol::TABLE_TOL,
        worst,
        "k(e_i, e_j) = diag(-1,1,1,1)",
    )
}

fn check_bracket_table(_: Mode) -> CheckReport {
    let mut worst = 0.0_f64;
    let cases = [(0, 1, 2, SQRT_2), (0, 2, 1, -SQRT_2), (1, 2, 0, -SQRT_2)];
    for (i, j, k, c) in cases {
        worst = worst.max((bracket(&e(i), &e(j)) - e(k) * c).norm_inf());
        worst = worst.max((bracket(&e(j), &e(i)) + e(k) * c).norm_inf());
    }
    for i in 0..4 {
        worst = worst.max(bracket(&e(3), &e(i)).norm_inf());
    }
    CheckReport::pass_fail(
        "bracket-table",
        tol::TABLE_TOL,
        worst,
        "[e1,e2]=sqrt2 e3, [e1,e3]=-sqrt2 e2, [e2,e3]=-sqrt2 e1, e4 central",
    )
}

fn check_jacobi_identity(mode: Mode) -> CheckReport {
    let mut r = rng(0xA1);
    let triples: Vec<_> = (0..200)
        .map(|_| {
            (
                rand_vec(&mut r, 3.0),
                rand_vec(&mut r, 3.0),
                rand_vec(&mut r, 3.0),
            )
        })
        .collect();
    let worst = sweep_max(mode, triples.len(), |i| {
        let (u, v, w) = &triples[i];
        (bracket(u, &bracket(v, w)) + bracket(v, &bracket(w, u)) + bracket(w, &bracket(u, v)))
            .norm_inf()
    });
    CheckReport::pass_fail(
        "jacobi-identity",
        tol::IDENTITY_TOL,
        worst,
        "cyclic bracket sum over 200 random triples",
    )
}

fn check_ad_antisymmetry(mode: Mode) -> CheckReport {
    let mut r = rng(0xA2);
    let triples: Vec<_> = (0..200)
        .map(|_| {
            (
                rand_vec(&mut r, 3.0),
                rand_vec(&mut r, 3.0),
                rand_vec(&mut r, 3.0),
            )
        })
        .collect();
    let worst = sweep_max(mode, triples.len(), |i| {
        let (w, u, v) = &triples[i];
        (k_form(&bracket(w, u), v) + k_form(u, &bracket(w, v))).abs()
    });
    CheckReport::pass_fail(
        "ad-antisymmetry",
        tol::IDENTITY_TOL,
        worst,
        "k([w,u],v) + k(u,[w,v]) = 0 (bi-invariance)",
    )
}

fn check_signature(_: Mode) -> CheckReport {
    let eig = sym_eigenvalues(&Form2::k_gram().gram());
    let want = [-1.0, 1.0, 1.0, 1.0];
    let worst = eig
        .iter()
        .zip(want)
        .map(|(g, w)| (g - w).abs())
        .fold(0.0_f64, f64::max);
    CheckReport::pass_fail(
        "k-signature",
        tol::TABLE_TOL,
        worst,
        "Gram eigenvalues (-1, 1, 1, 1): Lorentzian index 1",
    )
}

fn check_quadric_equals_k(mode: Mode) -> CheckReport {
    let mut r = rng(0xA3);
    let vecs: Vec<_> = (0..500).map(|_| rand_vec(&mut r, 4.0)).collect();
    let worst = sweep_max(mode, vecs.len(), |i| {
        (causal_quadric(&vecs[i]) - k_form(&vecs[i], &vecs[i])).abs()
    });
    CheckReport::pass_fail(
        "quadric-equals-k",
        tol::TABLE_TOL,
        worst,
        "a^2 + 2bc + d^2 = trace(u^2) = k(u,u) on matrix entries",
    )
}

fn check_timecone_sign_criterion(mode: Mode) -> CheckReport {
    let mut r = rng(0xA4);
    let pairs: Vec<_> = (0..500)
        .map(|_| (rand_timelike(&mut r), rand_timelike(&mut r)))
        .collect();
    let worst = sweep_max(mode, pairs.len(), |i| {
        let (u, v) = &pairs[i];
        let same_side = in_timecone_e1(u).unwrap() == in_timecone_e1(v).unwrap();
        let negative_pairing = k_form(u, v) < 0.0;
        if same_side == negative_pairing {
            0.0
        } else {
            1.0
        }
    });
    CheckReport::pass_fail(
        "timecone-sign-criterion",
        0.0,
        worst,
        "same timecone iff k(u,v) < 0, 500 timelike pairs",
    )
}

fn check_timecone_convexity(mode: Mode) -> CheckReport {
    let mut r = rng(0xA5);
    let cases: Vec<_> = (0..500)
        .map(|_| {
            let u = rand_timelike(&mut r);
            let mut v = rand_timelike(&mut r);
            if in_timecone_e1(&u).unwrap() != in_timecone_e1(&v).unwrap() {
                v = -v;
            }
            (u, v, r.gen_range(0.0..1.0))
        })
        .collect();
    let worst = sweep_max(mode, cases.len(), |i| {
        let (u, v, t) = &cases[i];
        match algebra::timecone_convexity_check(u, v, *t) {
            Ok(true) => 0.0,
            _ => 1.0,
        }
    });
    CheckReport::pass_fail(
        "timecone-convexity",
        0.0,
        worst,
        "t u + (1-t) v stays in the shared timecone, 500 draws",
    )
}

// ---------------------------------------------------------------------
// curvature
// ---------------------------------------------------------------------

fn check_riemann_symmetries(_: Mode) -> CheckReport {
    let rm = riemann_covariant_table();
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    worst = worst.max((rm.get(i, j, k, l) + rm.get(j, i, k, l)).abs());
                    worst = worst.max((rm.get(i, j, k, l) + rm.get(i, j, l, k)).abs());
                    worst = worst.max((rm.get(i, j, k, l) - rm.get(k, l, i, j)).abs());
                    worst = worst
                        .max((rm.get(i, j, k, l) + rm.get(j, k, i, l) + rm.get(k, i, j, l)).abs());
                }
            }
        }
    }
    CheckReport::pass_fail(
        "riemann-symmetries",
        tol::TABLE_TOL,
        worst,
        "pair antisymmetries, pair exchange, first Bianchi",
    )
}

fn check_riemann_reference_table(_: Mode) -> CheckReport {
    // Reference curvature cells; (3,2,2) is tabulated as e3 where the formula
    // R = [[u,v],w]/4 yields e3/2.
    let printed: [((usize, usize, usize), f64, usize); 12] = [
        ((0, 1, 0), 0.5, 1),
        ((0, 1, 1), 0.5, 0),
        ((0, 2, 0), 0.5, 2),
        ((0, 2, 2), 0.5, 0),
        ((1, 0, 0), -0.5, 1),
        ((1, 0, 1), -0.5, 0),
        ((1, 2, 1), -0.5, 2),
        ((1, 2, 2), 0.5, 1),
        ((2, 0, 0), -0.5, 2),
        ((2, 0, 2), -0.5, 0),
        ((2, 1, 1), 1.0, 2),
        ((2, 1, 2), -0.5, 1),
    ];
    let mut worst = 0.0_f64;
    let mut deviating = Vec::new();
    for ((i, j, k), coeff, b) in printed {
        let dev = (riemann(&e(i), &e(j), &e(k)) - e(b) * coeff).norm_inf();
        if dev > tol::TABLE_TOL {
            deviating.push(format!(
                "R(e{},e{},e{}) printed as {} e{} but computed {} e{}",
                i + 1,
                j + 1,
                k + 1,
                coeff,
                b + 1,
                coeff - dev,
                b + 1
            ));
        }
        worst = worst.max(dev);
    }
    // Localized claim: exactly the one known cell deviates, by 1/2.
    let ok = deviating.len() == 1 && (worst - 0.5).abs() < tol::TABLE_TOL;
    CheckReport::audit(
        "riemann-reference-table",
        tol::TABLE_TOL,
        worst,
        ok,
        format!(
            "quarter-double-bracket formula is authoritative; {}",
            deviating.join("; ")
        ),
    )
}

fn check_sectional_values(_: Mode) -> CheckReport {
    let mut worst = 0.0_f64;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        worst = worst.max((sectional(&e(i), &e(j)).unwrap() + 0.5).abs());
    }
    for i in 0..3 {
        worst = worst.max(sectional(&e(i), &e(3)).unwrap().abs());
    }
    CheckReport::pass_fail(
        "sectional-values",
        tol::TABLE_TOL,
        worst,
        "K = -1/2 on the three sl2 planes, 0 on e4 planes",
    )
}

fn check_scalar_curvature(_: Mode) -> CheckReport {
    let direct = curvature::scalar_curvature();
    let ric = ricci_form();
    let traced: f64 = (0..4).map(|i| SIGNATURE[i] * ric.get(i, i)).sum();
    let worst = (direct + 3.0).abs().max((traced + 3.0).abs());
    CheckReport::pass_fail(
        "scalar-curvature",
        tol::TABLE_TOL,
        worst,
        "S = -3 by the pair sum and by the metric trace of Ricci",
    )
}

fn check_killing_ricci_tables(_: Mode) -> CheckReport {
    let wb = [-4.0, 4.0, 4.0, 0.0];
    let wr = [1.0, -1.0, -1.0, 0.0];
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            let tb = if i == j { wb[i] } else { 0.0 };
            let tr = if i == j { wr[i] } else { 0.0 };
            worst = worst.max((killing_form(&e(i), &e(j)) - tb).abs());
            worst = worst.max((ricci_tensor(&e(i), &e(j)) - tr).abs());
        }
    }
    CheckReport::pass_fail(
        "killing-ricci-tables",
        tol::TABLE_TOL,
        worst,
        "B = diag(-4,4,4,0) and Ricci = -B/4 = diag(1,-1,-1,0)",
    )
}

fn check_ricci_contraction(_: Mode) -> CheckReport {
    let rm = riemann_covariant_table();
    let mut worst = 0.0_f64;
    for u in 0..4 {
        for v in 0..4 {
            let contraction: f64 = (0..4).map(|i| SIGNATURE[i] * rm.get(i, u, v, i)).sum();
            let want = ricci_tensor(&e(u), &e(v));
            worst = worst.max((curvature::RICCI_CONTRACTION_SIGN * contraction - want).abs());
        }
    }
    CheckReport::pass_fail(
        "ricci-contraction-sign",
        tol::TABLE_TOL,
        worst,
        "signature-weighted contraction matches -B/4 with the documented sign",
    )
}

fn check_tidal_trace(mode: Mode) -> CheckReport {
    let mut r = rng(0xC1);
    let vecs: Vec<_> = (0..200).map(|_| rand_vec(&mut r, 2.0)).collect();
    let worst = sweep_max(mode, vecs.len(), |i| {
        let v = &vecs[i];
        let f = v.coeffs();
        let formula = -f[0] * f[0] + f[1] * f[1] + f[2] * f[2];
        (tidal_trace(v) - formula)
            .abs()
            .max((tidal_trace(v) + ricci_tensor(v, v)).abs())
    });
    CheckReport::pass_fail(
        "tidal-trace-identity",
        tol::IDENTITY_TOL,
        worst,
        "trace F_v = -f1^2 + f2^2 + f3^2 = -Ricci(v, v), 200 draws",
    )
}

fn check_weyl_trace_free(_: Mode) -> CheckReport {
    let w = weyl_tensor();
    CheckReport::pass_fail(
        "weyl-trace-free",
        tol::TABLE_TOL,
        w.max_trace_residual(),
        "signature-weighted traces of the Weyl decomposition vanish",
    )
}

fn check_weyl_printed_table(_: Mode) -> CheckReport {
    let printed = weyl_printed_table();
    let computed = weyl_tensor();
    let reconstruction = weyl_printed_reconstruction();
    let observed = printed.max_abs_diff(&computed);
    let rec_dev = printed.max_abs_diff(&reconstruction);
    CheckReport::audit(
        "weyl-printed-table",
        tol::TABLE_TOL,
        observed,
        rec_dev <= tol::TABLE_TOL,
        format!(
            "trace-free Weyl tensor vanishes identically (conformally flat); \
             the printed table equals R_m - Ric^k/2 with the scalar term \
             omitted (reconstruction deviation {rec_dev:.2e})"
        ),
    )
}

fn check_weyl_reconstruction(_: Mode) -> CheckReport {
    let dev = weyl_printed_table().max_abs_diff(&weyl_printed_reconstruction());
    CheckReport::pass_fail(
        "weyl-printed-reconstruction",
        tol::TABLE_TOL,
        dev,
        "all 256 printed components match R_m - Ric^k/2 exactly",
    )
}

fn check_kulkarni_antisymmetry(mode: Mode) -> CheckReport {
    let mut r = rng(0xC2);
    let forms: Vec<_> = (0..20)
        .map(|_| {
            let mut g = MAT4_ZERO;
            for i in 0..4 {
                for j in i..4 {
                    let v = r.gen_range(-2.0..2.0);
                    g[i][j] = v;
                    g[j][i] = v;
                }
            }
            Form2::new(g).unwrap()
        })
        .collect();
    let worst = sweep_max(mode, forms.len() / 2, |idx| {
        let h = &forms[2 * idx];
        let l = &forms[2 * idx + 1];
        let t = kulkarni_nomizu(h, l);
        let mut w = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for m in 0..4 {
                        w = w.max((t.get(i, j, k, m) + t.get(j, i, k, m)).abs());
                        w = w.max((t.get(i, j, k, m) + t.get(i, j, m, k)).abs());
                        w = w.max((t.get(i, j, k, m) - t.get(k, m, i, j)).abs());
                    }
                }
            }
        }
        w
    });
    CheckReport::pass_fail(
        "kulkarni-nomizu-symmetries",
        tol::TABLE_TOL,
        worst,
        "curvature-type symmetries of h^l for random symmetric h, l",
    )
}

fn check_phi_metric_indices(_: Mode) -> CheckReport {
    let [k0, k1, k2] = reference_metrics().map(|(_, g)| g);
    let ok = k0.index() == 0 && k1.index() == 1 && k2.index() == 2;
    let gram_dev = mat4_norm_inf(&mat4_sub(&k1.gram(), &Form2::k_gram().gram()));
    CheckReport::pass_fail(
        "phi-metric-indices",
        tol::TABLE_TOL,
        if ok { gram_dev } else { 1.0 },
        "Gram matrices of phi_0, phi_1, phi_2 have indices 0, 1, 2",
    )
}

fn printed_gamma_lines_k0() -> Vec<((usize, usize, usize), f64)> {
    vec![
        ((0, 1, 2), 1.5 * SQRT_2),
        ((0, 2, 1), -1.5 * SQRT_2),
        ((1, 0, 2), 0.5 * SQRT_2),
        ((1, 2, 0), -0.5 * SQRT_2),
        ((2, 0, 1), -0.5 * SQRT_2),
        ((2, 1, 0), 0.5 * SQRT_2),
    ]
}

fn printed_gamma_lines_k2() -> Vec<((usize, usize, usize), f64)> {
    vec![
        ((0, 1, 2), -0.5 * SQRT_2),
        ((0, 2, 1), -0.5 * SQRT_2),
        ((1, 0, 2), -1.5 * SQRT_2),
        ((1, 2, 0), -1.5 * SQRT_2),
        ((2, 0, 1), 0.5 * SQRT_2),
        ((2, 1, 0), -0.5 * SQRT_2),
    ]
}

fn check_christoffel_printed(_: Mode) -> CheckReport {
    let [k0, _, k2] = reference_metrics().map(|(_, g)| g);
    let mut worst = 0.0_f64;
    for (metric, lines) in [
        (k0, printed_gamma_lines_k0()),
        (k2, printed_gamma_lines_k2()),
    ] {
        let gamma = christoffel_left_invariant(&metric).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let want = lines
                        .iter()
                        .find(|&&(idx, _)| idx == (i, j, k))
                        .map_or(0.0, |&(_, v)| v);
                    worst = worst.max((gamma.get(i, j, k) - want).abs());
                }
            }
        }
    }
    CheckReport::pass_fail(
        "christoffel-printed-lines",
        tol::TABLE_TOL,
        worst,
        "all 128 printed Gamma lines for K0 and K2",
    )
}

fn check_christoffel_biinvariant(_: Mode) -> CheckReport {
    let gamma = christoffel_left_invariant(&Form2::k_gram()).unwrap();
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            let want = curvature::levi_civita_biinv(&e(i), &e(j)).coeffs();
            for k in 0..4 {
                worst = worst.max((gamma.get(i, j, k) - want[k]).abs());
            }
        }
    }
    CheckReport::pass_fail(
        "christoffel-biinvariant",
        tol::TABLE_TOL,
        worst,
        "Gamma of K1 = k agrees with the halved bracket",
    )
}

fn check_christoffel_properties(_: Mode) -> CheckReport {
    let c = curvature::structure_constants();
    let mut worst = 0.0_f64;
    for (_, metric) in reference_metrics() {
        let gamma = christoffel_left_invariant(&metric).unwrap();
        let kg = metric.gram();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    worst = worst.max((gamma.get(i, j, k) - gamma.get(j, i, k) - c[i][j][k]).abs());
                    let compat: f64 = (0..4)
                        .map(|m| gamma.get(i, j, m) * kg[m][k] + gamma.get(i, k, m) * kg[m][j])
                        .sum();
                    worst = worst.max(compat.abs());
                }
            }
        }
    }
    CheckReport::pass_fail(
        "christoffel-properties",
        tol::TABLE_TOL,
        worst,
        "torsion equals structure constants; frame metric compatibility",
    )
}

fn check_curvature_operator_k2(_: Mode) -> CheckReport {
    let [_, _, k2] = reference_metrics().map(|(_, g)| g);
    let gamma = christoffel_left_invariant(&k2).unwrap();
    let op = curvature_operator(&gamma, 0, 1);
    let mut want = MAT4_ZERO;
    want[0][1] = -0.5;
    want[1][0] = 0.5;
    CheckReport::pass_fail(
        "curvature-operator-k2-block",
        tol::TABLE_TOL,
        mat4_norm_inf(&mat4_sub(&op, &want)),
        "standard operator R(e1, e2) for K2 reproduces the printed -1/2 block",
    )
}

fn check_curvature_operator_k0(_: Mode) -> CheckReport {
    let [k0, _, _] = reference_metrics().map(|(_, g)| g);
    let gamma = christoffel_left_invariant(&k0).unwrap();
    // The printed K0 block is the commutator combination with the
    // opposite orientation: nabla_3 nabla_1 - nabla_1 nabla_3 + sqrt2 nabla_2.
    let l1 = gamma.nabla_operator(0);
    let l2 = gamma.nabla_operator(1);
    let l3 = gamma.nabla_operator(2);
    let tabulated = {
        let mut m = mat4_sub(
            &crate::linalg::mat4_mul(&l3, &l1),
            &crate::linalg::mat4_mul(&l1, &l3),
        );
        for r in 0..4 {
            for s in 0..4 {
                m[r][s] += SQRT_2 * l2[r][s];
            }
        }
        m
    };
    let mut printed = MAT4_ZERO;
    printed[0][2] = -2.5;
    printed[2][0] = 2.5;
    let rec_dev = mat4_norm_inf(&mat4_sub(&tabulated, &printed));
    let standard = curvature_operator(&gamma, 0, 2);
    let observed = mat4_norm_inf(&mat4_sub(&standard, &printed));
    CheckReport::audit(
        "curvature-operator-k0-block",
        tol::TABLE_TOL,
        observed,
        rec_dev <= tol::TABLE_TOL,
        format!(
            "printed -5/2 block uses the opposite commutator orientation; \
             the literal operator combination reproduces it exactly \
             (deviation {rec_dev:.2e}); the standard R(e1, e3) is nonzero \
             with entries -+1/2"
        ),
    )
}

fn check_nonflat_metrics(mode: Mode) -> CheckReport {
    let mut r = rng(0xC3);
    // The three reference metrics plus random k-symmetric operators.
    let mut metrics: Vec<Form2> = reference_metrics().map(|(_, g)| g).to_vec();
    while metrics.len() < 13 {
        let mut phi = MAT4_ZERO;
        for i in 0..4 {
            phi[i][i] = r.gen_range(0.5..2.0);
        }
        for j in 1..4 {
            let v = r.gen_range(-0.4..0.4);
            phi[0][j] = v;
            phi[j][0] = -v;
        }
        for i in 1..4 {
            for j in i + 1..4 {
                let v = r.gen_range(-0.4..0.4);
                phi[i][j] = v;
                phi[j][i] = v;
            }
        }
        let Ok(op) = curvature::MetricOperator::new(phi) else {
            continue;
        };
        metrics.push(curvature::metric_from_phi(&op));
    }
    let worst = sweep_max(mode, metrics.len(), |i| {
        match christoffel_left_invariant(&metrics[i]) {
            Ok(gamma) => {
                if curvature::has_nonzero_curvature(&gamma) {
                    0.0
                } else {
                    1.0
                }
            }
            Err(_) => 1.0,
        }
    });
    CheckReport::pass_fail(
        "left-invariant-metrics-nonflat",
        0.0,
        worst,
        "reference and random k-symmetric metrics all have curvature",
    )
}

// ---------------------------------------------------------------------
// coords
// ---------------------------------------------------------------------

fn check_frame_pushforward(mode: Mode) -> CheckReport {
    let mut r = rng(0xD1);
    let points: Vec<_> = (0..100).map(|_| rand_group_point(&mut r)).collect();
    let worst = sweep_max(mode, points.len(), |i| {
        let a = coords::frame_at(&points[i]);
        let b = coords::frame_at_pushforward(&points[i]);
        mat4_norm_inf(&mat4_sub(&a.vectors, &b.vectors))
    });
    CheckReport::pass_fail(
        "frame-pushforward",
        tol::TABLE_TOL,
        worst,
        "printed frame expressions equal left-translation pushforwards",
    )
}

fn check_frame_coframe_duality(mode: Mode) -> CheckReport {
    let mut r = rng(0xD2);
    let points: Vec<_> = (0..100).map(|_| rand_group_point(&mut r)).collect();
    let id = crate::linalg::mat4_identity();
    let worst = sweep_max(mode, points.len(), |i| {
        let pairing = coords::coframe_at(&points[i]).pair(&coords::frame_at(&points[i]));
        mat4_norm_inf(&mat4_sub(&pairing, &id))
    });
    CheckReport::pass_fail(
        "frame-coframe-duality",
        tol::COORD_TOL,
        worst,
        "covector_i(vector_j) = delta_ij on 100 random points",
    )
}

fn check_metric_routes(mode: Mode) -> CheckReport {
    let mut r = rng(0xD3);
    let points: Vec<_> = (0..100).map(|_| rand_group_point(&mut r)).collect();
    let worst = sweep_max(mode, points.len(), |i| {
        let printed = coords::metric_at(&points[i]);
        let frame = coords::metric_at_frame_based(&points[i]);
        let pulled = coords::metric_at_pullback(&points[i]);
        mat4_norm_inf(&mat4_sub(&printed, &frame)).max(mat4_norm_inf(&mat4_sub(&printed, &pulled)))
    });
    CheckReport::pass_fail(
        "metric-coordinate-routes",
        tol::COORD_TOL,
        worst,
        "printed dx-form = frame sum = left-translation pullback",
    )
}

fn check_metric_line_one(mode: Mode) -> CheckReport {
    let mut r = rng(0xD4);
    let points: Vec<_> = (0..50).map(|_| rand_group_point(&mut r)).collect();
    let literal = sweep_max(mode, points.len(), |i| {
        coords::metric_line_one_audit(&points[i]).0
    });
    let squares = sweep_max(mode, points.len(), |i| {
        coords::metric_line_one_audit(&points[i]).1
    });
    CheckReport::audit(
        "metric-line-one-reading",
        tol::COORD_TOL,
        literal,
        squares <= tol::COORD_TOL,
        format!(
            "the (e2)*(e3)* cross term as printed deviates from the \
             dx-expansion; the signature-weighted squares reading matches \
             (deviation {squares:.2e})"
        ),
    )
}

fn check_ricci_coord_frame(mode: Mode) -> CheckReport {
    let mut r = rng(0xD5);
    let points: Vec<_> = (0..50).map(|_| rand_group_point(&mut r)).collect();
    let want = [1.0, -1.0, -1.0, 0.0];
    let worst = sweep_max(mode, points.len(), |idx| {
        let ric = coords::ricci_coord_frame(&points[idx]);
        let frame = coords::frame_at(&points[idx]);
        let mut w = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                let rv = mat4_vec(&ric, &frame.vectors[j]);
                let got: f64 = (0..4).map(|m| frame.vectors[i][m] * rv[m]).sum();
                let target = if i == j { want[i] } else { 0.0 };
                w = w.max((got - target).abs());
            }
        }
        w
    });
    CheckReport::pass_fail(
        "ricci-coordinate-frame-invariance",
        tol::COORD_TOL,
        worst,
        "frame-pullback Ricci reproduces the constant table at every point",
    )
}

fn check_ricci_coord_printed(_: Mode) -> CheckReport {
    let p = GroupPoint::identity();
    let dev = mat4_norm_inf(&mat4_sub(
        &coords::ricci_coord_frame(&p),
        &coords::ricci_coord_printed(&p),
    ));
    CheckReport::audit(
        "ricci-coordinate-printed",
        tol::COORD_TOL,
        dev,
        dev > 0.5,
        "printed coordinate Ricci polynomial fails the homogeneity check \
         and deviates from the frame pullback already at the identity; \
         kept as audit data",
    )
}

// ---------------------------------------------------------------------
// dynamics
// ---------------------------------------------------------------------

fn check_subgroup_law(mode: Mode) -> CheckReport {
    let mut r = rng(0xE1);
    let cases: Vec<_> = (0..100)
        .map(|_| {
            (
                rand_vec(&mut r, 1.5),
                r.gen_range(-2.0..2.0),
                r.gen_range(-2.0..2.0),
            )
        })
        .collect();
    let worst = sweep_max(mode, cases.len(), |i| {
        let (u, s, t) = &cases[i];
        let lhs = exp_geodesic(u, s + t).matrix();
        let rhs = exp_geodesic(u, *s).matrix() * exp_geodesic(u, *t).matrix();
        (lhs - rhs).norm_inf()
    });
    CheckReport::pass_fail(
        "exp-subgroup-law",
        tol::CURVE_TOL,
        worst,
        "gamma(s + t) = gamma(s) gamma(t) for 100 random directions",
    )
}

fn check_lightlike_curve(mode: Mode) -> CheckReport {
    let mut r = rng(0xE2);
    let dirs: Vec<_> = (0..50).map(|_| rand_lightlike(&mut r)).collect();
    let worst = sweep_max(mode, dirs.len(), |i| {
        let mut w = 0.0_f64;
        for k in 0..=24 {
            let s = -3.0 + 0.25 * k as f64;
            let closed = dynamics::lightlike_curve(&dirs[i], s).unwrap().matrix();
            let exp = exp_geodesic(&dirs[i], s).matrix();
            w = w.max((closed - exp).norm_inf());
        }
        w
    });
    CheckReport::pass_fail(
        "lightlike-curve-vs-exponential",
        tol::CURVE_TOL,
        worst,
        "closed form equals the matrix exponential, 50 lightlike rays, s in [-3, 3]",
    )
}

fn check_lightlike_det(mode: Mode) -> CheckReport {
    let mut r = rng(0xE3);
    let cases: Vec<_> = (0..50)
        .map(|_| (rand_lightlike(&mut r), r.gen_range(-2.0..2.0)))
        .collect();
    let worst = sweep_max(mode, cases.len(), |i| {
        let (u, s) = &cases[i];
        curve_trace_det_check(u, *s).unwrap().det_deviation()
    });
    CheckReport::pass_fail(
        "lightlike-det-formula",
        tol::CURVE_TOL,
        worst,
        "determinant closed form (squared trig factors) matches the evaluation",
    )
}

fn check_lightlike_trace(_: Mode) -> CheckReport {
    let mut r = rng(0xE4);
    let u = rand_lightlike(&mut r);
    let audit = curve_trace_det_check(&u, 0.0).unwrap();
    let s0_dev = audit.trace_deviation();
    CheckReport::audit(
        "lightlike-trace-formula",
        tol::CURVE_TOL,
        s0_dev,
        (s0_dev - 1.0).abs() < tol::TABLE_TOL,
        "printed trace formula gives 1 at s = 0 against trace(I) = 2; \
         reported, not asserted",
    )
}

fn check_transport_conservation(mode: Mode) -> CheckReport {
    let mut r = rng(0xE5);
    let cases: Vec<_> = (0..25)
        .map(|_| (rand_vec(&mut r, 1.5), rand_vec(&mut r, 1.5)))
        .collect();
    let worst = sweep_max(mode, cases.len(), |i| {
        let (x0, y0) = &cases[i];
        let spec = GeodesicSpec {
            initial_point: GroupPoint::identity(),
            initial_velocity: *x0,
        };
        let sample = parallel_transport(&spec, y0, 1.0, 1000).unwrap();
        let kyy = k_form(y0, y0);
        let kxy = k_form(x0, y0);
        let mut w = 0.0_f64;
        for (_, y) in sample.iter() {
            w = w.max((k_form(y, y) - kyy).abs());
            w = w.max((k_form(x0, y) - kxy).abs());
        }
        w
    });
    CheckReport::pass_fail(
        "transport-conservation",
        tol::TRANSPORT_CONSERVATION_TOL,
        worst,
        "k(y,y) and k(x0,y) conserved over [0,1] with 1000 RK4 steps",
    )
}

fn check_transport_linearity(mode: Mode) -> CheckReport {
    let mut r = rng(0xE6);
    let cases: Vec<_> = (0..20)
        .map(|_| {
            (
                rand_vec(&mut r, 1.5),
                rand_vec(&mut r, 1.5),
                rand_vec(&mut r, 1.5),
                r.gen_range(-2.0..2.0),
                r.gen_range(-2.0..2.0),
            )
        })
        .collect();
    let worst = sweep_max(mode, cases.len(), |i| {
        let (x0, y0, z0, al, be) = &cases[i];
        let spec = GeodesicSpec {
            initial_point: GroupPoint::identity(),
            initial_velocity: *x0,
        };
        let a = parallel_transport(&spec, y0, 1.0, 400).unwrap();
        let b = parallel_transport(&spec, z0, 1.0, 400).unwrap();
        let c = parallel_transport(&spec, &(*y0 * *al + *z0 * *be), 1.0, 400).unwrap();
        let mut w = 0.0_f64;
        for k in 0..a.len() {
            w = w.max(((a.states()[k] * *al + b.states()[k] * *be) - c.states()[k]).norm_inf());
        }
        w
    });
    CheckReport::pass_fail(
        "transport-linearity",
        tol::CURVE_TOL,
        worst,
        "transport(al y + be z) = al transport(y) + be transport(z)",
    )
}

fn check_transport_central(_: Mode) -> CheckReport {
    let spec = GeodesicSpec {
        initial_point: GroupPoint::identity(),
        initial_velocity: e(3),
    };
    let y0 = AlgebraVector::from_coeffs([0.4, -1.1, 0.6, 2.0]);
    let sample = parallel_transport(&spec, &y0, 1.0, 200).unwrap();
    let worst = sample
        .states()
        .iter()
        .map(|y| (*y - y0).norm_inf())
        .fold(0.0_f64, f64::max);
    CheckReport::pass_fail(
        "transport-central-constant",
        0.0,
        worst,
        "x0 = e4 freezes the system: y(t) = y0 exactly",
    )
}

fn check_jacobi_cross_validation(mode: Mode) -> CheckReport {
    let mut r = rng(0xE7);
    let cases: Vec<_> = (0..100)
        .map(|trial| {
            let mut velocity: [f64; 4] = std::array::from_fn(|_| r.gen_range(-1.5..1.5));
            if trial % 3 == 0 {
                let (b, c) = (velocity[1], velocity[2]);
                velocity[0] = (b * b + c * c).sqrt();
            }
            let y0: [f64; 4] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
            let z0: [f64; 4] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
            (velocity, y0, z0)
        })
        .collect();
    let worst = sweep_max(mode, cases.len(), |i| {
        let (velocity, y0, z0) = &cases[i];
        let cf = jacobi_closed_form(velocity, y0, z0);
        let sample = jacobi_integrate(velocity, y0, z0, 1.0, 1000).unwrap();
        let mut sup = 0.0_f64;
        for (t, st) in sample.iter() {
            let y = cf.evaluate(t);
            for k in 0..4 {
                sup = sup.max((y[k] - st.y[k]).abs());
            }
        }
        sup
    });
    CheckReport::pass_fail(
        "jacobi-closed-vs-rk4",
        tol::JACOBI_CROSS_TOL,
        worst,
        "sup-norm gap on [0,1], 100 draws across generic and degenerate branches",
    )
}

fn check_jacobi_y4_affine(mode: Mode) -> CheckReport {
    let mut r = rng(0xE8);
    let cases: Vec<_> = (0..20)
        .map(|_| {
            let velocity: [f64; 4] = std::array::from_fn(|_| r.gen_range(-1.5..1.5));
            let y0: [f64; 4] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
            let z0: [f64; 4] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
            (velocity, y0, z0)
        })
        .collect();
    let worst = sweep_max(mode, cases.len(), |i| {
        let (velocity, y0, z0) = &cases[i];
        let sample = jacobi_integrate(velocity, y0, z0, 1.0, 1000).unwrap();
        let mut w = 0.0_f64;
        for (t, st) in sample.iter() {
            w = w.max((st.y[3] - (y0[3] + z0[3] * t)).abs());
        }
        // Closed form is affine in y4 by construction (exact).
        let cf = jacobi_closed_form(velocity, y0, z0);
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            w = w.max((cf.evaluate(t)[3] - (y0[3] + z0[3] * t)).abs());
        }
        w
    });
    CheckReport::pass_fail(
        "jacobi-y4-affine",
        tol::TABLE_TOL,
        worst,
        "y4(t) = y4(0) + y4'(0) t in both the integrator and the closed form",
    )
}

fn check_jacobi_variation_oracle(mode: Mode) -> CheckReport {
    let mut r = rng(0xE9);
    let h = tol::FD_JACOBI_STEP;
    let cases: Vec<_> = (0..10)
        .map(|_| (rand_vec(&mut r, 1.2), rand_vec(&mut r, 1.2)))
        .collect();
    let worst = sweep_max(mode, cases.len(), |i| {
        let (u, w) = &cases[i];
        let y_at = |s: f64| -> [f64; 4] {
            let plus = exp_geodesic(&(*u + *w * h), s).matrix();
            let minus = exp_geodesic(&(*u - *w * h), s).matrix();
            let deriv = (plus - minus).scale(1.0 / (2.0 * h));
            let sigma_inv = exp_geodesic(u, s).matrix().inverse().unwrap();
            AlgebraVector::from_matrix(sigma_inv * deriv).coeffs()
        };
        let mut worst_case = 0.0_f64;
        for s in [0.2, 0.5, 0.9] {
            let yp = y_at(s + h);
            let ym = y_at(s - h);
            let yc = y_at(s);
            let mut ydot = [0.0; 4];
            for k in 0..4 {
                ydot[k] = (yp[k] - ym[k]) / (2.0 * h);
            }
            let want = jacobi_rhs(&u.coeffs(), &ydot);
            for k in 0..4 {
                let ypp = (yp[k] - 2.0 * yc[k] + ym[k]) / (h * h);
                worst_case = worst_case.max((ypp - want[k]).abs());
            }
        }
        worst_case
    });
    CheckReport::pass_fail(
        "jacobi-geodesic-variation",
        tol::FD_JACOBI_TOL,
        worst,
        "finite-difference geodesic variation satisfies the printed system \
         (signs confirmed)",
    )
}

fn check_isometry_pullback(mode: Mode) -> CheckReport {
    let mut r = rng(0xEA);
    let h = 1e-6;
    let cases: Vec<_> = (0..10)
        .map(|_| {
            (
                exp_geodesic(&rand_vec(&mut r, 1.0), 0.5),
                exp_geodesic(&rand_vec(&mut r, 1.0), 0.3),
            )
        })
        .collect();
    let worst = sweep_max(mode, cases.len(), |i| {
        let (sigma, tau) = &cases[i];
        let image = dynamics::isometry_i_sigma(sigma, tau);
        let mut diff = MAT4_ZERO;
        for j in 0..4 {
            let mut bump = [0.0; 4];
            bump[j] = h;
            let tp = GroupPoint::new(tau.matrix() + Mat2::from_array(bump)).unwrap();
            let tm = GroupPoint::new(tau.matrix() - Mat2::from_array(bump)).unwrap();
            let ip = dynamics::isometry_i_sigma(sigma, &tp).matrix().to_array();
            let im = dynamics::isometry_i_sigma(sigma, &tm).matrix().to_array();
            for k in 0..4 {
                diff[k][j] = (ip[k] - im[k]) / (2.0 * h);
            }
        }
        let g_tau = coords::metric_at(tau);
        let g_img = coords::metric_at(&image);
        let mut w = 0.0_f64;
        for a in 0..4 {
            for b in 0..4 {
                let mut ua = [0.0; 4];
                ua[a] = 1.0;
                let mut ub = [0.0; 4];
                ub[b] = 1.0;
                let da = mat4_vec(&diff, &ua);
                let db = mat4_vec(&diff, &ub);
                let gv = mat4_vec(&g_img, &db);
                let pulled: f64 = (0..4).map(|m| da[m] * gv[m]).sum();
                w = w.max((pulled - g_tau[a][b]).abs());
            }
        }
        w
    });
    CheckReport::pass_fail(
        "isometry-metric-pullback",
        1e-5,
        worst,
        "finite-difference differential of I_sigma preserves the coordinate metric",
    )
}

fn check_reflect_roundtrip(mode: Mode) -> CheckReport {
    let mut r = rng(0xEB);
    let cases: Vec<_> = (0..20)
        .map(|_| {
            let times: Vec<f64> = (0..10).map(|k| k as f64 * 0.15).collect();
            let dir = rand_vec(&mut r, 1.2);
            let points: Vec<GroupPoint> =
                times.iter().map(|&t| exp_geodesic(&dir, 0.3 + t)).collect();
            let fields: Vec<Mat2> = (0..10).map(|_| rand_vec(&mut r, 1.5).to_matrix()).collect();
            (CurveSample::new(times, points).unwrap(), fields)
        })
        .collect();
    let worst = sweep_max(mode, cases.len(), |i| {
        let (curve, fields) = &cases[i];
        let reflected = dynamics::reflect(curve, fields).unwrap();
        let back = dynamics::unreflect(curve, &reflected).unwrap();
        fields
            .iter()
            .zip(back)
            .map(|(orig, got)| (*orig - got).norm_inf())
            .fold(0.0_f64, f64::max)
    });
    CheckReport::pass_fail(
        "reflect-roundtrip",
        tol::TABLE_TOL,
        worst,
        "unreflect(reflect(Y)) = Y along sampled curves",
    )
}

// ---------------------------------------------------------------------
// affine
// ---------------------------------------------------------------------

fn check_flat_associativity(mode: Mode) -> CheckReport {
    let mut r = rng(0xF1);
    let triples: Vec<_> = (0..200)
        .map(|_| {
            (
                rand_vec(&mut r, 2.0),
                rand_vec(&mut r, 2.0),
                rand_vec(&mut r, 2.0),
            )
        })
        .collect();
    let worst = sweep_max(mode, triples.len(), |i| {
        let (u, v, w) = &triples[i];
        let assoc = flat_affine_product(&flat_affine_product(u, v), w)
            - flat_affine_product(u, &flat_affine_product(v, w));
        let torsion = flat_affine_product(u, v) - flat_affine_product(v, u) - bracket(u, v);
        let curv = flat_affine_product(u, &flat_affine_product(v, w))
            - flat_affine_product(v, &flat_affine_product(u, w))
            - flat_affine_product(&bracket(u, v), w);
        assoc
            .norm_inf()
            .max(torsion.norm_inf())
            .max(curv.norm_inf())
    });
    CheckReport::pass_fail(
        "flat-structure-identities",
        tol::TABLE_TOL,
        worst,
        "associativity, zero torsion and zero curvature of the affine product",
    )
}

fn check_cover_homomorphism(mode: Mode) -> CheckReport {
    let mut r = rng(0xF2);
    let pairs: Vec<_> = (0..100)
        .map(|_| (rand_cover_point(&mut r), rand_cover_point(&mut r)))
        .collect();
    let worst = sweep_max(mode, pairs.len(), |i| {
        let (p, q) = &pairs[i];
        let prod = cover_multiply(p, q).unwrap();
        let lhs = cover_project(&prod).matrix();
        let rhs = cover_project(p).matrix() * cover_project(q).matrix();
        (lhs - rhs).norm_inf()
    });
    CheckReport::pass_fail(
        "cover-homomorphism",
        tol::COVER_HOM_TOL,
        worst,
        "projection of the product equals the product of projections",
    )
}

fn check_cover_associativity(mode: Mode) -> CheckReport {
    let mut r = rng(0xF3);
    let triples: Vec<_> = (0..100)
        .map(|_| {
            (
                rand_cover_point(&mut r),
                rand_cover_point(&mut r),
                rand_cover_point(&mut r),
            )
        })
        .collect();
    let worst = sweep_max(mode, triples.len(), |i| {
        let (p, q, s) = &triples[i];
        let ab_c = cover_multiply(&cover_multiply(p, q).unwrap(), s).unwrap();
        let a_bc = cover_multiply(p, &cover_multiply(q, s).unwrap()).unwrap();
        (ab_c.angle() - a_bc.angle())
            .abs()
            .max((ab_c.spd() - a_bc.spd()).norm_inf())
    });
    CheckReport::pass_fail(
        "cover-associativity",
        tol::COVER_TOL,
        worst,
        "lifted product associates over 100 random triples",
    )
}

fn check_cover_product_routes(mode: Mode) -> CheckReport {
    let mut r = rng(0xF4);
    let pairs: Vec<_> = (0..100)
        .map(|_| (rand_cover_point(&mut r), rand_cover_point(&mut r)))
        .collect();
    let worst = sweep_max(mode, pairs.len(), |i| {
        let (p, q) = &pairs[i];
        let second = cover_multiply(p, q).unwrap().spd();
        (second - cover_multiply_sqrt_route(p, q)).norm_inf()
    });
    CheckReport::pass_fail(
        "cover-product-routes",
        tol::COVER_TOL,
        worst,
        "angle-correction form equals the matrix-square-root form",
    )
}

fn check_polar_roundtrip(mode: Mode) -> CheckReport {
    let mut r = rng(0xF5);
    let points: Vec<_> = (0..100).map(|_| rand_cover_point(&mut r)).collect();
    let two_pi = 2.0 * std::f64::consts::PI;
    let worst = sweep_max(mode, points.len(), |i| {
        let back = polar_decompose(&cover_project(&points[i]));
        let spd_dev = (back.spd() - points[i].spd()).norm_inf();
        let delta = (back.angle() - points[i].angle()).rem_euclid(two_pi);
        spd_dev.max(delta.min(two_pi - delta))
    });
    CheckReport::pass_fail(
        "polar-projection-roundtrip",
        tol::COVER_HOM_TOL,
        worst,
        "polar_decompose inverts cover_project up to the 2pi class",
    )
}

fn check_developing_map(mode: Mode) -> CheckReport {
    let base = developing_map(&CoverCoords::basepoint());
    let base_dev = base.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut r = rng(0xF6);
    let cases: Vec<_> = (0..20)
        .map(|_| {
            [
                CoverCoords::basepoint(),
                CoverCoords::from_point(&rand_cover_point(&mut r)),
                CoverCoords::from_point(&rand_cover_point(&mut r)),
                CoverCoords::from_point(&rand_cover_point(&mut r)),
            ]
        })
        .collect();
    let worst = sweep_max(mode, cases.len(), |i| {
        let waypoints = &cases[i];
        let mut integral = [0.0_f64; 4];
        for seg in waypoints.windows(2) {
            let a = seg[0].coords();
            let b = seg[1].coords();
            // Midpoint quadrature of the constant-coefficient coframe.
            let n = 64;
            for _ in 0..n {
                for k in 0..4 {
                    integral[k] += (b[k] - a[k]) / n as f64;
                }
            }
        }
        let want = developing_map(&waypoints[3]);
        (0..4)
            .map(|k| (integral[k] - want[k]).abs())
            .fold(0.0_f64, f64::max)
    });
    CheckReport::pass_fail(
        "developing-map-path-integral",
        tol::DEV_PATH_TOL,
        worst.max(base_dev),
        "line integral of the parallel coframe along 20 polygonal paths",
    )
}

fn check_hessian_gradient(mode: Mode) -> CheckReport {
    let mut r = rng(0xF7);
    let h = tol::FD_STEP;
    let points: Vec<_> = (0..50).map(|_| rand_group_point(&mut r)).collect();
    let worst = sweep_max(mode, points.len(), |i| {
        let p = &points[i];
        let grad = hessian_gradient(p);
        let x = p.matrix().to_array();
        let mut w = 0.0_f64;
        for j in 0..4 {
            let mut up = x;
            let mut dn = x;
            up[j] += h;
            dn[j] -= h;
            let fu = (Mat2::from_array(up) * Mat2::from_array(up)).trace() / 2.0;
            let fd = (Mat2::from_array(dn) * Mat2::from_array(dn)).trace() / 2.0;
            w = w.max(((fu - fd) / (2.0 * h) - grad[j]).abs());
        }
        w
    });
    CheckReport::pass_fail(
        "hessian-gradient",
        tol::FD_GRADIENT_TOL,
        worst,
        "printed gradient (x1, x3, x2, x4) matches central differences",
    )
}

fn check_hessian_matrix(_: Mode) -> CheckReport {
    let hm = hessian_matrix();
    let eig = sym_eigenvalues(&hm);
    let want = [-1.0, 1.0, 1.0, 1.0];
    let eig_dev = eig
        .iter()
        .zip(want)
        .map(|(g, w)| (g - w).abs())
        .fold(0.0_f64, f64::max);
    // Finite differences of the potential at a generic point.
    let h = tol::FD_STEP;
    let base = [0.7, -0.4, 1.1, 2.0];
    let f = |x: [f64; 4]| (Mat2::from_array(x) * Mat2::from_array(x)).trace() / 2.0;
    let mut fd_dev = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            let mut pp = base;
            let mut pm = base;
            let mut mp = base;
            let mut mm = base;
            pp[i] += h;
            pp[j] += h;
            pm[i] += h;
            pm[j] -= h;
            mp[i] -= h;
            mp[j] += h;
            mm[i] -= h;
            mm[j] -= h;
            let fd = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
            fd_dev = fd_dev.max((fd - hm[i][j]).abs());
        }
    }
    CheckReport::pass_fail(
        "hessian-matrix",
        tol::FD_HESSIAN_TOL,
        fd_dev.max(eig_dev),
        "constant Hessian matches finite differences; eigenvalues {-1, 1, 1, 1}",
    )
}

fn check_hessian_metric_gap(_: Mode) -> CheckReport {
    let at_identity = mat4_norm_inf(&mat4_sub(
        &hessian_matrix(),
        &coords::metric_at(&GroupPoint::identity()),
    ));
    let p = GroupPoint::new(Mat2::new(2.0, 0.0, 0.0, 1.0)).unwrap();
    let away = mat4_norm_inf(&mat4_sub(&hessian_matrix(), &coords::metric_at(&p)));
    CheckReport::audit(
        "hessian-vs-metric-gap",
        tol::TABLE_TOL,
        away,
        at_identity <= tol::TABLE_TOL,
        format!(
            "Hess f equals the coordinate metric at the identity \
             (deviation {at_identity:.2e}) but not pointwise: the metric \
             carries the det^-2 factor; gap at diag(2,1) is {away:.3}"
        ),
    )
}

fn check_hessian_potential_values(_: Mode) -> CheckReport {
    let mut worst = (hessian_potential(&GroupPoint::identity()) - 1.0).abs();
    let p = GroupPoint::new(Mat2::new(2.0, 0.0, 0.0, 3.0)).unwrap();
    worst = worst.max((hessian_potential(&p) - 6.5).abs());
    let rot = GroupPoint::new(Mat2::new(0.0, 1.0, -1.0, 0.0)).unwrap();
    worst = worst.max((hessian_potential(&rot) + 1.0).abs());
    CheckReport::pass_fail(
        "hessian-potential-values",
        tol::TABLE_TOL,
        worst,
        "f = trace(M^2)/2 on reference points",
    )
}

type CheckFn = fn(Mode) -> CheckReport;

/// The full registry, in report order.
pub fn checks() -> Vec<CheckFn> {
    vec![
        check_k_table,
        check_bracket_table,
        check_jacobi_identity,
        check_ad_antisymmetry,
        check_signature,
        check_quadric_equals_k,
        check_timecone_sign_criterion,
        check_timecone_convexity,
        check_riemann_symmetries,
        check_riemann_reference_table,
        check_sectional_values,
        check_scalar_curvature,
        check_killing_ricci_tables,
        check_ricci_contraction,
        check_tidal_trace,
        check_weyl_trace_free,
        check_weyl_printed_table,
        check_weyl_reconstruction,
        check_kulkarni_antisymmetry,
        check_phi_metric_indices,
        check_christoffel_printed,
        check_christoffel_biinvariant,
        check_christoffel_properties,
        check_curvature_operator_k2,
        check_curvature_operator_k0,
        check_nonflat_metrics,
        check_frame_pushforward,
        check_frame_coframe_duality,
        check_metric_routes,
        check_metric_line_one,
        check_ricci_coord_frame,
        check_ricci_coord_printed,
        check_subgroup_law,
        check_lightlike_curve,
        check_lightlike_det,
        check_lightlike_trace,
        check_transport_conservation,
        check_transport_linearity,
        check_transport_central,
        check_jacobi_cross_validation,
        check_jacobi_y4_affine,
        check_jacobi_variation_oracle,
        check_isometry_pullback,
        check_reflect_roundtrip,
        check_flat_associativity,
        check_cover_homomorphism,
        check_cover_associativity,
        check_cover_product_routes,
        check_polar_roundtrip,
        check_developing_map,
        check_hessian_gradient,
        check_hessian_matrix,
        check_hessian_metric_gap,
        check_hessian_potential_values,
    ]
}

/// Run the whole suite and collect reports in registry order.
pub fn run_all(mode: Mode) -> Vec<CheckReport> {
    let registry = checks();
    #[cfg(feature = "parallel")]
    if mode == Mode::Parallel {
        return registry.par_iter().map(|f| f(mode)).collect();
    }
    registry.iter().map(|f| f(mode)).collect()
}

/// True when no check failed (warnings are audit findings, not failures).
pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.status != CheckStatus::Fail)
}
