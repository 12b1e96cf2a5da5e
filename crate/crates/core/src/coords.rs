//! The natural coordinate chart (x1, x2, x3, x4) = [[x1, x2], [x3, x4]],
//! the left-invariant frame and coframe as coordinate fields, and the
//! coordinate expressions of the metric and Ricci tensor.
//!
//! The printed coordinate Ricci expression fails a homogeneity sanity
//! check, so the frame-pullback construction is authoritative here and
//! the printed polynomial is kept as audit data only.

use crate::algebra::{AlgebraVector, GroupPoint, SIGNATURE, SQRT_2};
use crate::curvature::ricci_form;
use crate::linalg::{mat4_det, Mat4, MAT4_ZERO};
use crate::mat2::Mat2;

/// Values of the four left-invariant fields e_i^+ at a base point, as
/// coordinate 4-vectors (row i is e_{i+1}^+).
#[derive(Debug, Clone, Copy)]
pub struct FrameFieldValue {
    pub base: GroupPoint,
    pub vectors: Mat4,
}

impl FrameFieldValue {
    /// Determinant of the stacked frame vectors; nonzero on the group.
    pub fn det(&self) -> f64 {
        mat4_det(&self.vectors)
    }
}

/// Values of the dual coframe at a base point (row i is (e_{i+1}^+)*).
#[derive(Debug, Clone, Copy)]
pub struct CoframeFieldValue {
    pub base: GroupPoint,
    pub covectors: Mat4,
}

impl CoframeFieldValue {
    /// Pairing matrix against a frame; the identity when dual.
    pub fn pair(&self, frame: &FrameFieldValue) -> Mat4 {
        let mut out = MAT4_ZERO;
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = (0..4)
                    .map(|m| self.covectors[i][m] * frame.vectors[j][m])
                    .sum();
            }
        }
        out
    }
}

/// The frame at p via the printed coordinate expressions, e.g.
/// e1^+ = (sqrt2/2)(-x2 d1 + x1 d2 - x4 d3 + x3 d4). Equal to the
/// pushforward p * e_i flattened to coordinates.
pub fn frame_at(p: &GroupPoint) -> FrameFieldValue {
    let [x1, x2, x3, x4] = p.matrix().to_array();
    let h = SQRT_2 / 2.0;
    let vectors = [
        [-x2 * h, x1 * h, -x4 * h, x3 * h],
        [x2 * h, x1 * h, x4 * h, x3 * h],
        [x1 * h, -x2 * h, x3 * h, -x4 * h],
        [x1 * h, x2 * h, x3 * h, x4 * h],
    ];
    FrameFieldValue { base: *p, vectors }
}

/// Pushforward construction of the same frame: row i is the matrix
/// product p * e_i in coordinate order. Used as the oracle for
/// `frame_at`.
pub fn frame_at_pushforward(p: &GroupPoint) -> FrameFieldValue {
    let mut vectors = MAT4_ZERO;
    for i in 0..4 {
        let m = p.matrix() * AlgebraVector::basis(i).to_matrix();
        vectors[i] = m.to_array();
    }
    FrameFieldValue { base: *p, vectors }
}

/// The dual coframe at p via the printed covector expressions, e.g.
/// (e1^+)* = (x3 dx1 + x4 dx2 - x1 dx3 - x2 dx4) / (sqrt2 (x1 x4 - x2 x3)).
pub fn coframe_at(p: &GroupPoint) -> CoframeFieldValue {
    let [x1, x2, x3, x4] = p.matrix().to_array();
    let f = 1.0 / (SQRT_2 * (x1 * x4 - x2 * x3));
    let covectors = [
        [x3 * f, x4 * f, -x1 * f, -x2 * f],
        [-x3 * f, x4 * f, x1 * f, -x2 * f],
        [x4 * f, x3 * f, -x2 * f, -x1 * f],
        [x4 * f, -x3 * f, -x2 * f, x1 * f],
    ];
    CoframeFieldValue {
        base: *p,
        covectors,
    }
}

/// Coordinate components of the bi-invariant metric at p, from the
/// printed quadratic form over 2 (x1 x4 - x2 x3)^2.
pub fn metric_at(p: &GroupPoint) -> Mat4 {
    let [x1, x2, x3, x4] = p.matrix().to_array();
    let det = x1 * x4 - x2 * x3;
    let f = 1.0 / (2.0 * det * det);
    let mut g = MAT4_ZERO;
    let mut put = |i: usize, j: usize, c: f64| {
        if i == j {
            g[i][i] += c;
        } else {
            g[i][j] += c / 2.0;
            g[j][i] += c / 2.0;
        }
    };
    put(0, 0, 2.0 * x4 * x4);
    put(0, 1, -4.0 * x3 * x4);
    put(0, 2, -4.0 * x2 * x4);
    put(0, 3, 4.0 * x2 * x3);
    put(1, 1, 2.0 * x3 * x3);
    put(1, 2, 4.0 * x1 * x4);
    put(1, 3, -4.0 * x1 * x3);
    put(2, 2, 2.0 * x2 * x2);
    put(2, 3, -4.0 * x1 * x2);
    put(3, 3, 2.0 * x1 * x1);
    for row in g.iter_mut() {
        for v in row.iter_mut() {
            *v *= f;
        }
    }
    g
}

/// Frame-based construction of the same components:
/// sum_i eps_i (e_i^+)* (x) (e_i^+)*.
pub fn metric_at_frame_based(p: &GroupPoint) -> Mat4 {
    let cof = coframe_at(p);
    let mut g = MAT4_ZERO;
    for i in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                g[a][b] += SIGNATURE[i] * cof.covectors[i][a] * cof.covectors[i][b];
            }
        }
    }
    g
}

/// Left-translation pullback construction: g_p(U, V) = k(p^-1 U, p^-1 V)
/// on coordinate directions read as 2x2 matrices.
pub fn metric_at_pullback(p: &GroupPoint) -> Mat4 {
    let pinv = p.matrix().inverse().expect("group point");
    let mut g = MAT4_ZERO;
    for i in 0..4 {
        let mut ei = [0.0; 4];
        ei[i] = 1.0;
        let mi = pinv * Mat2::from_array(ei);
        for j in 0..4 {
            let mut ej = [0.0; 4];
            ej[j] = 1.0;
            let mj = pinv * Mat2::from_array(ej);
            g[i][j] = (mi * mj).trace();
        }
    }
    g
}

/// Coordinate Ricci tensor as the pullback of the constant frame Ricci
/// table through the coframe. This is the authoritative construction.
pub fn ricci_coord_frame(p: &GroupPoint) -> Mat4 {
    let cof = coframe_at(p);
    let ric = ricci_form();
    let mut g = MAT4_ZERO;
    for i in 0..4 {
        for j in 0..4 {
            let rij = ric.get(i, j);
            if rij == 0.0 {
                continue;
            }
            for a in 0..4 {
                for b in 0..4 {
                    g[a][b] += rij * cof.covectors[i][a] * cof.covectors[j][b];
                }
            }
        }
    }
    g
}

/// Literal evaluation of the printed coordinate Ricci polynomial.
/// Audit data only; see the module docs.
pub fn ricci_coord_printed(p: &GroupPoint) -> Mat4 {
    let [x1, x2, x3, x4] = p.matrix().to_array();
    let h = SQRT_2 / 2.0;
    let mut g = MAT4_ZERO;
    let mut put = |i: usize, j: usize, c: f64| {
        if i == j {
            g[i][i] += c;
        } else {
            g[i][j] += c / 2.0;
            g[j][i] += c / 2.0;
        }
    };
    put(0, 0, -x1 * x2 / 2.0 + x1 * x4 / 2.0 + x2 * x2 / 2.0);
    put(0, 1, h * x1 + h * x2);
    put(0, 2, h * x1 + h * x4);
    put(0, 3, h * x1 + h * x3);
    put(1, 1, SQRT_2 * x1);
    put(1, 2, -h * x2 + h * x4);
    put(1, 3, h * x2 + h * x3);
    put(2, 2, SQRT_2 * x3);
    put(2, 3, h * x3 - h * x4);
    put(3, 3, SQRT_2 * x4);
    g
}

/// Audit of the proposition's first displayed line for the metric,
/// which sums coframe products with an (e2)*(e3)* cross term where the
/// dx-expansion wants (e2)*(e2)*. Returns the max deviation of each
/// reading from the printed dx-expansion: (literal line, squares line).
pub fn metric_line_one_audit(p: &GroupPoint) -> (f64, f64) {
    let cof = coframe_at(p);
    let printed = metric_at(p);
    let mut literal = MAT4_ZERO;
    let mut squares = MAT4_ZERO;
    for a in 0..4 {
        for b in 0..4 {
            let term = |i: usize, j: usize| {
                0.5 * (cof.covectors[i][a] * cof.covectors[j][b]
                    + cof.covectors[j][a] * cof.covectors[i][b])
            };
            literal[a][b] = -term(0, 0) + term(1, 2) + term(2, 2) + term(3, 3);
            squares[a][b] = -term(0, 0) + term(1, 1) + term(2, 2) + term(3, 3);
        }
    }
    let mut dev_lit = 0.0_f64;
    let mut dev_sq = 0.0_f64;
    for a in 0..4 {
        for b in 0..4 {
            dev_lit = dev_lit.max((literal[a][b] - printed[a][b]).abs());
            dev_sq = dev_sq.max((squares[a][b] - printed[a][b]).abs());
        }
    }
    (dev_lit, dev_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{mat4_norm_inf, mat4_sub, mat4_vec};
    use crate::tol::{COORD_TOL, TABLE_TOL};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn rand_point(rng: &mut ChaCha8Rng) -> GroupPoint {
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

    #[test]
    fn frame_at_identity_is_basis() {
        let f = frame_at(&GroupPoint::identity());
        for i in 0..4 {
            let want = AlgebraVector::basis(i).to_matrix().to_array();
            for j in 0..4 {
                assert!((f.vectors[i][j] - want[j]).abs() < TABLE_TOL);
            }
        }
    }

    #[test]
    fn frame_matches_pushforward() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let p = rand_point(&mut rng);
            let a = frame_at(&p);
            let b = frame_at_pushforward(&p);
            assert!(mat4_norm_inf(&mat4_sub(&a.vectors, &b.vectors)) < TABLE_TOL);
            assert!(a.det().abs() > 1e-10 * p.det());
        }
    }

    #[test]
    fn frame_example_diag() {
        // p = diag(2, 1): e4^+ = (sqrt2/2)(2, 0, 0, 1).
        let p = GroupPoint::new(Mat2::new(2.0, 0.0, 0.0, 1.0)).unwrap();
        let f = frame_at(&p);
        let want = [SQRT_2, 0.0, 0.0, SQRT_2 / 2.0];
        for j in 0..4 {
            assert!((f.vectors[3][j] - want[j]).abs() < TABLE_TOL);
        }
    }

    #[test]
    fn frame_nondegenerate_for_rotation() {
        let p = GroupPoint::new(Mat2::new(0.0, 1.0, -1.0, 0.0)).unwrap();
        assert!(frame_at(&p).det().abs() > 0.1);
    }

    #[test]
    fn coframe_duality() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let id = crate::linalg::mat4_identity();
        for _ in 0..100 {
            let p = rand_point(&mut rng);
            let pairing = coframe_at(&p).pair(&frame_at(&p));
            assert!(mat4_norm_inf(&mat4_sub(&pairing, &id)) < COORD_TOL);
        }
        // At the identity in particular.
        let pairing = coframe_at(&GroupPoint::identity()).pair(&frame_at(&GroupPoint::identity()));
        assert!(mat4_norm_inf(&mat4_sub(&pairing, &id)) < TABLE_TOL);
    }

    #[test]
    fn coframe_near_singular_conditioning() {
        // det = 1e-6: coefficients blow up but duality survives at the
        // scale of the conditioning.
        let p = GroupPoint::new(Mat2::new(1.0, 0.0, 0.0, 1e-6)).unwrap();
        let pairing = coframe_at(&p).pair(&frame_at(&p));
        let id = crate::linalg::mat4_identity();
        assert!(mat4_norm_inf(&mat4_sub(&pairing, &id)) < 1e-8 / p.det());
    }

    #[test]
    fn metric_three_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let p = rand_point(&mut rng);
            let printed = metric_at(&p);
            let frame = metric_at_frame_based(&p);
            let pullback = metric_at_pullback(&p);
            assert!(mat4_norm_inf(&mat4_sub(&printed, &frame)) < COORD_TOL);
            assert!(mat4_norm_inf(&mat4_sub(&printed, &pullback)) < COORD_TOL);
        }
    }

    #[test]
    fn metric_at_identity_gram() {
        // At eps the Gram matrix in matrix-entry coordinates is
        // g11 = g44 = 1, g23 = g32 = 1, everything else 0.
        let g = metric_at(&GroupPoint::identity());
        let mut want = MAT4_ZERO;
        want[0][0] = 1.0;
        want[3][3] = 1.0;
        want[1][2] = 1.0;
        want[2][1] = 1.0;
        assert!(mat4_norm_inf(&mat4_sub(&g, &want)) < TABLE_TOL);
    }

    #[test]
    fn metric_biinvariance_along_rotation_geodesic() {
        // Along s -> exp(s e1) the velocity is the left translate of e1,
        // so the metric applied to it stays k(e1, e1) = -1.
        for k in 0..20 {
            let s = -2.0 + 0.21 * k as f64;
            let angle = s * SQRT_2 / 2.0;
            // gamma(s) = [[cos, sin], [-sin, cos]] at angle (sqrt2/2) s
            let gamma = Mat2::new(angle.cos(), angle.sin(), -angle.sin(), angle.cos());
            let p = GroupPoint::new(gamma).unwrap();
            let vel = (gamma * AlgebraVector::basis(0).to_matrix()).to_array();
            let g = metric_at(&p);
            let gv = mat4_vec(&g, &vel);
            let val: f64 = (0..4).map(|i| gv[i] * vel[i]).sum();
            assert!((val + 1.0).abs() < COORD_TOL, "s = {s}: {val}");
        }
    }

    #[test]
    fn metric_left_invariance_under_scaling() {
        // Scaling p -> 2p and left-translating the compared vectors
        // leaves frame components unchanged.
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..20 {
            let p = rand_point(&mut rng);
            let p2 = GroupPoint::new(p.matrix().scale(2.0)).unwrap();
            let f1 = frame_at(&p);
            let f2 = frame_at(&p2);
            let g1 = metric_at(&p);
            let g2 = metric_at(&p2);
            for i in 0..4 {
                for j in 0..4 {
                    let a: f64 = {
                        let gv = mat4_vec(&g1, &f1.vectors[i]);
                        (0..4).map(|m| gv[m] * f1.vectors[j][m]).sum()
                    };
                    let b: f64 = {
                        let gv = mat4_vec(&g2, &f2.vectors[i]);
                        (0..4).map(|m| gv[m] * f2.vectors[j][m]).sum()
                    };
                    assert!((a - b).abs() < COORD_TOL);
                }
            }
        }
    }

    #[test]
    fn ricci_frame_pullback_reproduces_table() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let p = rand_point(&mut rng);
            let ric = ricci_coord_frame(&p);
            let frame = frame_at(&p);
            // Contracting with frame vectors recovers the constant table.
            let want = [1.0, -1.0, -1.0, 0.0];
            for i in 0..4 {
                for j in 0..4 {
                    let rv = mat4_vec(&ric, &frame.vectors[j]);
                    let got: f64 = (0..4).map(|m| frame.vectors[i][m] * rv[m]).sum();
                    let target = if i == j { want[i] } else { 0.0 };
                    assert!((got - target).abs() < COORD_TOL);
                }
            }
        }
    }

    #[test]
    fn ricci_printed_is_audit_only() {
        // The printed polynomial disagrees with the frame construction
        // already at the identity; the audit reports, never asserts.
        let p = GroupPoint::identity();
        let frame = ricci_coord_frame(&p);
        let printed = ricci_coord_printed(&p);
        let dev = mat4_norm_inf(&mat4_sub(&frame, &printed));
        assert!(dev > 0.5, "expected a visible deviation, got {dev}");
    }

    #[test]
    fn metric_line_one_squares_reading_wins() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..20 {
            let p = rand_point(&mut rng);
            let (lit, sq) = metric_line_one_audit(&p);
            assert!(sq < COORD_TOL, "squares reading should match, got {sq}");
            let _ = lit;
        }
    }
}
