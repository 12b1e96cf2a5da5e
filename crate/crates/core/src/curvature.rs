//! Curvature stack of the bi-invariant metric: Levi-Civita connection,
//! Riemann/sectional/scalar/Ricci data, the Weyl decomposition, tidal
//! force operators, and the Christoffel machinery for general
//! left-invariant metrics given by k-symmetric operators.

use crate::algebra::{bracket, k_form, killing_form, AlgebraVector, SIGNATURE};
use crate::error::{GeomError, Result};
use crate::linalg::{mat4_inverse, mat4_mul, mat4_norm_inf, mat4_sub, sym_index, Mat4, MAT4_ZERO};
use crate::tol::{PLANE_TOL, SINGULAR_TOL, TABLE_TOL};

/// Symmetric bilinear form on the orthonormal frame (rank-2 frame tensor).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Form2 {
    g: Mat4,
}

impl Form2 {
    pub fn new(g: Mat4) -> Result<Self> {
        let mut residual = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                residual = residual.max((g[i][j] - g[j][i]).abs());
            }
        }
        if residual > TABLE_TOL {
            return Err(GeomError::NotSymmetricForm { residual });
        }
        Ok(Form2 { g })
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        let mut g = MAT4_ZERO;
        for (i, v) in d.into_iter().enumerate() {
            g[i][i] = v;
        }
        Form2 { g }
    }

    /// Gram matrix of k on the basis: diag(-1, 1, 1, 1).
    pub fn k_gram() -> Self {
        Form2::diagonal(SIGNATURE)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.g[i][j]
    }

    pub fn gram(&self) -> Mat4 {
        self.g
    }

    /// Index: number of negative eigenvalues.
    pub fn index(&self) -> usize {
        sym_index(&self.g)
    }

    pub fn apply(&self, u: &AlgebraVector, v: &AlgebraVector) -> f64 {
        let (cu, cv) = (u.coeffs(), v.coeffs());
        let mut acc = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                acc += self.g[i][j] * cu[i] * cv[j];
            }
        }
        acc
    }
}

/// Rank-4 frame tensor, dense over all 4^4 index combinations.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    t: [[[[f64; 4]; 4]; 4]; 4],
}

impl Tensor4 {
    pub fn zero() -> Self {
        Tensor4 {
            t: [[[[0.0; 4]; 4]; 4]; 4],
        }
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.t[i][j][k][l]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        self.t[i][j][k][l] = v;
    }

    pub fn from_fn(f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut out = Tensor4::zero();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        out.t[i][j][k][l] = f(i, j, k, l);
                    }
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, o: &Tensor4) -> f64 {
        let mut m = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        m = m.max((self.t[i][j][k][l] - o.t[i][j][k][l]).abs());
                    }
                }
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs_diff(&Tensor4::zero())
    }

    /// Largest signature-weighted trace sum_i eps_i T(e_i, u, e_i, v)
    /// over all u, v in the basis.
    pub fn max_trace_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for u in 0..4 {
            for v in 0..4 {
                let tr: f64 = (0..4).map(|i| SIGNATURE[i] * self.t[i][u][i][v]).sum();
                worst = worst.max(tr.abs());
            }
        }
        worst
    }
}

/// Christoffel array Gamma_{ij}^k of a left-invariant connection in the
/// orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    gamma: [[[f64; 4]; 4]; 4],
}

impl Christoffel {
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma[i][j][k]
    }

    /// The operator nabla_{e_i} on frame coefficients: entry (k, j) is
    /// Gamma_{ij}^k.
    pub fn nabla_operator(&self, i: usize) -> Mat4 {
        let mut l = MAT4_ZERO;
        for j in 0..4 {
            for k in 0..4 {
                l[k][j] = self.gamma[i][j][k];
            }
        }
        l
    }
}

/// k-symmetric linear isomorphism of the algebra; defines the
/// left-invariant metric <u, v> = k(phi(u), v).
#[derive(Debug, Clone, Copy)]
pub struct MetricOperator {
    phi: Mat4,
}

impl MetricOperator {
    /// Validates k-symmetry k(phi u, v) = k(u, phi v) and invertibility.
    /// On the orthonormal basis, k-symmetry pins the pattern
    /// u_{1j} = -u_{j1} for j > 1 and a symmetric lower 3x3 block.
    pub fn new(phi: Mat4) -> Result<Self> {
        let mut residual = 0.0_f64;
        for j in 1..4 {
            residual = residual.max((phi[0][j] + phi[j][0]).abs());
        }
        for i in 1..4 {
            for j in i + 1..4 {
                residual = residual.max((phi[i][j] - phi[j][i]).abs());
            }
        }
        if residual > TABLE_TOL {
            return Err(GeomError::NotKSymmetric { residual });
        }
        if crate::linalg::mat4_det(&phi).abs() <= SINGULAR_TOL {
            return Err(GeomError::SingularMetric);
        }
        Ok(MetricOperator { phi })
    }

    /// phi_0 flips e1; its metric is Riemannian (index 0).
    pub fn phi0() -> Self {
        MetricOperator {
            phi: Form2::diagonal([-1.0, 1.0, 1.0, 1.0]).gram(),
        }
    }

    /// phi_1 is the identity; its metric is k itself (index 1).
    pub fn phi1() -> Self {
        MetricOperator {
            phi: crate::linalg::mat4_identity(),
        }
    }

    /// phi_2 flips e2; its metric has index 2.
    pub fn phi2() -> Self {
        MetricOperator {
            phi: Form2::diagonal([1.0, -1.0, 1.0, 1.0]).gram(),
        }
    }

    pub fn matrix(&self) -> Mat4 {
        self.phi
    }
}

/// Levi-Civita connection of the bi-invariant metric on left-invariant
/// fields: `D_u v = [u, v] / 2`.
pub fn levi_civita_biinv(u: &AlgebraVector, v: &AlgebraVector) -> AlgebraVector {
    bracket(u, v) * 0.5
}

/// Curvature of the bi-invariant metric: `R(u, v)w = [[u, v], w] / 4`.
pub fn riemann(u: &AlgebraVector, v: &AlgebraVector, w: &AlgebraVector) -> AlgebraVector {
    bracket(&bracket(u, v), w) * 0.25
}

/// Covariant curvature R_m(u, v, w, z) = k(R(u, v)w, z).
pub fn riemann_covariant(
    u: &AlgebraVector,
    v: &AlgebraVector,
    w: &AlgebraVector,
    z: &AlgebraVector,
) -> f64 {
    k_form(&riemann(u, v, w), z)
}

fn basis(i: usize) -> AlgebraVector {
    AlgebraVector::basis(i)
}

/// All components k(R(e_i, e_j)e_k, e_l) over the basis.
pub fn riemann_covariant_table() -> Tensor4 {
    Tensor4::from_fn(|i, j, k, l| riemann_covariant(&basis(i), &basis(j), &basis(k), &basis(l)))
}

/// Sectional curvature of the plane spanned by u, v:
/// `K(u, v) = k([u,v],[u,v]) / (4 (k(u,u)k(v,v) - k(u,v)^2))`.
pub fn sectional(u: &AlgebraVector, v: &AlgebraVector) -> Result<f64> {
    let denom = k_form(u, u) * k_form(v, v) - k_form(u, v).powi(2);
    if denom.abs() <= PLANE_TOL {
        return Err(GeomError::DegeneratePlane { denom });
    }
    let br = bracket(u, v);
    Ok(0.25 * k_form(&br, &br) / denom)
}

/// Scalar curvature S = 2 sum_{i<j} K(e_i, e_j), evaluated literally on
/// the basis planes; the three nonzero sectional values -1/2 give -3.
pub fn scalar_curvature() -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            let denom = k_form(&basis(i), &basis(i)) * k_form(&basis(j), &basis(j));
            if denom.abs() <= PLANE_TOL {
                continue;
            }
            s += sectional(&basis(i), &basis(j)).expect("basis planes are nondegenerate");
        }
    }
    2.0 * s
}

/// Ricci tensor Ric(u, v) = -B(u, v)/4.
pub fn ricci_tensor(u: &AlgebraVector, v: &AlgebraVector) -> f64 {
    -killing_form(u, v) / 4.0
}

/// Gram matrix of the Ricci tensor on the basis: diag(1, -1, -1, 0).
pub fn ricci_form() -> Form2 {
    let mut g = MAT4_ZERO;
    for i in 0..4 {
        for j in 0..4 {
            g[i][j] = ricci_tensor(&basis(i), &basis(j));
        }
    }
    Form2::new(g).expect("Ricci is symmetric")
}

/// Sign relating the signature-weighted contraction of the covariant
/// curvature to the Ricci tensor:
/// Ric(u, v) = RICCI_CONTRACTION_SIGN * sum_i eps_i k(R(e_i, u)v, e_i).
/// Fixed once by matching -B/4 on the basis.
pub const RICCI_CONTRACTION_SIGN: f64 = -1.0;

/// Kulkarni-Nomizu product of two symmetric forms:
/// (h ^ l)(w, x, y, z) = h(w,z)l(x,y) + h(x,y)l(w,z)
///                     - h(w,y)l(x,z) - h(x,z)l(w,y).
pub fn kulkarni_nomizu(h: &Form2, l: &Form2) -> Tensor4 {
    Tensor4::from_fn(|w, x, y, z| {
        h.get(w, z) * l.get(x, y) + h.get(x, y) * l.get(w, z)
            - h.get(w, y) * l.get(x, z)
            - h.get(x, z) * l.get(w, y)
    })
}

/// Weyl tensor from the decomposition
/// W = R_m - (1/2) Ric ^ k + (S/12) k ^ k,
/// with the covariant curvature oriented so that its signature-weighted
/// contraction is the Ricci tensor (the same orientation in which the
/// sectional curvature reads off R_m(u,v,v,u) / Q). For this metric the
/// result vanishes identically: the space is conformally flat.
pub fn weyl_tensor() -> Tensor4 {
    let rm = riemann_covariant_table();
    // Orientation with Ric = contraction, i.e. the negative of the table
    // built from R(u,v)w = [[u,v],w]/4 (see RICCI_CONTRACTION_SIGN).
    let rhat = Tensor4::from_fn(|i, j, k, l| -rm.get(i, j, k, l));
    let ric = ricci_form();
    let kg = Form2::k_gram();
    let ric_kn = kulkarni_nomizu(&ric, &kg);
    let kk = kulkarni_nomizu(&kg, &kg);
    let s = scalar_curvature();
    Tensor4::from_fn(|i, j, k, l| {
        rhat.get(i, j, k, l) - 0.5 * ric_kn.get(i, j, k, l) + (s / 12.0) * kk.get(i, j, k, l)
    })
}

/// The tabulated Weyl components as printed: values 0, +-3/2, +-1/2 on
/// stated index patterns, extended to all index orders by the curvature
/// symmetries (antisymmetry in each pair, pair exchange).
pub fn weyl_printed_table() -> Tensor4 {
    // Canonical nonzero cells with i < j, k < l, (i,j) <= (k,l):
    // only the "diagonal" plane components survive.
    fn canonical(i: usize, j: usize, k: usize, l: usize) -> f64 {
        match (i, j, k, l) {
            (0, 1, 0, 1) => 1.5,
            (0, 2, 0, 2) => 1.5,
            (1, 2, 1, 2) => -1.5,
            (0, 3, 0, 3) => 0.5,
            (1, 3, 1, 3) => -0.5,
            (2, 3, 2, 3) => -0.5,
            _ => 0.0,
        }
    }
    Tensor4::from_fn(|i, j, k, l| {
        if i == j || k == l {
            return 0.0;
        }
        let mut sign = 1.0;
        let (mut i, mut j, mut k, mut l) = (i, j, k, l);
        if i > j {
            std::mem::swap(&mut i, &mut j);
            sign = -sign;
        }
        if k > l {
            std::mem::swap(&mut k, &mut l);
            sign = -sign;
        }
        if (i, j) > (k, l) {
            std::mem::swap(&mut i, &mut k);
            std::mem::swap(&mut j, &mut l);
        }
        sign * canonical(i, j, k, l)
    })
}

/// The combination R_m - (1/2) Ric ^ k with R_m built directly from
/// `R(u,v)w = [[u,v],w]/4` and no scalar term. This reproduces the printed
/// component table exactly; the audit uses it to localize where the
/// printed table departs from the trace-free tensor.
pub fn weyl_printed_reconstruction() -> Tensor4 {
    let rm = riemann_covariant_table();
    let ric_kn = kulkarni_nomizu(&ricci_form(), &Form2::k_gram());
    Tensor4::from_fn(|i, j, k, l| rm.get(i, j, k, l) - 0.5 * ric_kn.get(i, j, k, l))
}

/// Tidal force operator F_v(y) = R(y, v)v on the k-orthogonal complement
/// of v. Rejects y with k(v, y) appreciably nonzero.
pub fn tidal_force(v: &AlgebraVector, y: &AlgebraVector) -> Result<AlgebraVector> {
    if v.norm_inf() == 0.0 {
        return Err(GeomError::InvalidInput("tidal force needs v != 0".into()));
    }
    let pairing = k_form(v, y);
    if pairing.abs() > crate::tol::CAUSAL_TOL {
        return Err(GeomError::NotOrthogonal { pairing });
    }
    Ok(riemann(y, v, v))
}

/// Trace of the tidal force operator, computed as the signature-weighted
/// contraction sum_i eps_i k(R(e_i, v)v, e_i). For v = sum f_i e_i this
/// equals -f1^2 + f2^2 + f3^2, which is -Ric(v, v).
pub fn tidal_trace(v: &AlgebraVector) -> f64 {
    (0..4)
        .map(|i| SIGNATURE[i] * k_form(&riemann(&basis(i), v, v), &basis(i)))
        .sum()
}

/// Gram matrix of the metric <u, v> = k(phi(u), v): phi^T * Gram(k).
pub fn metric_from_phi(phi: &MetricOperator) -> Form2 {
    let mut g = MAT4_ZERO;
    for i in 0..4 {
        for j in 0..4 {
            // k(phi e_i, e_j) = sum_m phi[m][i] K[m][j] = phi[j][i] eps_j
            g[i][j] = phi.matrix()[j][i] * SIGNATURE[j];
        }
    }
    // The pattern constraints on phi make this symmetric.
    Form2::new(g).expect("k-symmetric operator yields a symmetric Gram matrix")
}

/// Structure constants C_{ij}^m of the basis brackets.
pub fn structure_constants() -> [[[f64; 4]; 4]; 4] {
    let mut c = [[[0.0; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = bracket(&basis(i), &basis(j)).coeffs();
        }
    }
    c
}

/// Christoffel symbols of the left-invariant metric K in the frame:
/// Gamma_{ij}^k = (1/2) sum_{l,m} K^{kl} (-K_{jm} C_{il}^m
///                                        - K_{lm} C_{ji}^m
///                                        + K_{im} C_{lj}^m).
pub fn christoffel_left_invariant(metric: &Form2) -> Result<Christoffel> {
    let kinv = mat4_inverse(&metric.gram(), SINGULAR_TOL).ok_or(GeomError::SingularMetric)?;
    let c = structure_constants();
    let kg = metric.gram();
    let mut gamma = [[[0.0; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                let mut acc = 0.0;
                for l in 0..4 {
                    for m in 0..4 {
                        acc += 0.5
                            * kinv[k][l]
                            * (-kg[j][m] * c[i][l][m] - kg[l][m] * c[j][i][m]
                                + kg[i][m] * c[l][j][m]);
                    }
                }
                gamma[i][j][k] = acc;
            }
        }
    }
    Ok(Christoffel { gamma })
}

/// Curvature operator of a left-invariant connection as a matrix on
/// frame coefficients:
/// R(e_i, e_j) = nabla_i nabla_j - nabla_j nabla_i - nabla_{[e_i, e_j]}.
pub fn curvature_operator(gamma: &Christoffel, i: usize, j: usize) -> Mat4 {
    let li = gamma.nabla_operator(i);
    let lj = gamma.nabla_operator(j);
    let comm = mat4_sub(&mat4_mul(&li, &lj), &mat4_mul(&lj, &li));
    let c = structure_constants();
    let mut nabla_br = MAT4_ZERO;
    for m in 0..4 {
        let cm = c[i][j][m];
        if cm == 0.0 {
            continue;
        }
        let lm = gamma.nabla_operator(m);
        for r in 0..4 {
            for s in 0..4 {
                nabla_br[r][s] += cm * lm[r][s];
            }
        }
    }
    mat4_sub(&comm, &nabla_br)
}

/// Whether some curvature operator of the connection is nonzero
/// (non-flatness of the left-invariant metric).
pub fn has_nonzero_curvature(gamma: &Christoffel) -> bool {
    for i in 0..4 {
        for j in i + 1..4 {
            if mat4_norm_inf(&curvature_operator(gamma, i, j)) > TABLE_TOL {
                return true;
            }
        }
    }
    false
}

/// The three reference metrics defined by the diagonal operators, as
/// Gram matrices.
pub fn reference_metrics() -> [(&'static str, Form2); 3] {
    [
        ("K0", metric_from_phi(&MetricOperator::phi0())),
        ("K1", metric_from_phi(&MetricOperator::phi1())),
        ("K2", metric_from_phi(&MetricOperator::phi2())),
    ]
}
