//! Dense 4x4 helpers for frame-indexed computations.

/// Row-major 4x4 array of frame components.
pub type Mat4 = [[f64; 4]; 4];

pub const MAT4_ZERO: Mat4 = [[0.0; 4]; 4];

pub fn mat4_identity() -> Mat4 {
    let mut m = MAT4_ZERO;
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = MAT4_ZERO;
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..4 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn mat4_sub(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = MAT4_ZERO;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[i][j] - b[i][j];
        }
    }
    out
}

pub fn mat4_scale(a: &Mat4, s: f64) -> Mat4 {
    let mut out = *a;
    for row in out.iter_mut() {
        for v in row.iter_mut() {
            *v *= s;
        }
    }
    out
}

pub fn mat4_transpose(a: &Mat4) -> Mat4 {
    let mut out = MAT4_ZERO;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn mat4_norm_inf(a: &Mat4) -> f64 {
    a.iter().flatten().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub fn mat4_vec(a: &Mat4, x: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for i in 0..4 {
        out[i] = (0..4).map(|j| a[i][j] * x[j]).sum();
    }
    out
}

/// Gauss-Jordan inverse with partial pivoting. Returns `None` when a
/// pivot falls below `tol`.
pub fn mat4_inverse(a: &Mat4, tol: f64) -> Option<Mat4> {
    let mut aug = [[0.0_f64; 8]; 4];
    for i in 0..4 {
        aug[i][..4].copy_from_slice(&a[i]);
        aug[i][4 + i] = 1.0;
    }
    for col in 0..4 {
        let pivot_row = (col..4)
            .max_by(|&r, &s| aug[r][col].abs().total_cmp(&aug[s][col].abs()))
            .unwrap();
        if aug[pivot_row][col].abs() <= tol {
            return None;
        }
        aug.swap(col, pivot_row);
        let pivot = aug[col][col];
        for v in aug[col].iter_mut() {
            *v /= pivot;
        }
        for row in 0..4 {
            if row == col {
                continue;
            }
            let factor = aug[row][col];
            if factor == 0.0 {
                continue;
            }
            for j in 0..8 {
                aug[row][j] -= factor * aug[col][j];
            }
        }
    }
    let mut out = MAT4_ZERO;
    for i in 0..4 {
        out[i].copy_from_slice(&aug[i][4..]);
    }
    Some(out)
}

pub fn mat4_det(a: &Mat4) -> f64 {
    // LU with partial pivoting, sign-tracked.
    let mut m = *a;
    let mut det = 1.0;
    for col in 0..4 {
        let pivot_row = (col..4)
            .max_by(|&r, &s| m[r][col].abs().total_cmp(&m[s][col].abs()))
            .unwrap();
        if m[pivot_row][col] == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            m.swap(col, pivot_row);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..4 {
            let factor = m[row][col] / m[col][col];
            for j in col..4 {
                m[row][j] -= factor * m[col][j];
            }
        }
    }
    det
}

/// Eigenvalues of a symmetric 4x4 matrix by cyclic Jacobi rotations,
/// returned in ascending order.
pub fn sym_eigenvalues(a: &Mat4) -> [f64; 4] {
    let mut m = *a;
    for _ in 0..64 {
        let mut off = 0.0_f64;
        for i in 0..4 {
            for j in i + 1..4 {
                off = off.max(m[i][j].abs());
            }
        }
        if off < 1e-14 {
            break;
        }
        for p in 0..4 {
            for q in p + 1..4 {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = 0.5 * (2.0 * m[p][q]).atan2(m[p][p] - m[q][q]);
                let (s, c) = theta.sin_cos();
                let mut rot = mat4_identity();
                rot[p][p] = c;
                rot[q][q] = c;
                rot[p][q] = -s;
                rot[q][p] = s;
                m = mat4_mul(&mat4_transpose(&rot), &mat4_mul(&m, &rot));
            }
        }
    }
    let mut eig = [m[0][0], m[1][1], m[2][2], m[3][3]];
    eig.sort_by(f64::total_cmp);
    eig
}

/// Number of negative eigenvalues of a symmetric matrix (the index of
/// the corresponding quadratic form).
pub fn sym_index(a: &Mat4) -> usize {
    sym_eigenvalues(a).iter().filter(|&&l| l < 0.0).count()
}
