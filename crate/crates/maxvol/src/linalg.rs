//! Singular values and small dense factorizations.

use thiserror::Error;

use crate::matrix::{dot, norm2, DenseMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("one-sided Jacobi did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("matrix is singular at pivot {pivot}")]
    Singular { pivot: usize },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}

/// Relative off-diagonal tolerance for Jacobi convergence.
const JACOBI_TOLERANCE: f64 = 1e-10;
const JACOBI_MAX_SWEEPS: usize = 100;

/// All `min(m, n)` singular values of `a`, sorted descending.
///
/// Computed with cyclic one-sided Jacobi rotations on the columns (of the
/// transpose when the matrix is wide), sweeping until every pairwise column
/// dot product is below `1e-10` relative to the column norms.
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>, LinalgError> {
    let work = if a.cols() > a.rows() {
        a.transpose()
    } else {
        a.clone()
    };
    let n = work.cols();
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| work.column(j).to_vec()).collect();

    let mut converged = false;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let (a_ii, a_jj, a_ij) = {
                    let ci = &cols[i];
                    let cj = &cols[j];
                    (dot(ci, ci), dot(cj, cj), dot(ci, cj))
                };
                let scale = (a_ii * a_jj).sqrt();
                if scale == 0.0 || a_ij.abs() <= JACOBI_TOLERANCE * scale {
                    continue;
                }
                rotated = true;
                // Jacobi rotation zeroing the (i, j) Gram entry.
                let zeta = (a_jj - a_ii) / (2.0 * a_ij);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(j);
                let ci = &mut left[i];
                let cj = &mut right[0];
                for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
                    let xi = *x;
                    let yj = *y;
                    *x = c * xi - s * yj;
                    *y = s * xi + c * yj;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
        });
    }

    let mut sigmas: Vec<f64> = cols.iter().map(|c| norm2(c)).collect();
    sigmas.sort_by(|a, b| b.partial_cmp(a).expect("norms are finite"));
    Ok(sigmas)
}

/// Upper-triangular factor `R` of the Householder QR of `a` (`n x n` for a
/// square input). Signs are unnormalized; only singular values of blocks of
/// `R` are consumed downstream.
pub fn qr_r(a: &DenseMatrix) -> DenseMatrix {
    let m = a.rows();
    let n = a.cols();
    let mut r = a.clone();
    let steps = m.min(n);
    for k in 0..steps {
        // Build the Householder vector for column k below the diagonal.
        let mut v: Vec<f64> = (k..m).map(|i| r.get(i, k)).collect();
        let alpha = norm2(&v);
        if alpha == 0.0 {
            continue;
        }
        let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
        v[0] += sign * alpha;
        let vnorm2 = dot(&v, &v);
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k..n {
            let mut proj = 0.0;
            for (idx, i) in (k..m).enumerate() {
                proj += v[idx] * r.get(i, j);
            }
            let factor = 2.0 * proj / vnorm2;
            for (idx, i) in (k..m).enumerate() {
                let val = r.get(i, j) - factor * v[idx];
                r.set(i, j, val);
            }
        }
        for i in (k + 1)..m {
            r.set(i, k, 0.0);
        }
    }
    r
}

/// `|det|` of a square matrix by Gaussian elimination with partial pivoting.
pub fn abs_det(a: &DenseMatrix) -> Result<f64, LinalgError> {
    if a.rows() != a.cols() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut det = 1.0f64;
    for k in 0..n {
        let mut piv = k;
        for i in (k + 1)..n {
            if m.get(i, k).abs() > m.get(piv, k).abs() {
                piv = i;
            }
        }
        let pivot = m.get(piv, k);
        if pivot == 0.0 {
            return Ok(0.0);
        }
        if piv != k {
            for j in 0..n {
                let a = m.get(k, j);
                let b = m.get(piv, j);
                m.set(k, j, b);
                m.set(piv, j, a);
            }
        }
        det *= m.get(k, k);
        for i in (k + 1)..n {
            let f = m.get(i, k) / m.get(k, k);
            for j in k..n {
                let val = m.get(i, j) - f * m.get(k, j);
                m.set(i, j, val);
            }
        }
    }
    Ok(det.abs())
}

/// Inverse of a square matrix by Gauss-Jordan with partial pivoting.
pub fn inverse(a: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
    if a.rows() != a.cols() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut inv = DenseMatrix::identity(n);
    for k in 0..n {
        let mut piv = k;
        for i in (k + 1)..n {
            if m.get(i, k).abs() > m.get(piv, k).abs() {
                piv = i;
            }
        }
        if m.get(piv, k) == 0.0 {
            return Err(LinalgError::Singular { pivot: k });
        }
        if piv != k {
            for j in 0..n {
                let (a1, b1) = (m.get(k, j), m.get(piv, j));
                m.set(k, j, b1);
                m.set(piv, j, a1);
                let (a2, b2) = (inv.get(k, j), inv.get(piv, j));
                inv.set(k, j, b2);
                inv.set(piv, j, a2);
            }
        }
        let d = m.get(k, k);
        for j in 0..n {
            m.set(k, j, m.get(k, j) / d);
            inv.set(k, j, inv.get(k, j) / d);
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = m.get(i, k);
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                let mv = m.get(i, j) - f * m.get(k, j);
                m.set(i, j, mv);
                let iv = inv.get(i, j) - f * inv.get(k, j);
                inv.set(i, j, iv);
            }
        }
    }
    Ok(inv)
}

/// Dense product `a * b`.
pub fn matmul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    assert_eq!(a.cols(), b.rows(), "inner dimensions must agree");
    let mut out = DenseMatrix::zeros(a.rows(), b.cols());
    for j in 0..b.cols() {
        for k in 0..a.cols() {
            let f = b.get(k, j);
            if f == 0.0 {
                continue;
            }
            for i in 0..a.rows() {
                let val = out.get(i, j) + a.get(i, k) * f;
                out.set(i, j, val);
            }
        }
    }
    out
}

/// The block `a[rows, cols]` as a fresh matrix.
pub fn submatrix(a: &DenseMatrix, rows: &[usize], cols: &[usize]) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(rows.len(), cols.len());
    for (jj, &j) in cols.iter().enumerate() {
        for (ii, &i) in rows.iter().enumerate() {
            out.set(ii, jj, a.get(i, j));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_singular_values() {
        let s = singular_values(&DenseMatrix::identity(3)).unwrap();
        assert_eq!(s, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn permuted_diagonal_singular_values() {
        // diag(3, 2, 1) with rows cyclically permuted; orthogonal invariance.
        let a = DenseMatrix::from_columns(&[
            vec![0.0, 3.0, 0.0],
            vec![0.0, 0.0, 2.0],
            vec![1.0, 0.0, 0.0],
        ])
        .unwrap();
        let s = singular_values(&a).unwrap();
        assert!((s[0] - 3.0).abs() < 1e-12);
        assert!((s[1] - 2.0).abs() < 1e-12);
        assert!((s[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn golden_ratio_singular_values() {
        // [[1, 1], [0, 1]]: sigma = phi, 1/phi with sigma1*sigma2 = |det| = 1.
        let a = DenseMatrix::from_columns(&[vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let s = singular_values(&a).unwrap();
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!((s[0] - phi).abs() < 1e-10, "sigma1 = {}", s[0]);
        assert!((s[1] - 1.0 / phi).abs() < 1e-10, "sigma2 = {}", s[1]);
        assert!((s[0] * s[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn wide_matrix_singular_values() {
        let a = DenseMatrix::new(1, 3, vec![3.0, 0.0, 4.0]).unwrap();
        let s = singular_values(&a).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn qr_r_is_triangular_and_preserves_column_norms() {
        let a = DenseMatrix::from_columns(&[
            vec![2.0, 1.0, -1.0],
            vec![0.5, 3.0, 2.0],
            vec![1.0, -2.0, 0.5],
        ])
        .unwrap();
        let r = qr_r(&a);
        for i in 0..3 {
            for j in 0..i {
                assert_eq!(r.get(i, j), 0.0);
            }
        }
        // Q is orthogonal, so R has the same singular values as A.
        let sa = singular_values(&a).unwrap();
        let sr = singular_values(&r).unwrap();
        for (x, y) in sa.iter().zip(&sr) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn det_and_inverse() {
        let a = DenseMatrix::from_columns(&[vec![4.0, 2.0], vec![7.0, 6.0]]).unwrap();
        assert!((abs_det(&a).unwrap() - 10.0).abs() < 1e-12);
        let inv = inverse(&a).unwrap();
        let prod = matmul(&a, &inv);
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod.get(i, j) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_inverse_rejected() {
        let a = DenseMatrix::from_columns(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(inverse(&a), Err(LinalgError::Singular { .. })));
        assert_eq!(abs_det(&a).unwrap(), 0.0);
    }
}
