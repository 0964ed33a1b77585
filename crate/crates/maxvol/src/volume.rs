//! Volumes of column sets and distances to column spans.
//!
//! The volume of columns `v_1..v_k` is the product of sequential
//! orthogonal-projection residual norms: `||v_1|| * prod ||v_i - proj(v_i)||`
//! over the span of the earlier columns. Equivalently `sqrt(det(G^T G))` for
//! the selected submatrix `G`. Volumes are computed by modified Gram-Schmidt
//! with one re-orthogonalization pass; the projection is never formed through
//! an explicit pseudo-inverse.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::matrix::{dot, norm2, ColumnSelection, DenseMatrix, MatrixError};

/// Residuals below `RANK_TOLERANCE_FACTOR * max selected column norm` are
/// treated as exact linear dependence and force the volume to zero.
pub const RANK_TOLERANCE_FACTOR: f64 = 1e-12;

/// Volume of a column set together with the sequential residual norms.
///
/// `log2_volume` is the sum of `log2(residual)` terms and is
/// `f64::NEG_INFINITY` when the volume is zero (it serializes as JSON
/// `null`); `k`-fold products underflow long before their log does.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeResult {
    pub volume: f64,
    pub log2_volume: f64,
    pub residual_norms: Vec<f64>,
}

impl Serialize for VolumeResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("VolumeResult", 3)?;
        s.serialize_field("volume", &self.volume)?;
        let log2: Option<f64> = if self.log2_volume.is_finite() {
            Some(self.log2_volume)
        } else {
            None
        };
        s.serialize_field("log2_volume", &log2)?;
        s.serialize_field("residual_norms", &self.residual_norms)?;
        s.end()
    }
}

impl VolumeResult {
    /// Volume of an empty column set: the empty product.
    pub fn empty() -> Self {
        Self {
            volume: 1.0,
            log2_volume: 0.0,
            residual_norms: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.volume == 0.0
    }
}

/// Volume of the selected columns of `A`, processed in index order.
pub fn volume(a: &DenseMatrix, selection: &ColumnSelection) -> Result<VolumeResult, MatrixError> {
    selection.validate_for(a)?;
    volume_of_columns(a, selection.indices())
}

/// Volume of the listed columns processed in the given order. The volume is
/// order-invariant; the per-step residual norms are not.
pub fn volume_of_columns(a: &DenseMatrix, order: &[usize]) -> Result<VolumeResult, MatrixError> {
    for &j in order {
        if j >= a.cols() {
            return Err(MatrixError::IndexOutOfRange {
                index: j,
                cols: a.cols(),
            });
        }
        if a.column(j).iter().any(|v| !v.is_finite()) {
            let row = a.column(j).iter().position(|v| !v.is_finite()).unwrap();
            return Err(MatrixError::NonFinite { row, col: j });
        }
    }
    if order.is_empty() {
        return Ok(VolumeResult::empty());
    }

    let tau = rank_tolerance(a, order);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(order.len());
    let mut residual_norms = Vec::with_capacity(order.len());
    let mut log2_volume = 0.0;
    let mut zero = false;

    for &j in order {
        let mut v = a.column(j).to_vec();
        orthogonalize(&mut v, &basis);
        let r = norm2(&v);
        residual_norms.push(r);
        if r <= tau {
            zero = true;
            // dependent column: span unchanged, nothing to add to the basis
            continue;
        }
        log2_volume += r.log2();
        for x in &mut v {
            *x /= r;
        }
        basis.push(v);
    }

    if zero {
        return Ok(VolumeResult {
            volume: 0.0,
            log2_volume: f64::NEG_INFINITY,
            residual_norms,
        });
    }
    Ok(VolumeResult {
        volume: residual_norms.iter().product(),
        log2_volume,
        residual_norms,
    })
}

/// Distance from `q` to the span of the columns of `p`:
/// `||q - pi_P(q)||_2`. An empty span gives `||q||_2`.
pub fn projection_distance(q: &[f64], p: &DenseMatrix) -> Result<f64, MatrixError> {
    if q.len() != p.rows() {
        return Err(MatrixError::DimensionMismatch {
            expected: p.rows(),
            got: q.len(),
        });
    }
    let cols: Vec<usize> = (0..p.cols()).collect();
    Ok(distance_to_span(q, p, &cols))
}

/// Distance from `q` to the span of the listed columns of `a`. Listing no
/// columns gives `||q||_2`.
pub fn distance_to_span(q: &[f64], a: &DenseMatrix, columns: &[usize]) -> f64 {
    let basis = orthonormal_basis(a, columns);
    let mut v = q.to_vec();
    orthogonalize(&mut v, &basis);
    norm2(&v)
}

/// Orthonormal basis for the span of the listed columns; dependent columns
/// are dropped at the rank tolerance.
pub(crate) fn orthonormal_basis(a: &DenseMatrix, columns: &[usize]) -> Vec<Vec<f64>> {
    let tau = rank_tolerance(a, columns);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(columns.len());
    for &j in columns {
        let mut v = a.column(j).to_vec();
        orthogonalize(&mut v, &basis);
        let r = norm2(&v);
        if r > tau {
            for x in &mut v {
                *x /= r;
            }
            basis.push(v);
        }
    }
    basis
}

/// MGS sweep against an orthonormal basis, with one re-orthogonalization pass.
pub(crate) fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
}

pub(crate) fn rank_tolerance(a: &DenseMatrix, columns: &[usize]) -> f64 {
    let scale = columns
        .iter()
        .map(|&j| a.column_norm(j))
        .fold(0.0, f64::max);
    RANK_TOLERANCE_FACTOR * scale
}
