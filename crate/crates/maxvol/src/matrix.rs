//! Dense column-major matrices and column selections.
//!
//! The text interchange format is one header line `m n` followed by `m`
//! rows of `n` space-separated reals. Values are written with Rust's
//! shortest round-trip formatting, so write → parse is bit-exact.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyDimensions { rows: usize, cols: usize },
    #[error("value buffer length {len} does not match {rows}x{cols}")]
    BadLength { rows: usize, cols: usize, len: usize },
    #[error("non-finite entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("column index {index} out of range for {cols} columns")]
    IndexOutOfRange { index: usize, cols: usize },
    #[error("vector length {got} does not match row count {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("selection indices must be non-empty")]
    EmptySelection,
    #[error("selection indices must be strictly increasing (violation at position {position})")]
    NotStrictlyIncreasing { position: usize },
    #[error("matrix parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A real `rows x cols` matrix stored column-major; column `j` is the
/// contiguous slice `values[j*rows .. (j+1)*rows]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    /// Builds a matrix from column-major values, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyDimensions { rows, cols });
        }
        if values.len() != rows * cols {
            return Err(MatrixError::BadLength {
                rows,
                cols,
                len: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(MatrixError::NonFinite {
                row: pos % rows,
                col: pos / rows,
            });
        }
        Ok(Self { rows, cols, values })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "dimensions must be positive");
        Self {
            rows,
            cols,
            values: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self, MatrixError> {
        if columns.is_empty() {
            return Err(MatrixError::EmptyDimensions { rows: 0, cols: 0 });
        }
        let rows = columns[0].len();
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(MatrixError::DimensionMismatch {
                    expected: rows,
                    got: c.len(),
                });
            }
            let _ = j;
        }
        let mut values = Vec::with_capacity(rows * columns.len());
        for c in columns {
            values.extend_from_slice(c);
        }
        Self::new(rows, columns.len(), values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[col * self.rows + row]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.values[col * self.rows + row] = value;
    }

    #[inline]
    pub fn column(&self, col: usize) -> &[f64] {
        &self.values[col * self.rows..(col + 1) * self.rows]
    }

    pub fn column_mut(&mut self, col: usize) -> &mut [f64] {
        &mut self.values[col * self.rows..(col + 1) * self.rows]
    }

    /// Mutable per-column chunks, for filling disjoint columns independently.
    pub fn columns_mut(&mut self) -> std::slice::ChunksMut<'_, f64> {
        self.values.chunks_mut(self.rows)
    }

    pub fn column_norm(&self, col: usize) -> f64 {
        norm2(self.column(col))
    }

    pub fn max_column_norm(&self) -> f64 {
        (0..self.cols)
            .map(|j| self.column_norm(j))
            .fold(0.0, f64::max)
    }

    pub fn dot_columns(&self, a: usize, b: usize) -> f64 {
        dot(self.column(a), self.column(b))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// New matrix consisting of the named columns, in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> Result<Self, MatrixError> {
        let mut values = Vec::with_capacity(self.rows * indices.len());
        for &j in indices {
            if j >= self.cols {
                return Err(MatrixError::IndexOutOfRange {
                    index: j,
                    cols: self.cols,
                });
            }
            values.extend_from_slice(self.column(j));
        }
        Self::new(self.rows, indices.len(), values)
    }

    /// Serializes to the text format: `m n` header then row lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{} {}\n", self.rows, self.cols));
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    out.push(' ');
                }
                out.push_str(&format!("{}", self.get(i, j)));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text format produced by [`DenseMatrix::to_text`].
    pub fn parse_text(text: &str) -> Result<Self, MatrixError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(MatrixError::Parse {
            line: 1,
            message: "empty input".into(),
        })?;
        let mut parts = header.split_whitespace();
        let rows: usize = parse_field(parts.next(), 1, "row count")?;
        let cols: usize = parse_field(parts.next(), 1, "column count")?;
        if parts.next().is_some() {
            return Err(MatrixError::Parse {
                line: 1,
                message: "header must be exactly `m n`".into(),
            });
        }
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyDimensions { rows, cols });
        }
        let mut m = Self::zeros(rows, cols);
        let mut row = 0;
        for (lineno, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            if row >= rows {
                return Err(MatrixError::Parse {
                    line: lineno + 1,
                    message: format!("more than {rows} data rows"),
                });
            }
            let mut col = 0;
            for tok in line.split_whitespace() {
                if col >= cols {
                    return Err(MatrixError::Parse {
                        line: lineno + 1,
                        message: format!("more than {cols} entries in row"),
                    });
                }
                let v: f64 = tok.parse().map_err(|e| MatrixError::Parse {
                    line: lineno + 1,
                    message: format!("bad real `{tok}`: {e}"),
                })?;
                if !v.is_finite() {
                    return Err(MatrixError::NonFinite { row, col });
                }
                m.set(row, col, v);
                col += 1;
            }
            if col != cols {
                return Err(MatrixError::Parse {
                    line: lineno + 1,
                    message: format!("expected {cols} entries, got {col}"),
                });
            }
            row += 1;
        }
        if row != rows {
            return Err(MatrixError::Parse {
                line: 0,
                message: format!("expected {rows} data rows, got {row}"),
            });
        }
        Ok(m)
    }
}

fn parse_field(tok: Option<&str>, line: usize, what: &str) -> Result<usize, MatrixError> {
    let tok = tok.ok_or_else(|| MatrixError::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    tok.parse().map_err(|e| MatrixError::Parse {
        line,
        message: format!("bad {what} `{tok}`: {e}"),
    })
}

/// An ordered set of `k` column indices, stored strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ColumnSelection {
    indices: Vec<usize>,
}

impl ColumnSelection {
    /// Requires a non-empty, strictly increasing index list.
    pub fn new(indices: Vec<usize>) -> Result<Self, MatrixError> {
        if indices.is_empty() {
            return Err(MatrixError::EmptySelection);
        }
        for i in 1..indices.len() {
            if indices[i] <= indices[i - 1] {
                return Err(MatrixError::NotStrictlyIncreasing { position: i });
            }
        }
        Ok(Self { indices })
    }

    /// Sorts the given indices; duplicates are rejected.
    pub fn from_unsorted(mut indices: Vec<usize>) -> Result<Self, MatrixError> {
        indices.sort_unstable();
        Self::new(indices)
    }

    pub fn k(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    pub fn validate_for(&self, matrix: &DenseMatrix) -> Result<(), MatrixError> {
        let last = *self.indices.last().expect("selection is non-empty");
        if last >= matrix.cols() {
            return Err(MatrixError::IndexOutOfRange {
                index: last,
                cols: matrix.cols(),
            });
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
