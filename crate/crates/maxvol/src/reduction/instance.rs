//! The matrix instance built from a repeated Label Cover instance.
//!
//! Every edge owns an orthogonal block of `2^(ell+1)` rows. The column for a
//! V-vertex/label pair places the complemented gadget row selected by the
//! edge projection in each incident block; a W-side column places the gadget
//! row for its label. Blocks are scaled so every column has unit norm, which
//! makes a selection of one column per vertex orthogonal exactly when the
//! corresponding labeling satisfies every edge.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use serde::{Deserialize, Serialize};

use super::gadget::{build_gadget, complement, HadamardGadget};
use super::label_cover::{LabelCoverInstance, Labeling};
use super::ReduceError;
use crate::matrix::{ColumnSelection, DenseMatrix};

/// Which bipartition side a column belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    V,
    W,
}

/// A dense matrix whose columns are indexed by (side, vertex, label) and
/// whose rows are indexed by (edge, block offset).
#[derive(Debug, Clone, PartialEq)]
pub struct MaxVolInstance {
    pub matrix: DenseMatrix,
    /// Target selection size: one column per vertex.
    pub k: usize,
    /// `k / N`.
    pub delta: f64,
    pub ell: usize,
    /// Rows per edge block: `2^(ell+1)`.
    pub block_dim: usize,
    pub source: LabelCoverInstance,
}

impl MaxVolInstance {
    pub fn column_count(&self) -> usize {
        self.matrix.cols()
    }

    /// Column index of a (side, vertex, label) pair. V-side columns come
    /// first, grouped by vertex; W-side columns follow.
    pub fn column_of(&self, side: Side, vertex: usize, label: usize) -> usize {
        match side {
            Side::V => vertex * self.source.sigma_v + label,
            Side::W => {
                self.source.v_count * self.source.sigma_v
                    + vertex * self.source.sigma_w
                    + label
            }
        }
    }

    /// Inverse of [`MaxVolInstance::column_of`].
    pub fn column_key(&self, column: usize) -> (Side, usize, usize) {
        let v_columns = self.source.v_count * self.source.sigma_v;
        if column < v_columns {
            (
                Side::V,
                column / self.source.sigma_v,
                column % self.source.sigma_v,
            )
        } else {
            let offset = column - v_columns;
            (
                Side::W,
                offset / self.source.sigma_w,
                offset % self.source.sigma_w,
            )
        }
    }

    /// Row range owned by an edge.
    pub fn block_rows(&self, edge: usize) -> std::ops::Range<usize> {
        edge * self.block_dim..(edge + 1) * self.block_dim
    }

    pub fn sidecar(&self) -> InstanceSidecar {
        let columns = (0..self.column_count())
            .map(|column| {
                let (side, vertex, label) = self.column_key(column);
                ColumnEntry {
                    side,
                    vertex,
                    label,
                    column,
                }
            })
            .collect();
        let blocks = (0..self.source.edge_count())
            .map(|edge| {
                let rows = self.block_rows(edge);
                BlockEntry {
                    edge,
                    row_start: rows.start,
                    row_len: self.block_dim,
                }
            })
            .collect();
        InstanceSidecar {
            k: self.k,
            ell: self.ell,
            delta: self.delta,
            columns,
            blocks,
        }
    }
}

/// JSON sidecar describing the column and block index maps of an exported
/// instance matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSidecar {
    pub k: usize,
    pub ell: usize,
    pub delta: f64,
    pub columns: Vec<ColumnEntry>,
    pub blocks: Vec<BlockEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnEntry {
    pub side: Side,
    pub vertex: usize,
    pub label: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockEntry {
    pub edge: usize,
    pub row_start: usize,
    pub row_len: usize,
}

/// Builds the matrix instance for a biregular Label Cover instance, using
/// the order-`2^(ell+1)` gadget. Requires `sigma_w <= 2^ell` so that the
/// first `sigma_w` gadget rows (in Sylvester order) can serve as W labels.
pub fn build_maxvol_instance(
    lc: &LabelCoverInstance,
    ell: usize,
) -> Result<MaxVolInstance, ReduceError> {
    if ell == 0 {
        return Err(ReduceError::BadParameters("ell must be >= 1".into()));
    }
    let capacity = 1usize << ell;
    if lc.sigma_w > capacity {
        return Err(ReduceError::GadgetCapacity {
            sigma_w: lc.sigma_w,
            capacity,
            ell,
        });
    }
    let gadget = build_gadget(ell + 1)?;
    build_with_gadget(lc, ell, &gadget)
}

/// Instance construction with an explicit gadget (`gadget.m` must equal
/// `ell + 1`).
pub fn build_with_gadget(
    lc: &LabelCoverInstance,
    ell: usize,
    gadget: &HadamardGadget,
) -> Result<MaxVolInstance, ReduceError> {
    if gadget.m != ell + 1 {
        return Err(ReduceError::BadParameters(format!(
            "gadget order m = {} does not match ell + 1 = {}",
            gadget.m,
            ell + 1
        )));
    }
    if lc.sigma_w > gadget.row_count() {
        return Err(ReduceError::GadgetCapacity {
            sigma_w: lc.sigma_w,
            capacity: gadget.row_count(),
            ell,
        });
    }
    let block_dim = gadget.dimension();
    let rows = lc
        .edge_count()
        .checked_mul(block_dim)
        .ok_or_else(|| ReduceError::SizeOverflow("row count overflows".into()))?;
    let v_columns = lc.v_count * lc.sigma_v;
    let cols = v_columns + lc.w_count * lc.sigma_w;
    rows.checked_mul(cols)
        .filter(|&entries| entries <= (1usize << 33))
        .ok_or_else(|| ReduceError::SizeOverflow(format!("{rows} x {cols} matrix")))?;

    // Unit-norm gadget rows and complements, shared across columns.
    let unit_rows: Vec<Vec<f64>> = gadget
        .vectors
        .iter()
        .take(lc.sigma_w)
        .map(|r| r.iter().map(|&b| b as f64 / gadget.norm_scale).collect())
        .collect();
    let unit_complements: Vec<Vec<f64>> = gadget
        .vectors
        .iter()
        .take(lc.sigma_w)
        .map(|r| {
            complement(r)
                .iter()
                .map(|&b| b as f64 / gadget.norm_scale)
                .collect()
        })
        .collect();

    let v_adjacency = lc.v_adjacency();
    let w_adjacency = lc.w_adjacency();
    let v_scale = 1.0 / (lc.v_degree as f64).sqrt();
    let w_scale = 1.0 / (lc.w_degree as f64).sqrt();

    let mut matrix = DenseMatrix::zeros(rows, cols);
    let fill_column = |column: usize, data: &mut [f64]| {
        if column < v_columns {
            let vertex = column / lc.sigma_v;
            let label = column % lc.sigma_v;
            for &edge in &v_adjacency[vertex] {
                let projected = lc.constraints[edge][label];
                let block = &unit_complements[projected];
                let start = edge * block_dim;
                for (offset, &value) in block.iter().enumerate() {
                    data[start + offset] = value * v_scale;
                }
            }
        } else {
            let offset = column - v_columns;
            let vertex = offset / lc.sigma_w;
            let label = offset % lc.sigma_w;
            for &edge in &w_adjacency[vertex] {
                let block = &unit_rows[label];
                let start = edge * block_dim;
                for (row, &value) in block.iter().enumerate() {
                    data[start + row] = value * w_scale;
                }
            }
        }
    };

    // Columns are disjoint slices, so they can be filled independently; the
    // result does not depend on the schedule.
    #[cfg(feature = "parallel")]
    matrix
        .columns_mut()
        .collect::<Vec<_>>()
        .par_iter_mut()
        .enumerate()
        .for_each(|(column, data)| fill_column(column, data));
    #[cfg(not(feature = "parallel"))]
    for (column, data) in matrix.columns_mut().enumerate() {
        fill_column(column, data);
    }

    let k = lc.v_count + lc.w_count;
    Ok(MaxVolInstance {
        delta: k as f64 / cols as f64,
        matrix,
        k,
        ell,
        block_dim,
        source: lc.clone(),
    })
}

/// The selection containing the column of every vertex under its label.
pub fn labeling_to_selection(
    inst: &MaxVolInstance,
    sigma: &Labeling,
) -> Result<ColumnSelection, ReduceError> {
    sigma.validate_for(&inst.source)?;
    let mut indices = Vec::with_capacity(inst.k);
    for (v, &label) in sigma.v_labels.iter().enumerate() {
        indices.push(inst.column_of(Side::V, v, label));
    }
    for (w, &label) in sigma.w_labels.iter().enumerate() {
        indices.push(inst.column_of(Side::W, w, label));
    }
    ColumnSelection::new(indices).map_err(ReduceError::Matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::reduction::cnf::{find_satisfying_assignment, parse_dimacs};
    use crate::reduction::label_cover::{labeling_from_assignment, sat_to_labelcover};

    fn fixture_instance() -> MaxVolInstance {
        let f = parse_dimacs(fixtures::SAT5_N3_DIMACS).unwrap();
        let lc = sat_to_labelcover(&f).unwrap();
        build_maxvol_instance(&lc, 1).unwrap()
    }

    #[test]
    fn fixture_dimensions() {
        let inst = fixture_instance();
        assert_eq!(inst.matrix.rows(), 60);
        assert_eq!(inst.matrix.cols(), 41);
        assert_eq!(inst.k, 8);
        assert!((inst.delta - 8.0 / 41.0).abs() < 1e-15);
        assert_eq!(inst.block_dim, 4);
    }

    #[test]
    fn all_columns_unit_norm() {
        let inst = fixture_instance();
        for j in 0..inst.matrix.cols() {
            assert!(
                (inst.matrix.column_norm(j) - 1.0).abs() < 1e-12,
                "column {j}"
            );
        }
    }

    #[test]
    fn v_columns_touch_only_incident_blocks() {
        let inst = fixture_instance();
        let adjacency = inst.source.v_adjacency();
        for v in 0..inst.source.v_count {
            for label in 0..inst.source.sigma_v {
                let col = inst.matrix.column(inst.column_of(Side::V, v, label));
                for edge in 0..inst.source.edge_count() {
                    let nonzero = inst.block_rows(edge).any(|r| col[r] != 0.0);
                    assert_eq!(nonzero, adjacency[v].contains(&edge));
                }
            }
        }
    }

    #[test]
    fn distinct_vertices_same_side_are_orthogonal() {
        let inst = fixture_instance();
        let c1 = inst.column_of(Side::V, 0, 3);
        let c2 = inst.column_of(Side::V, 1, 5);
        assert_eq!(inst.matrix.dot_columns(c1, c2), 0.0);
        let c3 = inst.column_of(Side::W, 0, 1);
        let c4 = inst.column_of(Side::W, 2, 0);
        assert_eq!(inst.matrix.dot_columns(c3, c4), 0.0);
    }

    #[test]
    fn satisfied_edge_gives_orthogonal_pair() {
        let f = parse_dimacs(fixtures::SAT5_N3_DIMACS).unwrap();
        let lc = sat_to_labelcover(&f).unwrap();
        let inst = build_maxvol_instance(&lc, 1).unwrap();
        let a = find_satisfying_assignment(&f).unwrap().unwrap();
        let sigma = labeling_from_assignment(&f, &a).unwrap();
        let (v, w) = lc.edges[0];
        let cv = inst.column_of(Side::V, v, sigma.v_labels[v]);
        let cw = inst.column_of(Side::W, w, sigma.w_labels[w]);
        assert!(inst.matrix.dot_columns(cv, cw).abs() < 1e-15);
    }

    #[test]
    fn column_key_round_trip() {
        let inst = fixture_instance();
        for column in 0..inst.column_count() {
            let (side, vertex, label) = inst.column_key(column);
            assert_eq!(inst.column_of(side, vertex, label), column);
        }
    }

    #[test]
    fn selection_has_one_column_per_vertex() {
        let f = parse_dimacs(fixtures::SAT5_N3_DIMACS).unwrap();
        let lc = sat_to_labelcover(&f).unwrap();
        let inst = build_maxvol_instance(&lc, 1).unwrap();
        let a = find_satisfying_assignment(&f).unwrap().unwrap();
        let sigma = labeling_from_assignment(&f, &a).unwrap();
        let sel = labeling_to_selection(&inst, &sigma).unwrap();
        assert_eq!(sel.k(), inst.k);
    }

    #[test]
    fn pipeline_is_deterministic() {
        let a = fixture_instance();
        let b = fixture_instance();
        assert_eq!(a.matrix, b.matrix);
    }

    #[test]
    fn sigma_w_capacity_enforced() {
        let lc = LabelCoverInstance::new(
            1,
            1,
            3,
            3,
            vec![(0, 0)],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        assert!(matches!(
            build_maxvol_instance(&lc, 1),
            Err(ReduceError::GadgetCapacity { sigma_w: 3, .. })
        ));
        assert!(build_maxvol_instance(&lc, 2).is_ok());
    }

    #[test]
    fn sidecar_is_complete() {
        let inst = fixture_instance();
        let sidecar = inst.sidecar();
        assert_eq!(sidecar.columns.len(), 41);
        assert_eq!(sidecar.blocks.len(), 15);
        assert_eq!(sidecar.k, 8);
        assert_eq!(sidecar.blocks[14].row_start, 56);
        assert_eq!(sidecar.blocks[14].row_len, 4);
        let json = serde_json::to_string(&sidecar).unwrap();
        let parsed: InstanceSidecar = serde_json::from_str(&json).unwrap();
        assert_eq!(sidecar, parsed);
    }
}
