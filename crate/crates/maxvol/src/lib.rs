//! Maximum-volume column subset selection.
//!
//! Given a real matrix, the volume of `k` selected columns is the product of
//! sequential orthogonal-projection residual norms (equivalently
//! `sqrt(det(G^T G))` of the selected submatrix). This crate provides:
//!
//! - [`volume`]: volumes, span distances, and singular values;
//! - [`solvers`]: greedy selection, exhaustive enumeration, single-swap
//!   local search, and exact volume sampling;
//! - [`reduction`]: a constructive pipeline that turns 3SAT(5) formulas into
//!   Label Cover instances, amplifies them by repetition, and emits matrix
//!   instances whose maximum volume encodes the constraint optimum;
//! - [`verifier`]: numerical checks for the structural identities and
//!   bounds those constructions are expected to satisfy.
//!
//! With the default `parallel` feature the enumeration solver and instance
//! builder spread work over a rayon pool; results are bit-identical to the
//! sequential fallback (`--no-default-features`).

pub mod combinatorics;
pub mod fixtures;
pub mod linalg;
pub mod matrix;
pub mod random;
pub mod reduction;
pub mod solvers;
pub mod verifier;
pub mod volume;

pub use linalg::{singular_values, LinalgError};
pub use matrix::{ColumnSelection, DenseMatrix, MatrixError};
pub use solvers::{
    exact_select, greedy_select, is_local_mu_maximum, local_search, sample_subset,
    volume_sampling_distribution, SolveError, SolveReport, Strategy, VolumeDistribution,
    DEFAULT_ENUMERATION_CAP,
};
pub use volume::{projection_distance, volume, VolumeResult};
