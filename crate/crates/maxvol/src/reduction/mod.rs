//! Constructive pipeline from 3SAT(5) formulas to maximum-volume matrix
//! instances.
//!
//! Stages: DIMACS parsing and 3SAT(5) validation, the canonical reduction to
//! bipartite Label Cover with projection constraints, `ell`-fold Cartesian
//! repetition, and the final block-matrix construction where each edge owns
//! an orthogonal row block filled from a binary gadget family.

mod cnf;
mod gadget;
mod instance;
mod label_cover;
mod params;

pub use cnf::{
    find_satisfying_assignment, parse_dimacs, validate_3sat5, CnfFormula, Literal, Sat5Validation,
};
pub use gadget::{binary_dot, build_gadget, complement, HadamardGadget};
pub use instance::{
    build_maxvol_instance, build_with_gadget, labeling_to_selection, BlockEntry, ColumnEntry,
    InstanceSidecar, MaxVolInstance, Side,
};
pub use label_cover::{
    evaluate_labeling, labeling_from_assignment, lift_labeling, repeat, sat_to_labelcover,
    LabelCoverInstance, Labeling, DEFAULT_REPEAT_CELL_CAP,
};
pub use params::{compute_soundness_parameters, SoundnessParameters};

use thiserror::Error;

use crate::matrix::MatrixError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReduceError {
    #[error("DIMACS parse error on line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error("clause ending on line {line} has {got} literals, expected 3")]
    ClauseArity { line: usize, got: usize },
    #[error("clause ending on line {line} repeats variable {var}")]
    RepeatedVariable { line: usize, var: usize },
    #[error("literal on line {line} references variable {var}, but only {num_vars} declared")]
    VariableOutOfRange {
        line: usize,
        var: usize,
        num_vars: usize,
    },
    #[error("formula violates the 3SAT(5) shape: {0}")]
    NotSat5(String),
    #[error("clause {clause} is not satisfied by the assignment")]
    UnsatisfiedClause { clause: usize },
    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),
    #[error("invalid Label Cover instance: {0}")]
    InvalidLabelCover(String),
    #[error("construction size overflow: {0}")]
    SizeOverflow(String),
    #[error("gadget order must satisfy m >= 2, got {m}")]
    GadgetTooSmall { m: usize },
    #[error("alphabet size {sigma_w} exceeds the gadget capacity {capacity} at ell = {ell}")]
    GadgetCapacity {
        sigma_w: usize,
        capacity: usize,
        ell: usize,
    },
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}
