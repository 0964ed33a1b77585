//! Numerical checks for the structural claims behind the solver and
//! reduction machinery.
//!
//! Every check produces a [`CheckReport`] with explicit `lhs`, `rhs`, and
//! the absolute slack used, so a failing run shows the numbers instead of a
//! bare boolean. Checks that assert several conditions at once report the
//! headline inequality in `lhs`/`rhs` and fold the remaining conditions into
//! `pass`, with their values rendered in `context`. Reports are pure
//! functions of their inputs, bit-for-bit reproducible.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, LinalgError};
use crate::matrix::{ColumnSelection, DenseMatrix, MatrixError};
use crate::random::random_matrix;
use crate::reduction::{
    binary_dot, build_with_gadget, labeling_to_selection, HadamardGadget, LabelCoverInstance,
    Labeling, MaxVolInstance, ReduceError, Side,
};
use crate::solvers::{
    exact_select, greedy_select, is_local_mu_maximum, local_search, SolveError,
    DEFAULT_ENUMERATION_CAP,
};
use crate::volume::{distance_to_span, volume, volume_of_columns};

/// Default absolute slack for floating-point inequality checks.
pub const DEFAULT_SLACK: f64 = 1e-9;
/// Slack for quantities that are exact rationals in the constructions.
pub const EXACT_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("brute force too large: {0}")]
    EnumerationCap(String),
    #[error("chosen block is singular")]
    SingularBlock,
    #[error("first k columns are not locally mu-maximal")]
    NotLocallyMaximal,
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// How a report's `lhs` and `rhs` are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Passes when `lhs <= rhs + slack`.
    UpperBound,
    /// Passes when `|lhs - rhs| <= slack`.
    Equality,
}

/// Outcome of one check: `pass` holds exactly when the checked conditions
/// hold within `slack`, with `lhs` and `rhs` the headline comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub kind: CheckKind,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub context: String,
}

impl CheckReport {
    fn leq(name: &str, lhs: f64, rhs: f64, slack: f64, context: String) -> Self {
        Self {
            name: name.to_string(),
            pass: lhs <= rhs + slack,
            kind: CheckKind::UpperBound,
            lhs,
            rhs,
            slack,
            context,
        }
    }

    fn close(name: &str, lhs: f64, rhs: f64, slack: f64, context: String) -> Self {
        Self {
            name: name.to_string(),
            pass: (lhs - rhs).abs() <= slack,
            kind: CheckKind::Equality,
            lhs,
            rhs,
            slack,
            context,
        }
    }

    fn headline_holds(&self, slack: f64) -> bool {
        match self.kind {
            CheckKind::UpperBound => self.lhs <= self.rhs + slack,
            CheckKind::Equality => (self.lhs - self.rhs).abs() <= slack,
        }
    }

    /// Re-evaluates the headline comparison at a different absolute slack.
    /// Auxiliary conditions folded into `pass` keep their original verdict:
    /// a report that failed for a non-headline reason stays failed.
    pub fn pass_with_slack(&self, slack: f64) -> bool {
        let auxiliary_ok = self.pass || !self.headline_holds(self.slack);
        auxiliary_ok && self.headline_holds(slack)
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// Verifies the three gadget conditions in exact integer arithmetic: row
/// weights `2^(m-1)`, and all pairwise dots (plain and complemented)
/// `2^(m-2)`. `lhs` is the largest absolute integer deviation.
///
/// Rows are packed into 64-bit words so the all-pairs sweep is popcounts;
/// [`binary_dot`] cross-checks the packing on a sample of pairs.
pub fn check_gadget(gadget: &HadamardGadget) -> CheckReport {
    let m = gadget.m;
    let expected_weight = 1u64 << (m - 1);
    let expected_dot = 1u64 << (m - 2);
    let dim = gadget.dimension();
    let words = dim.div_ceil(64);
    let pack = |row: &[u8]| -> Vec<u64> {
        let mut out = vec![0u64; words];
        for (bit, &b) in row.iter().enumerate() {
            out[bit / 64] |= (b as u64) << (bit % 64);
        }
        out
    };
    let packed: Vec<Vec<u64>> = gadget.vectors.iter().map(|r| pack(r)).collect();
    let packed_dot = |a: &[u64], b: &[u64]| -> u64 {
        a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as u64).sum()
    };

    let mut max_deviation = 0i64;
    let mut worst = String::new();
    let mut record = |value: u64, expected: u64, what: String| {
        let dev = (value as i64 - expected as i64).abs();
        if dev > max_deviation {
            max_deviation = dev;
            worst = what;
        }
    };
    for (i, row) in packed.iter().enumerate() {
        let weight = packed_dot(row, row);
        record(weight, expected_weight, format!("row {i} weight {weight}"));
    }
    let full_mask: Vec<u64> = (0..words)
        .map(|w| {
            let bits = (dim - w * 64).min(64);
            if bits == 64 {
                u64::MAX
            } else {
                (1u64 << bits) - 1
            }
        })
        .collect();
    for i in 0..packed.len() {
        for j in 0..packed.len() {
            if i == j {
                continue;
            }
            let plain = packed_dot(&packed[i], &packed[j]);
            let complemented: u64 = packed[i]
                .iter()
                .zip(&packed[j])
                .zip(&full_mask)
                .map(|((x, y), mask)| (x & !y & mask).count_ones() as u64)
                .sum();
            record(plain, expected_dot, format!("dot ({i}, {j}) = {plain}"));
            record(
                complemented,
                expected_dot,
                format!("complement dot ({i}, {j}) = {complemented}"),
            );
            if (i + j) % 64 == 1 {
                // Spot-check the packed arithmetic against the byte-level dot.
                debug_assert_eq!(
                    plain,
                    binary_dot(&gadget.vectors[i], &gadget.vectors[j])
                );
            }
        }
    }
    let context = if max_deviation == 0 {
        format!("m={m}, {} rows, all conditions exact", gadget.vectors.len())
    } else {
        format!("m={m}, worst deviation at {worst}")
    };
    CheckReport::leq("gadget", max_deviation as f64, 0.0, 0.0, context)
}

/// For a fully satisfying labeling, the selected columns must be pairwise
/// orthogonal (max |dot| <= 1e-12) with volume 1 within 1e-9.
pub fn check_completeness(
    inst: &MaxVolInstance,
    sigma: &Labeling,
) -> Result<CheckReport, VerifyError> {
    let satisfied = crate::reduction::evaluate_labeling(&inst.source, sigma)?;
    if satisfied < 1.0 {
        return Err(VerifyError::Precondition(format!(
            "labeling satisfies only {satisfied} of the edges"
        )));
    }
    let selection = labeling_to_selection(inst, sigma)?;
    let indices = selection.indices();
    let mut max_dot = 0.0f64;
    for (a, &i) in indices.iter().enumerate() {
        for &j in &indices[a + 1..] {
            max_dot = max_dot.max(inst.matrix.dot_columns(i, j).abs());
        }
    }
    let vol = volume(&inst.matrix, &selection)?.volume;
    let mut report = CheckReport::close(
        "completeness",
        vol,
        1.0,
        DEFAULT_SLACK,
        format!(
            "k={}, max pairwise |dot| = {max_dot:e} (allowed {EXACT_SLACK:e})",
            inst.k
        ),
    );
    report.pass = report.pass && max_dot <= EXACT_SLACK;
    Ok(report)
}

/// The dot product across an unsatisfied edge must be exactly
/// `1 / (2 sqrt(v_degree * w_degree))`.
pub fn check_unsat_edge_dot(
    inst: &MaxVolInstance,
    edge: usize,
    i: usize,
    j: usize,
) -> Result<CheckReport, VerifyError> {
    let lc = &inst.source;
    if edge >= lc.edge_count() {
        return Err(VerifyError::Precondition(format!(
            "edge {edge} out of range"
        )));
    }
    if i >= lc.sigma_v || j >= lc.sigma_w {
        return Err(VerifyError::Precondition(format!(
            "labels ({i}, {j}) out of range"
        )));
    }
    if lc.constraints[edge][i] == j {
        return Err(VerifyError::Precondition(format!(
            "edge {edge} is satisfied by labels ({i}, {j})"
        )));
    }
    let (v, w) = lc.edges[edge];
    let dot = inst
        .matrix
        .dot_columns(inst.column_of(Side::V, v, i), inst.column_of(Side::W, w, j));
    let expected = 1.0 / (2.0 * ((lc.v_degree * lc.w_degree) as f64).sqrt());
    Ok(CheckReport::close(
        "unsat-edge-dot",
        dot,
        expected,
        EXACT_SLACK,
        format!("edge {edge} = ({v}, {w}), labels ({i}, {j})"),
    ))
}

/// Union bound on volumes: `Vol(P u Q) <= Vol(P) * prod d(q, P)`.
pub fn check_union_lemma(
    a: &DenseMatrix,
    p: &ColumnSelection,
    q: &ColumnSelection,
) -> Result<CheckReport, VerifyError> {
    p.validate_for(a)?;
    q.validate_for(a)?;
    if q.indices().iter().any(|&x| p.contains(x)) {
        return Err(VerifyError::Precondition(
            "P and Q must be disjoint".to_string(),
        ));
    }
    let union = ColumnSelection::from_unsorted(
        p.indices().iter().chain(q.indices()).copied().collect(),
    )?;
    let lhs = volume(a, &union)?.volume;
    let vol_p = volume(a, p)?.volume;
    let mut rhs = vol_p;
    for &qi in q.indices() {
        rhs *= distance_to_span(a.column(qi), a, p.indices());
    }
    Ok(CheckReport::leq(
        "union-lemma",
        lhs,
        rhs,
        DEFAULT_SLACK,
        format!("|P|={}, |Q|={}, Vol(P)={vol_p:.6e}", p.k(), q.k()),
    ))
}

/// How a selection distributes over the two vertex sides of an instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionStats {
    /// Columns selected from the V side / W side.
    pub k_v: usize,
    pub k_w: usize,
    /// Selected columns beyond the first one of each vertex.
    pub d_v: usize,
    pub d_w: usize,
    /// Vertices with at least one selected column, ascending.
    pub distinct_v: Vec<usize>,
    pub distinct_w: Vec<usize>,
}

pub fn selection_stats(inst: &MaxVolInstance, s: &ColumnSelection) -> SelectionStats {
    let mut k_v = 0;
    let mut k_w = 0;
    let mut distinct_v = std::collections::BTreeSet::new();
    let mut distinct_w = std::collections::BTreeSet::new();
    for &column in s.indices() {
        let (side, vertex, _) = inst.column_key(column);
        match side {
            Side::V => {
                k_v += 1;
                distinct_v.insert(vertex);
            }
            Side::W => {
                k_w += 1;
                distinct_w.insert(vertex);
            }
        }
    }
    SelectionStats {
        k_v,
        k_w,
        d_v: k_v - distinct_v.len(),
        d_w: k_w - distinct_w.len(),
        distinct_v: distinct_v.into_iter().collect(),
        distinct_w: distinct_w.into_iter().collect(),
    }
}

/// Each side's volume is at most `(sqrt(3)/2)^duplicates`, and the dot
/// product of two columns of the same vertex lies in [1/2, 1].
pub fn check_duplicate_bound(
    inst: &MaxVolInstance,
    s: &ColumnSelection,
) -> Result<CheckReport, VerifyError> {
    s.validate_for(&inst.matrix)?;
    let stats = selection_stats(inst, s);
    let drop = 3.0f64.sqrt() / 2.0;

    let side_columns = |side: Side| -> Vec<usize> {
        s.indices()
            .iter()
            .copied()
            .filter(|&c| inst.column_key(c).0 == side)
            .collect()
    };
    let v_cols = side_columns(Side::V);
    let w_cols = side_columns(Side::W);
    let vol_v = volume_of_columns(&inst.matrix, &v_cols)?.volume;
    let vol_w = volume_of_columns(&inst.matrix, &w_cols)?.volume;
    let bound_v = drop.powi(stats.d_v as i32);
    let bound_w = drop.powi(stats.d_w as i32);

    let mut dots_ok = true;
    let mut worst_dot = String::new();
    for (a, &ci) in s.indices().iter().enumerate() {
        for &cj in &s.indices()[a + 1..] {
            let (side_i, vertex_i, _) = inst.column_key(ci);
            let (side_j, vertex_j, _) = inst.column_key(cj);
            if side_i != side_j || vertex_i != vertex_j {
                continue;
            }
            let dot = inst.matrix.dot_columns(ci, cj);
            if !(0.5 - EXACT_SLACK..=1.0 + EXACT_SLACK).contains(&dot) {
                dots_ok = false;
                worst_dot = format!("; same-vertex dot({ci}, {cj}) = {dot} outside [1/2, 1]");
            }
        }
    }

    let excess = (vol_v - bound_v).max(vol_w - bound_w);
    let mut report = CheckReport::leq(
        "duplicate-bound",
        excess,
        0.0,
        DEFAULT_SLACK,
        format!(
            "d_v={}, d_w={}, Vol_V={vol_v:.6e} <= {bound_v:.6e}, Vol_W={vol_w:.6e} <= {bound_w:.6e}{worst_dot}",
            stats.d_v, stats.d_w
        ),
    );
    report.pass = report.pass && dots_ok;
    Ok(report)
}

/// Greedy reaches at least `1/k!` of the enumerated optimum.
pub fn check_greedy_ratio(a: &DenseMatrix, k: usize, cap: u64) -> Result<CheckReport, VerifyError> {
    let greedy = greedy_select(a, k)?;
    let exact = exact_select(a, k, cap)?;
    let lhs = exact.volume.volume / factorial(k);
    Ok(CheckReport::leq(
        "greedy-ratio",
        lhs,
        greedy.volume.volume,
        EXACT_SLACK,
        format!(
            "Vol(greedy)={:.6e}, Vol(exact)={:.6e}, k={k}",
            greedy.volume.volume, exact.volume.volume
        ),
    ))
}

/// Skeleton-block bound: after permuting the chosen `k x k` block to the
/// top-left corner, the Schur complement satisfies
/// `||A22 - A21 A11^-1 A12||_inf <= mu (k+1) sigma_{k+1}(A)`, where `mu` is
/// brute-forced as the ratio of the best block volume to the chosen one.
pub fn check_gt_bound(
    a: &DenseMatrix,
    k: usize,
    row_block: &[usize],
    col_block: &[usize],
) -> Result<CheckReport, VerifyError> {
    const DET_CAP: u64 = 1_000_000;
    let n = a.rows();
    if a.cols() != n {
        return Err(VerifyError::Precondition("matrix must be square".into()));
    }
    if row_block.len() != k || col_block.len() != k || k == 0 || k >= n {
        return Err(VerifyError::Precondition(format!(
            "need distinct k = {k} rows and columns with 1 <= k < {n}"
        )));
    }
    let combos = crate::combinatorics::binomial(n, k)
        .ok_or_else(|| VerifyError::EnumerationCap("C(n, k) overflows".into()))?;
    if combos.saturating_mul(combos) > DET_CAP {
        return Err(VerifyError::EnumerationCap(format!(
            "{combos}^2 determinants exceed the {DET_CAP} budget"
        )));
    }

    let chosen_det = linalg::abs_det(&linalg::submatrix(a, row_block, col_block))?;
    if chosen_det == 0.0 {
        return Err(VerifyError::SingularBlock);
    }
    // Brute-force max determinant over every k x k block.
    let total = combos;
    let mut max_det = 0.0f64;
    crate::combinatorics::for_each_in_range(n, k, 0, total, |_, rows| {
        crate::combinatorics::for_each_in_range(n, k, 0, total, |_, cols| {
            let d = linalg::abs_det(&linalg::submatrix(a, rows, cols)).expect("square block");
            if d > max_det {
                max_det = d;
            }
        });
    });
    let mu = max_det / chosen_det;

    let rest_rows: Vec<usize> = (0..n).filter(|i| !row_block.contains(i)).collect();
    let rest_cols: Vec<usize> = (0..n).filter(|j| !col_block.contains(j)).collect();
    let a11 = linalg::submatrix(a, row_block, col_block);
    let a12 = linalg::submatrix(a, row_block, &rest_cols);
    let a21 = linalg::submatrix(a, &rest_rows, col_block);
    let a22 = linalg::submatrix(a, &rest_rows, &rest_cols);
    let schur = {
        let correction = linalg::matmul(&linalg::matmul(&a21, &linalg::inverse(&a11)?), &a12);
        let mut out = a22.clone();
        for j in 0..out.cols() {
            for i in 0..out.rows() {
                out.set(i, j, a22.get(i, j) - correction.get(i, j));
            }
        }
        out
    };
    let residual_norm = schur.values().iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let sigmas = linalg::singular_values(a)?;
    let rhs = mu * (k as f64 + 1.0) * sigmas[k];
    Ok(CheckReport::leq(
        "gt-bound",
        residual_norm,
        rhs,
        DEFAULT_SLACK,
        format!(
            "mu={mu:.6}, sigma_{}={:.6e}, rows={row_block:?}, cols={col_block:?}",
            k + 1,
            sigmas[k]
        ),
    ))
}

/// Rank-revealing QR quality of a locally mu-maximal leading block:
/// `sigma_min(R11) >= sigma_k(A) / sqrt(k(n-k)mu^2 + 1)` and
/// `sigma_1(R22) <= sqrt(k(n-k)mu^2 + 1) * sigma_{k+1}(A)`.
///
/// The block is found by local search from the greedy selection.
pub fn check_pan_bounds(a: &DenseMatrix, k: usize, mu: f64) -> Result<CheckReport, VerifyError> {
    let n = a.rows();
    if a.cols() != n {
        return Err(VerifyError::Precondition("matrix must be square".into()));
    }
    if k == 0 || k >= n {
        return Err(VerifyError::Precondition(format!(
            "need 1 <= k < n, got k = {k}, n = {n}"
        )));
    }
    let start = greedy_select(a, k)?.selection;
    let local = local_search(a, k, mu, &start)?.selection;
    if !is_local_mu_maximum(a, &local, mu)? {
        return Err(VerifyError::NotLocallyMaximal);
    }

    let mut permuted: Vec<usize> = local.indices().to_vec();
    permuted.extend((0..n).filter(|j| !local.contains(*j)));
    let r = linalg::qr_r(&a.select_columns(&permuted)?);
    let r11 = linalg::submatrix(&r, &idx(0, k), &idx(0, k));
    let r22 = linalg::submatrix(&r, &idx(k, n), &idx(k, n));
    let sigmas = linalg::singular_values(a)?;
    let factor = ((k * (n - k)) as f64 * mu * mu + 1.0).sqrt();
    let sigma_min_r11 = *linalg::singular_values(&r11)?
        .last()
        .expect("k >= 1 singular values");
    let sigma_max_r22 = linalg::singular_values(&r22)?[0];

    let lower_lhs = sigmas[k - 1] / factor; // must be <= sigma_min(R11)
    let upper_rhs = factor * sigmas[k]; // sigma_1(R22) must be <= this
    let mut report = CheckReport::leq(
        "pan-bounds",
        lower_lhs,
        sigma_min_r11,
        DEFAULT_SLACK,
        format!(
            "selection={:?}, sigma_min(R11)={sigma_min_r11:.6e} >= {lower_lhs:.6e}, \
             sigma_1(R22)={sigma_max_r22:.6e} <= {upper_rhs:.6e}, mu={mu}",
            local.indices()
        ),
    );
    report.pass = report.pass && sigma_max_r22 <= upper_rhs + DEFAULT_SLACK;
    Ok(report)
}

fn idx(start: usize, end: usize) -> Vec<usize> {
    (start..end).collect()
}

/// Exhaustive Label Cover optimum by labeling enumeration.
pub fn brute_force_optimum(
    lc: &LabelCoverInstance,
    cap: u64,
) -> Result<(f64, Labeling), VerifyError> {
    let mut total: u64 = 1;
    for _ in 0..lc.v_count {
        total = total
            .checked_mul(lc.sigma_v as u64)
            .filter(|&t| t <= cap)
            .ok_or_else(|| VerifyError::EnumerationCap("labelings exceed cap".into()))?;
    }
    for _ in 0..lc.w_count {
        total = total
            .checked_mul(lc.sigma_w as u64)
            .filter(|&t| t <= cap)
            .ok_or_else(|| VerifyError::EnumerationCap("labelings exceed cap".into()))?;
    }
    let mut best = (
        -1.0,
        Labeling {
            v_labels: vec![0; lc.v_count],
            w_labels: vec![0; lc.w_count],
        },
    );
    for code in 0..total {
        let mut rest = code;
        let mut v_labels = vec![0usize; lc.v_count];
        for slot in v_labels.iter_mut() {
            *slot = (rest % lc.sigma_v as u64) as usize;
            rest /= lc.sigma_v as u64;
        }
        let mut w_labels = vec![0usize; lc.w_count];
        for slot in w_labels.iter_mut() {
            *slot = (rest % lc.sigma_w as u64) as usize;
            rest /= lc.sigma_w as u64;
        }
        let sigma = Labeling { v_labels, w_labels };
        let value = crate::reduction::evaluate_labeling(lc, &sigma)?;
        if value > best.0 {
            best = (value, sigma);
        }
    }
    Ok(best)
}

/// Builds the matrix instance for a tiny Label Cover instance and confirms
/// that exhaustive selection reaches volume 1 exactly when labeling
/// enumeration satisfies every edge, and stays below `1 - 1e-6` otherwise.
pub fn brute_force_soundness_probe(
    lc: &LabelCoverInstance,
    gadget: &HadamardGadget,
) -> Result<CheckReport, VerifyError> {
    const PROBE_COLUMN_CAP: usize = 24;
    let ell = gadget.m - 1;
    let inst = build_with_gadget(lc, ell, gadget)?;
    if inst.column_count() > PROBE_COLUMN_CAP {
        return Err(VerifyError::EnumerationCap(format!(
            "{} columns exceed the probe cap of {PROBE_COLUMN_CAP}",
            inst.column_count()
        )));
    }
    let (opt, _) = brute_force_optimum(lc, DEFAULT_ENUMERATION_CAP)?;
    let exact = exact_select(&inst.matrix, inst.k, DEFAULT_ENUMERATION_CAP)?;
    let vol = exact.volume.volume;
    let satisfiable = opt == 1.0;
    let pass = if satisfiable {
        (vol - 1.0).abs() <= DEFAULT_SLACK
    } else {
        vol < 1.0 - 1e-6
    };
    Ok(CheckReport {
        name: "soundness-probe".to_string(),
        pass,
        kind: CheckKind::Equality,
        lhs: vol,
        rhs: 1.0,
        slack: if satisfiable { DEFAULT_SLACK } else { 1e-6 },
        context: format!(
            "OPT = {opt} ({}), k = {}, N = {}, best selection {:?}",
            if satisfiable {
                "volume must be 1"
            } else {
                "volume must stay below 1 - 1e-6"
            },
            inst.k,
            inst.column_count(),
            exact.selection.indices()
        ),
    })
}

/// Gadget checks for a range of orders.
pub fn gadget_suite(m_range: std::ops::RangeInclusive<usize>) -> Result<Vec<CheckReport>, VerifyError> {
    m_range
        .map(|m| {
            let gadget = crate::reduction::build_gadget(m)?;
            let mut report = check_gadget(&gadget);
            report.name = format!("gadget-m{m}");
            Ok(report)
        })
        .collect()
}

/// Union-lemma checks over seeded random matrices and disjoint splits.
pub fn union_lemma_suite(
    trials: u64,
    seed: u64,
    rows: usize,
    cols: usize,
) -> Result<Vec<CheckReport>, VerifyError> {
    run_suite(trials, |trial| {
        use rand::Rng;
        let a = random_matrix(rows, cols, seed.wrapping_add(trial));
        let mut rng = crate::random::seeded_rng(seed.wrapping_add(trial) ^ 0x5eed);
        let p_size = rng.random_range(1..=4.min(cols - 1));
        let q_size = rng.random_range(1..=4.min(cols - p_size));
        let mut order: Vec<usize> = (0..cols).collect();
        for i in (1..order.len()).rev() {
            let j = rng.random_range(0..=i);
            order.swap(i, j);
        }
        let p = ColumnSelection::from_unsorted(order[..p_size].to_vec())?;
        let q = ColumnSelection::from_unsorted(order[p_size..p_size + q_size].to_vec())?;
        let mut report = check_union_lemma(&a, &p, &q)?;
        report.context = format!("trial {trial}, {}", report.context);
        Ok(report)
    })
}

/// Greedy-ratio checks over seeded random matrices.
pub fn greedy_ratio_suite(
    trials: u64,
    seed: u64,
    rows: usize,
    cols: usize,
    k: usize,
) -> Result<Vec<CheckReport>, VerifyError> {
    run_suite(trials, |trial| {
        let a = random_matrix(rows, cols, seed.wrapping_add(trial));
        let mut report = check_greedy_ratio(&a, k, DEFAULT_ENUMERATION_CAP)?;
        report.context = format!("trial {trial}, {}", report.context);
        Ok(report)
    })
}

/// Skeleton-bound checks on the exhaustively best block of seeded random
/// square matrices.
pub fn gt_bound_suite(
    trials: u64,
    seed: u64,
    size: usize,
    k: usize,
) -> Result<Vec<CheckReport>, VerifyError> {
    run_suite(trials, |trial| {
        let a = random_matrix(size, size, seed.wrapping_add(trial));
        let (rows, cols) = best_block(&a, k)?;
        let mut report = check_gt_bound(&a, k, &rows, &cols)?;
        report.context = format!("trial {trial}, {}", report.context);
        Ok(report)
    })
}

/// The row and column subsets of the maximum-|det| `k x k` block.
pub fn best_block(a: &DenseMatrix, k: usize) -> Result<(Vec<usize>, Vec<usize>), VerifyError> {
    let n = a.rows();
    let total = crate::combinatorics::binomial(n, k)
        .ok_or_else(|| VerifyError::EnumerationCap("C(n, k) overflows".into()))?;
    let mut best = (-1.0, Vec::new(), Vec::new());
    crate::combinatorics::for_each_in_range(n, k, 0, total, |_, rows| {
        crate::combinatorics::for_each_in_range(n, k, 0, total, |_, cols| {
            let d = linalg::abs_det(&linalg::submatrix(a, rows, cols)).expect("square block");
            if d > best.0 {
                best = (d, rows.to_vec(), cols.to_vec());
            }
        });
    });
    Ok((best.1, best.2))
}

/// RRQR bound checks on seeded random square matrices.
pub fn pan_bound_suite(
    trials: u64,
    seed: u64,
    size: usize,
    k: usize,
    mu: f64,
) -> Result<Vec<CheckReport>, VerifyError> {
    run_suite(trials, |trial| {
        let a = random_matrix(size, size, seed.wrapping_add(trial));
        let mut report = check_pan_bounds(&a, k, mu)?;
        report.context = format!("trial {trial}, {}", report.context);
        Ok(report)
    })
}

/// Soundness probes over the built-in tiny Label Cover instances.
pub fn soundness_probe_suite() -> Result<Vec<CheckReport>, VerifyError> {
    let gadget = crate::reduction::build_gadget(2)?;
    crate::fixtures::tiny_label_covers()
        .iter()
        .map(|(name, lc)| {
            let mut report = brute_force_soundness_probe(lc, &gadget)?;
            report.name = format!("soundness-probe-{name}");
            Ok(report)
        })
        .collect()
}

/// Runs independent per-trial checks, in parallel when enabled; the report
/// order and contents match the sequential run.
fn run_suite<F>(trials: u64, f: F) -> Result<Vec<CheckReport>, VerifyError>
where
    F: Fn(u64) -> Result<CheckReport, VerifyError> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..trials).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..trials).map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::reduction::{
        build_gadget, build_maxvol_instance, find_satisfying_assignment, labeling_from_assignment,
        parse_dimacs, sat_to_labelcover,
    };

    fn fixture_instance() -> (MaxVolInstance, Labeling) {
        let f = parse_dimacs(fixtures::SAT5_N3_DIMACS).unwrap();
        let lc = sat_to_labelcover(&f).unwrap();
        let inst = build_maxvol_instance(&lc, 1).unwrap();
        let a = find_satisfying_assignment(&f).unwrap().unwrap();
        let sigma = labeling_from_assignment(&f, &a).unwrap();
        (inst, sigma)
    }

    #[test]
    fn gadget_checks_pass_exactly() {
        for m in 2..=8 {
            let report = check_gadget(&build_gadget(m).unwrap());
            assert!(report.pass, "m = {m}: {report:?}");
            assert_eq!(report.lhs, 0.0);
        }
    }

    #[test]
    fn corrupted_gadget_fails() {
        let mut gadget = build_gadget(3).unwrap();
        gadget.vectors[2][5] ^= 1;
        assert!(!check_gadget(&gadget).pass);
    }

    #[test]
    fn completeness_on_fixture() {
        let (inst, sigma) = fixture_instance();
        let report = check_completeness(&inst, &sigma).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn completeness_requires_satisfying_labeling() {
        let (inst, mut sigma) = fixture_instance();
        sigma.w_labels[0] ^= 1;
        assert!(matches!(
            check_completeness(&inst, &sigma),
            Err(VerifyError::Precondition(_))
        ));
    }

    #[test]
    fn unsat_edge_dot_value() {
        let (inst, _) = fixture_instance();
        let expected = 1.0 / (2.0 * 15.0f64.sqrt());
        for edge in 0..inst.source.edge_count() {
            for i in 0..7 {
                let j = 1 - inst.source.constraints[edge][i];
                let report = check_unsat_edge_dot(&inst, edge, i, j).unwrap();
                assert!(report.pass, "{report:?}");
                assert!((report.rhs - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn satisfied_edge_rejected() {
        let (inst, _) = fixture_instance();
        let j = inst.source.constraints[0][0];
        assert!(matches!(
            check_unsat_edge_dot(&inst, 0, 0, j),
            Err(VerifyError::Precondition(_))
        ));
    }

    #[test]
    fn union_lemma_orthogonal_equality() {
        let a = DenseMatrix::identity(4);
        let p = ColumnSelection::new(vec![0, 1]).unwrap();
        let q = ColumnSelection::new(vec![2, 3]).unwrap();
        let report = check_union_lemma(&a, &p, &q).unwrap();
        assert!(report.pass);
        assert!((report.lhs - report.rhs).abs() < 1e-12);
    }

    #[test]
    fn union_lemma_dependent_q() {
        // q inside span(P): left side collapses to zero.
        let a = DenseMatrix::from_columns(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.6, 0.8, 0.0],
        ])
        .unwrap();
        let p = ColumnSelection::new(vec![0, 1]).unwrap();
        let q = ColumnSelection::new(vec![2]).unwrap();
        let report = check_union_lemma(&a, &p, &q).unwrap();
        assert!(report.pass);
        assert_eq!(report.lhs, 0.0);
    }

    #[test]
    fn union_lemma_overlap_rejected() {
        let a = DenseMatrix::identity(3);
        let p = ColumnSelection::new(vec![0, 1]).unwrap();
        let q = ColumnSelection::new(vec![1, 2]).unwrap();
        assert!(matches!(
            check_union_lemma(&a, &p, &q),
            Err(VerifyError::Precondition(_))
        ));
    }

    #[test]
    fn stats_on_clean_selection() {
        let (inst, sigma) = fixture_instance();
        let sel = labeling_to_selection(&inst, &sigma).unwrap();
        let stats = selection_stats(&inst, &sel);
        assert_eq!(stats.k_v + stats.k_w, inst.k);
        assert_eq!(stats.d_v, 0);
        assert_eq!(stats.d_w, 0);
        assert_eq!(stats.distinct_v.len(), 5);
        assert_eq!(stats.distinct_w.len(), 3);
    }

    #[test]
    fn stats_count_duplicates() {
        let (inst, _) = fixture_instance();
        let sel = ColumnSelection::new(vec![
            inst.column_of(Side::V, 0, 0),
            inst.column_of(Side::V, 0, 3),
            inst.column_of(Side::W, 1, 0),
        ])
        .unwrap();
        let stats = selection_stats(&inst, &sel);
        assert_eq!(stats.k_v, 2);
        assert_eq!(stats.d_v, 1);
        assert_eq!(stats.d_w, 0);
    }

    #[test]
    fn duplicate_bound_with_one_duplicate() {
        let (inst, _) = fixture_instance();
        let sel = ColumnSelection::new(vec![
            inst.column_of(Side::V, 0, 0),
            inst.column_of(Side::V, 0, 3),
        ])
        .unwrap();
        let report = check_duplicate_bound(&inst, &sel).unwrap();
        assert!(report.pass, "{report:?}");
        let vol = volume(&inst.matrix, &sel).unwrap().volume;
        assert!(vol <= 3.0f64.sqrt() / 2.0 + 1e-9);
    }

    #[test]
    fn greedy_ratio_on_examples() {
        let identity = DenseMatrix::identity(4);
        let report = check_greedy_ratio(&identity, 2, 1000).unwrap();
        assert!(report.pass);
        let a =
            DenseMatrix::from_columns(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![0.8, 0.6]]).unwrap();
        let report = check_greedy_ratio(&a, 2, 1000).unwrap();
        assert!(report.pass);
        assert!((report.rhs - 1.0).abs() < 1e-12, "greedy = exact = 1");
    }

    #[test]
    fn gt_bound_rank_k_diagonal_zero_residual() {
        // diag(4, 3, 0, 0) with the top block: the Schur complement vanishes
        // and the bound is tight at 0 = mu * 3 * sigma_3.
        let mut a = DenseMatrix::zeros(4, 4);
        a.set(0, 0, 4.0);
        a.set(1, 1, 3.0);
        let report = check_gt_bound(&a, 2, &[0, 1], &[0, 1]).unwrap();
        assert!(report.pass);
        assert!(report.lhs.abs() < 1e-12, "Schur residual {}", report.lhs);
        assert!(report.rhs.abs() < 1e-9, "bound {}", report.rhs);
    }

    #[test]
    fn gt_bound_full_diagonal() {
        let mut a = DenseMatrix::zeros(4, 4);
        for i in 0..4 {
            a.set(i, i, (4 - i) as f64);
        }
        // Schur complement of the top block is diag(2, 1); the bound
        // mu (k+1) sigma_3 = 6 still dominates.
        let report = check_gt_bound(&a, 2, &[0, 1], &[0, 1]).unwrap();
        assert!(report.pass);
        assert!((report.lhs - 2.0).abs() < 1e-12);
        assert!((report.rhs - 6.0).abs() < 1e-9);
    }

    #[test]
    fn gt_bound_bad_block_still_holds() {
        let a = random_matrix(4, 4, 77);
        // Deliberately poor block: mu scales the bound accordingly.
        let report = check_gt_bound(&a, 2, &[2, 3], &[0, 1]).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn gt_bound_singular_block_rejected() {
        let mut a = DenseMatrix::zeros(4, 4);
        for i in 0..4 {
            a.set(i, i, 1.0);
        }
        a.set(0, 0, 0.0);
        a.set(1, 1, 0.0);
        assert!(matches!(
            check_gt_bound(&a, 2, &[0, 1], &[0, 1]),
            Err(VerifyError::SingularBlock)
        ));
    }

    #[test]
    fn pan_bounds_identity_prefix() {
        let report = check_pan_bounds(&DenseMatrix::identity(5), 2, 1.0).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn probe_distinguishes_satisfiable_instances() {
        let gadget = build_gadget(2).unwrap();
        for (name, lc) in fixtures::tiny_label_covers() {
            let report = brute_force_soundness_probe(&lc, &gadget).unwrap();
            assert!(report.pass, "{name}: {report:?}");
            let (opt, _) = brute_force_optimum(&lc, 1_000_000).unwrap();
            if opt == 1.0 {
                assert!((report.lhs - 1.0).abs() <= 1e-9, "{name}");
            } else {
                assert!(report.lhs < 1.0 - 1e-6, "{name}");
            }
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let a = union_lemma_suite(5, 9, 6, 6).unwrap();
        let b = union_lemma_suite(5, 9, 6, 6).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|r| r.pass));
    }

    #[test]
    fn slack_override_reevaluates_headline() {
        let a = DenseMatrix::identity(4);
        let p = ColumnSelection::new(vec![0, 1]).unwrap();
        let q = ColumnSelection::new(vec![2, 3]).unwrap();
        let report = check_union_lemma(&a, &p, &q).unwrap();
        assert!(report.pass);
        assert!(report.pass_with_slack(1e-3));
        // Equality holds here, so any negative slack must fail it.
        assert!(!report.pass_with_slack(-1.0));
        // A report failed by an auxiliary condition stays failed.
        let mut gadget = build_gadget(2).unwrap();
        gadget.vectors[0][0] ^= 1;
        let broken = check_gadget(&gadget);
        assert!(!broken.pass);
        assert!(!broken.pass_with_slack(100.0) || broken.headline_holds(100.0));
    }
}
