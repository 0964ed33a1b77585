//! Subset-selection strategies for maximum volume: greedy, exhaustive
//! enumeration, single-swap local search, and exact volume sampling.
//!
//! Volumes are compared in log2 space so that products over large `k` do not
//! underflow. Every strategy is deterministic: ties are broken by column
//! index, and the enumeration solvers reduce partial results in a fixed
//! order even when the subset range is scanned in parallel.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::combinatorics::{binomial, for_each_in_range};
use crate::matrix::{dot, norm2, ColumnSelection, DenseMatrix, MatrixError};
use crate::volume::{volume, VolumeResult, RANK_TOLERANCE_FACTOR};

/// Default ceiling on `C(n, k)` for the enumeration-based solvers.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Absolute slack used when testing local mu-maximality.
pub const LOCAL_MAX_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("k must satisfy 1 <= k <= {cols}, got {k}")]
    InvalidK { k: usize, cols: usize },
    #[error("matrix rank {achieved} is below the requested k = {requested}")]
    RankDeficient { achieved: usize, requested: usize },
    #[error("C({n}, {k}) exceeds the enumeration cap of {cap} subsets")]
    CapExceeded { n: usize, k: usize, cap: u64 },
    #[error("local search requires a start selection with nonzero volume")]
    ZeroVolumeStart,
    #[error("mu must be >= 1, got {mu}")]
    MuBelowOne { mu: f64 },
    #[error("start selection has {got} columns but k = {expected}")]
    SelectionSize { expected: usize, got: usize },
    #[error("every k-subset has zero volume (rank below k)")]
    AllVolumesZero,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Greedy,
    Exact,
    Local,
}

/// Outcome of a solver run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub strategy: Strategy,
    /// Selected columns, stored ascending.
    pub selection: ColumnSelection,
    /// Order in which columns were committed (greedy pick order; ascending
    /// for the other strategies).
    pub pick_order: Vec<usize>,
    pub volume: VolumeResult,
    /// Picks for greedy, subsets examined for exact, applied swaps for local.
    #[serde(rename = "swaps_or_steps")]
    pub steps: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
}

fn check_k(a: &DenseMatrix, k: usize) -> Result<(), SolveError> {
    if k == 0 || k > a.cols() {
        return Err(SolveError::InvalidK { k, cols: a.cols() });
    }
    Ok(())
}

/// Greedy maximum-volume selection: repeatedly take the column with the
/// largest residual norm, then remove its normalized projection from every
/// remaining column. Residual ties go to the lowest column index.
pub fn greedy_select(a: &DenseMatrix, k: usize) -> Result<SolveReport, SolveError> {
    check_k(a, k)?;
    let tau = RANK_TOLERANCE_FACTOR * a.max_column_norm();
    let mut work: Vec<Vec<f64>> = (0..a.cols()).map(|j| a.column(j).to_vec()).collect();
    let mut chosen = vec![false; a.cols()];
    let mut pick_order = Vec::with_capacity(k);
    let mut residual_norms = Vec::with_capacity(k);
    let mut log2_volume = 0.0;

    for step in 0..k {
        let mut best = (-1.0, usize::MAX);
        for (j, col) in work.iter().enumerate() {
            if chosen[j] {
                continue;
            }
            let n = norm2(col);
            if n > best.0 {
                best = (n, j);
            }
        }
        let (residual, pick) = best;
        if residual <= tau {
            return Err(SolveError::RankDeficient {
                achieved: step,
                requested: k,
            });
        }
        chosen[pick] = true;
        pick_order.push(pick);
        residual_norms.push(residual);
        log2_volume += residual.log2();

        let q: Vec<f64> = work[pick].iter().map(|x| x / residual).collect();
        for (j, col) in work.iter_mut().enumerate() {
            if chosen[j] {
                continue;
            }
            let c = dot(col, &q);
            for (x, y) in col.iter_mut().zip(&q) {
                *x -= c * y;
            }
        }
    }

    let selection = ColumnSelection::from_unsorted(pick_order.clone())?;
    Ok(SolveReport {
        strategy: Strategy::Greedy,
        selection,
        pick_order,
        volume: VolumeResult {
            volume: residual_norms.iter().product(),
            log2_volume,
            residual_norms,
        },
        steps: k as u64,
        mu: None,
    })
}

/// Scratch state for streaming log2-volume evaluation of subsets.
struct SubsetEval<'a> {
    a: &'a DenseMatrix,
    column_norms: Vec<f64>,
    basis: Vec<f64>,
    v: Vec<f64>,
}

impl<'a> SubsetEval<'a> {
    fn new(a: &'a DenseMatrix, k: usize) -> Self {
        Self {
            a,
            column_norms: (0..a.cols()).map(|j| a.column_norm(j)).collect(),
            basis: vec![0.0; a.rows() * k],
            v: vec![0.0; a.rows()],
        }
    }

    /// log2 volume of the subset, `NEG_INFINITY` if rank-deficient. Matches
    /// `volume::volume` bit-for-bit on the nonzero path (same MGS sweep with
    /// one re-orthogonalization pass and the same rank tolerance).
    fn log2_volume(&mut self, combo: &[usize]) -> f64 {
        let m = self.a.rows();
        let tau = RANK_TOLERANCE_FACTOR
            * combo
                .iter()
                .map(|&j| self.column_norms[j])
                .fold(0.0, f64::max);
        let mut log2 = 0.0;
        let mut nb = 0;
        for &j in combo {
            self.v.copy_from_slice(self.a.column(j));
            for _ in 0..2 {
                for bs in self.basis[..nb * m].chunks_exact(m) {
                    let c = dot(&self.v, bs);
                    for (x, y) in self.v.iter_mut().zip(bs) {
                        *x -= c * y;
                    }
                }
            }
            let r = norm2(&self.v);
            if r <= tau {
                return f64::NEG_INFINITY;
            }
            log2 += r.log2();
            for (slot, x) in self.basis[nb * m..(nb + 1) * m].iter_mut().zip(&self.v) {
                *slot = x / r;
            }
            nb += 1;
        }
        log2
    }
}

#[derive(Clone, Debug)]
struct BestSubset {
    log2_volume: f64,
    combo: Vec<usize>,
}

impl BestSubset {
    /// Total order: higher log2 volume wins, ties go to the
    /// lexicographically smaller index list.
    fn beats(&self, other: &Option<BestSubset>) -> bool {
        match other {
            None => true,
            Some(o) => {
                self.log2_volume > o.log2_volume
                    || (self.log2_volume == o.log2_volume && self.combo < o.combo)
            }
        }
    }
}

fn scan_chunk(a: &DenseMatrix, k: usize, start: u64, end: u64) -> Option<BestSubset> {
    let mut eval = SubsetEval::new(a, k);
    let mut best: Option<BestSubset> = None;
    for_each_in_range(a.cols(), k, start, end, |_, combo| {
        let lv = eval.log2_volume(combo);
        let cand = BestSubset {
            log2_volume: lv,
            combo: combo.to_vec(),
        };
        if cand.beats(&best) {
            best = Some(cand);
        }
    });
    best
}

/// Best subset over all ranks, scanned sequentially.
pub fn exact_scan_seq(a: &DenseMatrix, k: usize, total: u64) -> Option<(f64, Vec<usize>)> {
    scan_chunk(a, k, 0, total).map(|b| (b.log2_volume, b.combo))
}

/// Best subset over all ranks, with the rank range partitioned across the
/// rayon pool. Chunk results are folded in rank order, so the winner is
/// identical to the sequential scan.
#[cfg(feature = "parallel")]
pub fn exact_scan_par(a: &DenseMatrix, k: usize, total: u64) -> Option<(f64, Vec<usize>)> {
    let threads = rayon::current_num_threads() as u64;
    let chunks = (threads * 8).clamp(1, total.max(1));
    let step = total.div_ceil(chunks);
    let ranges: Vec<(u64, u64)> = (0..chunks)
        .map(|c| (c * step, ((c + 1) * step).min(total)))
        .filter(|(s, e)| s < e)
        .collect();
    let partials: Vec<Option<BestSubset>> = ranges
        .par_iter()
        .map(|&(s, e)| scan_chunk(a, k, s, e))
        .collect();
    let mut best: Option<BestSubset> = None;
    for p in partials.into_iter().flatten() {
        if p.beats(&best) {
            best = Some(p);
        }
    }
    best.map(|b| (b.log2_volume, b.combo))
}

/// Exhaustive maximum-volume selection over all `C(n, k)` subsets.
///
/// Errors when the subset count exceeds `cap`; ties are broken by the
/// lexicographically smallest index list.
pub fn exact_select(a: &DenseMatrix, k: usize, cap: u64) -> Result<SolveReport, SolveError> {
    check_k(a, k)?;
    let n = a.cols();
    let total = match binomial(n, k) {
        Some(t) if t <= cap => t,
        _ => return Err(SolveError::CapExceeded { n, k, cap }),
    };

    #[cfg(feature = "parallel")]
    let best = exact_scan_par(a, k, total);
    #[cfg(not(feature = "parallel"))]
    let best = exact_scan_seq(a, k, total);

    let (_, combo) = best.expect("at least one subset exists");
    let selection = ColumnSelection::new(combo)?;
    let vol = volume(a, &selection)?;
    Ok(SolveReport {
        strategy: Strategy::Exact,
        pick_order: selection.indices().to_vec(),
        selection,
        volume: vol,
        steps: total,
        mu: None,
    })
}

/// True iff no single-column swap improves the volume of `s` by more than a
/// factor `mu` (with a small absolute slack).
pub fn is_local_mu_maximum(
    a: &DenseMatrix,
    s: &ColumnSelection,
    mu: f64,
) -> Result<bool, SolveError> {
    if mu < 1.0 {
        return Err(SolveError::MuBelowOne { mu });
    }
    let base = volume(a, s)?.volume;
    for neighbor in swap_neighbors(a.cols(), s) {
        let cand = volume(a, &neighbor)?.volume;
        if cand > mu * base + LOCAL_MAX_SLACK {
            return Ok(false);
        }
    }
    Ok(true)
}

fn swap_neighbors(cols: usize, s: &ColumnSelection) -> Vec<ColumnSelection> {
    let mut out = Vec::new();
    for incoming in 0..cols {
        if s.contains(incoming) {
            continue;
        }
        for &outgoing in s.indices() {
            let mut idx: Vec<usize> = s
                .indices()
                .iter()
                .copied()
                .filter(|&j| j != outgoing)
                .collect();
            idx.push(incoming);
            idx.sort_unstable();
            out.push(ColumnSelection::new(idx).expect("swap keeps indices distinct"));
        }
    }
    out
}

/// Single-swap local search: while some swap of one selected column for an
/// unselected one raises the volume by a factor greater than `mu`, apply the
/// best such swap. Swap-volume ties go to the lowest incoming index, then
/// the lowest outgoing index.
pub fn local_search(
    a: &DenseMatrix,
    k: usize,
    mu: f64,
    start: &ColumnSelection,
) -> Result<SolveReport, SolveError> {
    check_k(a, k)?;
    if mu < 1.0 {
        return Err(SolveError::MuBelowOne { mu });
    }
    if start.k() != k {
        return Err(SolveError::SelectionSize {
            expected: k,
            got: start.k(),
        });
    }
    start.validate_for(a)?;
    let mut current = start.clone();
    let mut cur_log2 = volume(a, &current)?.log2_volume;
    if cur_log2 == f64::NEG_INFINITY {
        return Err(SolveError::ZeroVolumeStart);
    }
    let log2_mu = mu.log2();
    let mut swaps = 0u64;

    loop {
        let mut best: Option<(f64, ColumnSelection)> = None;
        // Incoming ascending outside, outgoing ascending inside: with a
        // strictly-greater comparison the first encountered swap wins ties.
        for incoming in 0..a.cols() {
            if current.contains(incoming) {
                continue;
            }
            for &outgoing in current.indices() {
                let mut idx: Vec<usize> = current
                    .indices()
                    .iter()
                    .copied()
                    .filter(|&j| j != outgoing)
                    .collect();
                idx.push(incoming);
                idx.sort_unstable();
                let cand = ColumnSelection::new(idx)?;
                let lv = volume(a, &cand)?.log2_volume;
                if lv > cur_log2 + log2_mu && best.as_ref().is_none_or(|(b, _)| lv > *b) {
                    best = Some((lv, cand));
                }
            }
        }
        match best {
            Some((lv, cand)) => {
                current = cand;
                cur_log2 = lv;
                swaps += 1;
            }
            None => break,
        }
    }

    let vol = volume(a, &current)?;
    Ok(SolveReport {
        strategy: Strategy::Local,
        pick_order: current.indices().to_vec(),
        selection: current,
        volume: vol,
        steps: swaps,
        mu: Some(mu),
    })
}

/// The exact volume-sampling distribution over all k-subsets:
/// `P_S = Vol(S)^2 / sum_T Vol(T)^2`.
#[derive(Debug, Clone, Serialize)]
pub struct VolumeDistribution {
    pub k: usize,
    /// One entry per k-subset in lexicographic order, probability attached;
    /// zero-volume subsets are recorded with probability 0.
    pub entries: Vec<(ColumnSelection, f64)>,
    /// `sum_T Vol(T)^2`.
    pub normalizer: f64,
}

/// Enumerates every k-subset and returns the exact squared-volume
/// distribution.
pub fn volume_sampling_distribution(
    a: &DenseMatrix,
    k: usize,
    cap: u64,
) -> Result<VolumeDistribution, SolveError> {
    check_k(a, k)?;
    let n = a.cols();
    let total = match binomial(n, k) {
        Some(t) if t <= cap => t,
        _ => return Err(SolveError::CapExceeded { n, k, cap }),
    };
    let mut eval = SubsetEval::new(a, k);
    let mut entries: Vec<(ColumnSelection, f64)> = Vec::with_capacity(total as usize);
    let mut normalizer = 0.0;
    for_each_in_range(n, k, 0, total, |_, combo| {
        let lv = eval.log2_volume(combo);
        let squared = if lv == f64::NEG_INFINITY {
            0.0
        } else {
            (2.0 * lv).exp2()
        };
        normalizer += squared;
        let sel = ColumnSelection::new(combo.to_vec()).expect("combos are ascending");
        entries.push((sel, squared));
    });
    if normalizer == 0.0 {
        return Err(SolveError::AllVolumesZero);
    }
    for (_, p) in &mut entries {
        *p /= normalizer;
    }
    Ok(VolumeDistribution {
        k,
        entries,
        normalizer,
    })
}

/// Draws one subset from the distribution with a seeded generator; the same
/// seed always yields the same subset.
pub fn sample_subset(dist: &VolumeDistribution, seed: u64) -> ColumnSelection {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let u: f64 = rng.random();
    let mut cum = 0.0;
    for (sel, p) in &dist.entries {
        cum += p;
        if u < cum {
            return sel.clone();
        }
    }
    dist.entries
        .last()
        .map(|(sel, _)| sel.clone())
        .expect("distribution has entries")
}
