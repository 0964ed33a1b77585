//! Seeded random inputs for test suites and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::DenseMatrix;

/// A `rows x cols` matrix with entries uniform in [-1, 1), generated from a
/// ChaCha stream so the same seed yields the same matrix on any platform.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..rows * cols)
        .map(|_| 2.0 * rng.random::<f64>() - 1.0)
        .collect();
    DenseMatrix::new(rows, cols, values).expect("generated entries are finite")
}

/// A seeded ChaCha generator for deterministic test suites.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
