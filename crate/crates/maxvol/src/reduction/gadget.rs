//! Binary vector families from Sylvester Hadamard matrices.
//!
//! Order-`2^m` Sylvester matrices give `2^m - 1` binary rows (after mapping
//! `-1 -> 0` and dropping the all-ones row) in which every row has exactly
//! `2^(m-1)` ones and every pairwise dot product, including against
//! complements, is exactly `2^(m-2)`.

use super::ReduceError;

const MAX_ORDER: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct HadamardGadget {
    pub m: usize,
    /// `2^m - 1` binary rows of length `2^m`, in Sylvester row order.
    pub vectors: Vec<Vec<u8>>,
    /// Euclidean norm of each row before normalization: `2^((m-1)/2)`.
    pub norm_scale: f64,
}

impl HadamardGadget {
    pub fn dimension(&self) -> usize {
        1 << self.m
    }

    pub fn row_count(&self) -> usize {
        self.vectors.len()
    }
}

/// Builds the order-`2^m` gadget by Sylvester doubling.
pub fn build_gadget(m: usize) -> Result<HadamardGadget, ReduceError> {
    if m < 2 {
        return Err(ReduceError::GadgetTooSmall { m });
    }
    if m > MAX_ORDER {
        return Err(ReduceError::SizeOverflow(format!(
            "gadget order 2^{m} exceeds the 2^{MAX_ORDER} budget"
        )));
    }
    let size = 1usize << m;
    // H_{2n} = [[H, H], [H, -H]] starting from H_1 = [1].
    let mut h: Vec<Vec<i8>> = vec![vec![1]];
    while h.len() < size {
        let n = h.len();
        let mut next = vec![vec![0i8; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                let v = h[i][j];
                next[i][j] = v;
                next[i][j + n] = v;
                next[i + n][j] = v;
                next[i + n][j + n] = -v;
            }
        }
        h = next;
    }
    let vectors: Vec<Vec<u8>> = h
        .into_iter()
        .skip(1) // the all-ones row
        .map(|row| row.into_iter().map(|v| u8::from(v == 1)).collect())
        .collect();
    let norm_scale = ((1u64 << (m - 1)) as f64).sqrt();
    Ok(HadamardGadget {
        m,
        vectors,
        norm_scale,
    })
}

/// Binary complement of a 0/1 vector.
pub fn complement(row: &[u8]) -> Vec<u8> {
    row.iter().map(|&b| 1 - b).collect()
}

/// Exact integer dot product of two binary rows.
pub fn binary_dot(a: &[u8], b: &[u8]) -> u64 {
    a.iter().zip(b).map(|(&x, &y)| (x & y) as u64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m2_rows_match_sylvester_order() {
        let g = build_gadget(2).unwrap();
        assert_eq!(
            g.vectors,
            vec![
                vec![1, 0, 1, 0],
                vec![1, 1, 0, 0],
                vec![1, 0, 0, 1],
            ]
        );
        assert_eq!(g.norm_scale, 2.0f64.sqrt());
    }

    #[test]
    fn row_weights_are_half_the_dimension() {
        for m in 2..=6 {
            let g = build_gadget(m).unwrap();
            assert_eq!(g.row_count(), (1 << m) - 1);
            for row in &g.vectors {
                let ones: u64 = row.iter().map(|&b| b as u64).sum();
                assert_eq!(ones, 1 << (m - 1), "m = {m}");
            }
        }
    }

    #[test]
    fn pairwise_dots_are_quarter_dimension() {
        for m in 2..=5 {
            let g = build_gadget(m).unwrap();
            let expected = 1u64 << (m - 2);
            for i in 0..g.row_count() {
                for j in 0..g.row_count() {
                    if i == j {
                        continue;
                    }
                    assert_eq!(binary_dot(&g.vectors[i], &g.vectors[j]), expected);
                    assert_eq!(
                        binary_dot(&g.vectors[i], &complement(&g.vectors[j])),
                        expected
                    );
                }
            }
        }
    }

    #[test]
    fn complement_dot_with_self_is_zero() {
        let g = build_gadget(3).unwrap();
        for row in &g.vectors {
            assert_eq!(binary_dot(row, &complement(row)), 0);
        }
    }

    #[test]
    fn tiny_orders_rejected() {
        assert!(matches!(
            build_gadget(1),
            Err(ReduceError::GadgetTooSmall { m: 1 })
        ));
    }
}
