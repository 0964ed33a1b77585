//! Lexicographic enumeration of k-subsets of `0..n`.

/// `C(n, k)` as `u64`, or `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// The combination of rank `rank` in lexicographic order over ascending
/// k-subsets of `0..n`.
pub fn unrank_combination(n: usize, k: usize, mut rank: u64) -> Vec<usize> {
    debug_assert!(rank < binomial(n, k).expect("count fits u64"));
    let mut combo = Vec::with_capacity(k);
    let mut next = 0;
    for pos in 0..k {
        let mut v = next;
        loop {
            let with_v = binomial(n - 1 - v, k - 1 - pos).expect("count fits u64");
            if rank < with_v {
                combo.push(v);
                next = v + 1;
                break;
            }
            rank -= with_v;
            v += 1;
        }
    }
    combo
}

/// Advances `combo` to the next combination in lexicographic order.
/// Returns `false` when `combo` was the last one.
pub fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in (i + 1)..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Visits combinations of ranks `start..end`, in rank order.
pub fn for_each_in_range<F: FnMut(u64, &[usize])>(
    n: usize,
    k: usize,
    start: u64,
    end: u64,
    mut f: F,
) {
    if start >= end {
        return;
    }
    let mut combo = unrank_combination(n, k, start);
    let mut rank = start;
    loop {
        f(rank, &combo);
        rank += 1;
        if rank == end || !next_combination(&mut combo, n) {
            break;
        }
    }
}
