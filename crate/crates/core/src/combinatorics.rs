//! Small exhaustive-enumeration helpers shared by the exact solvers and verifiers.

/// `C(n, r)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Calls `visit` with every `r`-subset of `0..n` as an ascending index slice,
/// in lexicographic order. Stops early when `visit` returns `false`.
pub fn for_each_combination<F>(n: usize, r: usize, mut visit: F)
where
    F: FnMut(&[usize]) -> bool,
{
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        // Advance the rightmost index that still has room.
        let mut i = r;
        while i > 0 && idx[i - 1] == n - r + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        i -= 1;
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
