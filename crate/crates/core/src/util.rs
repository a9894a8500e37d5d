//! Small combinatorial helpers shared across modules.

use alloc::vec::Vec;

/// Binomial coefficient, saturating at `u128::MAX`.
pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // Multiply before dividing; the running value is always an exact
        // binomial coefficient so the division is exact.
        acc = match acc.checked_mul((n - k + i) as u128) {
            Some(v) => v / i as u128,
            None => return u128::MAX,
        };
    }
    acc
}

/// Visits every `k`-subset of `{0, .., n-1}` in lexicographic order.
pub(crate) fn for_each_combination<F: FnMut(&[usize])>(n: usize, k: usize, mut visit: F) {
    if k > n {
        return;
    }
    if k == 0 {
        visit(&[]);
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        // Rightmost position that can still advance.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(16, 8), 12870);
        assert_eq!(binomial(4, 7), 0);
        assert_eq!(binomial(64, 32), 1832624140942590534);
    }

    #[test]
    fn combinations_lex_order_and_count() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |s| seen.push(s.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut count = 0u64;
        for_each_combination(10, 4, |_| count += 1);
        assert_eq!(count as u128, binomial(10, 4));
    }

    #[test]
    fn combinations_edge_sizes() {
        let mut seen = Vec::new();
        for_each_combination(3, 0, |s| seen.push(s.to_vec()));
        assert_eq!(seen, vec![Vec::<usize>::new()]);
        seen.clear();
        for_each_combination(3, 3, |s| seen.push(s.to_vec()));
        assert_eq!(seen, vec![vec![0, 1, 2]]);
    }
}
