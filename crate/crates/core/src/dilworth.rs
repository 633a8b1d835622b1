//! Minimum chain cover of a finite poset via bipartite matching.

use alloc::vec;
use alloc::vec::Vec;

/// Partitions `0..n` into the minimum number of chains of the strict order
/// `less`, which must be transitive and irreflexive.
///
/// Each chain is listed in increasing order. By Dilworth's theorem the
/// number of chains equals the width of the poset.
pub fn min_chain_cover(n: usize, less: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let succ: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| less(i, j)).collect()).collect();
    // match_right[j] = i when the edge i -> j is in the matching
    let mut match_right = vec![usize::MAX; n];
    for i in 0..n {
        let mut seen = vec![false; n];
        augment(i, &succ, &mut match_right, &mut seen);
    }
    let mut next = vec![usize::MAX; n];
    let mut has_pred = vec![false; n];
    for (j, &i) in match_right.iter().enumerate() {
        if i != usize::MAX {
            next[i] = j;
            has_pred[j] = true;
        }
    }
    let mut chains = Vec::new();
    for start in (0..n).filter(|&i| !has_pred[i]) {
        let mut chain = vec![start];
        let mut cur = start;
        while next[cur] != usize::MAX {
            cur = next[cur];
            chain.push(cur);
        }
        chains.push(chain);
    }
    chains
}

fn augment(i: usize, succ: &[Vec<usize>], match_right: &mut [usize], seen: &mut [bool]) -> bool {
    for &j in &succ[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        if match_right[j] == usize::MAX || augment(match_right[j], succ, match_right, seen) {
            match_right[j] = i;
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_order_is_one_chain() {
        assert_eq!(min_chain_cover(4, |a, b| a < b), [vec![0, 1, 2, 3]]);
    }

    #[test]
    fn antichain_is_all_singletons() {
        assert_eq!(min_chain_cover(3, |_, _| false).len(), 3);
        assert!(min_chain_cover(0, |_, _| false).is_empty());
    }

    #[test]
    fn divisibility_width() {
        // divisibility on 1..=6 has width 3 ({4, 5, 6})
        let chains = min_chain_cover(6, |a, b| a != b && (b + 1) % (a + 1) == 0);
        assert_eq!(chains.len(), 3);
        let mut all: Vec<usize> = chains.concat();
        all.sort_unstable();
        assert_eq!(all, [0, 1, 2, 3, 4, 5]);
    }
}
