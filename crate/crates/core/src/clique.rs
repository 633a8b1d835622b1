//! Exact maximum clique by branch and bound over bitsets.
//!
//! Vertices are expanded in greedy-colouring order; a branch is cut when the
//! current clique plus the colour bound cannot beat the incumbent.

use alloc::vec::Vec;

use crate::mask::SubsetMask;

/// A maximum clique of the graph whose neighbourhoods are `adj`.
///
/// `adj[v]` must not contain `v`, and adjacency must be symmetric.
pub fn max_clique(adj: &[SubsetMask]) -> Vec<usize> {
    let n = adj.len();
    let mut best = Vec::new();
    let mut current = Vec::new();
    expand(adj, &mut current, SubsetMask::full(n), &mut best);
    best.sort_unstable();
    best
}

fn expand(adj: &[SubsetMask], current: &mut Vec<usize>, candidates: SubsetMask, best: &mut Vec<usize>) {
    let (order, bounds) = colour_sort(adj, &candidates);
    let mut candidates = candidates;
    for k in (0..order.len()).rev() {
        if current.len() + bounds[k] <= best.len() {
            return;
        }
        let v = order[k];
        current.push(v);
        let next = candidates.intersection(&adj[v]);
        if next.is_empty() {
            if current.len() > best.len() {
                *best = current.clone();
            }
        } else {
            expand(adj, current, next, best);
        }
        current.pop();
        candidates.remove(v);
    }
}

/// Greedy colouring of the candidate set. Returns vertices in colour order
/// and, for each position, the number of colours used up to it.
fn colour_sort(adj: &[SubsetMask], candidates: &SubsetMask) -> (Vec<usize>, Vec<usize>) {
    let mut uncoloured = candidates.clone();
    let mut order = Vec::with_capacity(candidates.count());
    let mut bounds = Vec::with_capacity(order.capacity());
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut available = uncoloured.clone();
        while let Some(v) = available.first() {
            available.remove(v);
            available = available.difference(&adj[v]);
            uncoloured.remove(v);
            order.push(v);
            bounds.push(colour);
        }
    }
    (order, bounds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Vec<SubsetMask> {
        let mut adj = alloc::vec![SubsetMask::empty(n); n];
        for &(a, b) in edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        adj
    }

    #[test]
    fn empty_and_edgeless() {
        assert!(max_clique(&[]).is_empty());
        assert_eq!(max_clique(&graph(3, &[])).len(), 1);
    }

    #[test]
    fn finds_the_four_clique() {
        let g = graph(6, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (3, 5)]);
        assert_eq!(max_clique(&g), [0, 1, 2, 3]);
    }

    #[test]
    fn odd_cycle_has_clique_two() {
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(max_clique(&g).len(), 2);
    }
}
