//! Brute-force references used to cross-check the fast paths. They use
//! nothing but the median operation.

use medalg_core::{FiniteMedianAlgebra, SubsetMask};

/// Largest carrier for partition enumeration.
pub const MAX_PARTITION_ORACLE: usize = 12;
/// Largest carrier for cube-embedding search.
pub const MAX_CUBE_ORACLE: usize = 16;

fn convex(a: &FiniteMedianAlgebra, s: &[bool]) -> bool {
    let n = a.len();
    (0..n).filter(|&x| s[x]).all(|x| (0..n).filter(|&y| s[y]).all(|y| (0..n).all(|z| s[z] || a.median(x, y, z) != z)))
}

/// Every partition into two nonempty convex parts, as the mask of the
/// part containing element 0, sorted.
pub fn convex_partitions(a: &FiniteMedianAlgebra) -> Option<Vec<SubsetMask>> {
    let n = a.len();
    if n > MAX_PARTITION_ORACLE {
        return None;
    }
    let mut out = Vec::new();
    // bit i of `rest` places element i + 1 with element 0
    for rest in 0u32..(1 << (n - 1)) {
        let side: Vec<bool> = (0..n).map(|i| i == 0 || rest >> (i - 1) & 1 == 1).collect();
        if side.iter().all(|&b| b) {
            continue;
        }
        let other: Vec<bool> = side.iter().map(|b| !b).collect();
        if convex(a, &side) && convex(a, &other) {
            out.push(SubsetMask::from_fn(n, |i| side[i]));
        }
    }
    out.sort();
    Some(out)
}

/// Largest `k` such that `{0,1}^k` embeds in `a` as a median subalgebra.
///
/// An embedding `f` is fixed by `f(0)`, `f(1)` and the images of the unit
/// vectors, since `e_S ∨ e_j = med(e_S, 1, e_j)`; images of the unit
/// vectors are chosen in increasing order, and every candidate is checked
/// on all triples.
pub fn cube_embedding_rank(a: &FiniteMedianAlgebra) -> Option<usize> {
    let n = a.len();
    if n > MAX_CUBE_ORACLE {
        return None;
    }
    let mut best = 0;
    for k in 1..=n.ilog2() as usize {
        if !cube_embeds(a, k) {
            break;
        }
        best = k;
    }
    Some(best)
}

fn cube_embeds(a: &FiniteMedianAlgebra, k: usize) -> bool {
    let n = a.len();
    for bottom in 0..n {
        for top in 0..n {
            if top == bottom {
                continue;
            }
            let mut units = Vec::with_capacity(k);
            if extend_units(a, k, bottom, top, &mut units) {
                return true;
            }
        }
    }
    false
}

fn extend_units(a: &FiniteMedianAlgebra, k: usize, bottom: usize, top: usize, units: &mut Vec<usize>) -> bool {
    if units.len() == k {
        return embedding_holds(a, k, bottom, top, units);
    }
    let start = units.last().map_or(0, |&u| u + 1);
    for e in start..a.len() {
        // unit vectors lie in [bottom, top] minus bottom (top only when
        // k = 1); two unit vectors have median `bottom` with it
        if e == bottom || a.median(bottom, top, e) != e {
            continue;
        }
        if units.iter().any(|&u| a.median(bottom, u, e) != bottom) {
            continue;
        }
        units.push(e);
        if extend_units(a, k, bottom, top, units) {
            return true;
        }
        units.pop();
    }
    false
}

fn embedding_holds(a: &FiniteMedianAlgebra, k: usize, bottom: usize, top: usize, units: &[usize]) -> bool {
    let size = 1usize << k;
    let mut f = vec![bottom; size];
    for s in 1..size {
        let j = s.trailing_zeros() as usize;
        f[s] = a.median(f[s & (s - 1)], top, units[j]);
    }
    if f[size - 1] != top {
        return false;
    }
    let mut sorted = f.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    for p in 0..size {
        for q in p..size {
            for r in q..size {
                let m = (p & q) | (p & r) | (q & r);
                if a.median(f[p], f[q], f[r]) != f[m] {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_partitions_are_coordinate_cuts() {
        let c = FiniteMedianAlgebra::hypercube(3).unwrap();
        assert_eq!(convex_partitions(&c).unwrap().len(), 3);
        let s = FiniteMedianAlgebra::starlet(5).unwrap();
        assert_eq!(convex_partitions(&s).unwrap().len(), 5);
        let ch = FiniteMedianAlgebra::chain(6).unwrap();
        assert_eq!(convex_partitions(&ch).unwrap().len(), 5);
    }

    #[test]
    fn embedding_rank_of_known_shapes() {
        assert_eq!(cube_embedding_rank(&FiniteMedianAlgebra::hypercube(3).unwrap()), Some(3));
        assert_eq!(cube_embedding_rank(&FiniteMedianAlgebra::hypercube(4).unwrap()), Some(4));
        assert_eq!(cube_embedding_rank(&FiniteMedianAlgebra::chain(7).unwrap()), Some(1));
        assert_eq!(cube_embedding_rank(&FiniteMedianAlgebra::chain(1).unwrap()), Some(0));
        let c3 = FiniteMedianAlgebra::chain(3).unwrap();
        let grid = FiniteMedianAlgebra::product(&c3, &c3).unwrap();
        assert_eq!(cube_embedding_rank(&grid), Some(2));
        assert_eq!(cube_embedding_rank(&FiniteMedianAlgebra::starlet(8).unwrap()), Some(1));
    }
}
