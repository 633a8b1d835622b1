//! Intervals, gates, the base-point order, convexity and adjacency.

use alloc::vec::Vec;

use crate::algebra::FiniteMedianAlgebra;
use crate::error::Violation;
use crate::mask::SubsetMask;
use crate::Check;

/// The interval `[x, y] = {z : med(x, y, z) = z}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub x: usize,
    pub y: usize,
    pub members: SubsetMask,
}

impl Interval {
    pub fn len(&self) -> usize {
        self.members.count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, z: usize) -> bool {
        self.members.contains(z)
    }

    pub fn is_trivial(&self) -> bool {
        self.x == self.y
    }
}

impl FiniteMedianAlgebra {
    pub fn interval(&self, x: usize, y: usize) -> Interval {
        Interval { x, y, members: self.interval_mask(x, y) }
    }

    pub fn interval_mask(&self, x: usize, y: usize) -> SubsetMask {
        SubsetMask::from_fn(self.len(), |z| self.median(x, y, z) == z)
    }

    /// The gate retraction onto `[u, v]`: `z ↦ med(u, z, v)`.
    #[inline]
    pub fn gate(&self, u: usize, v: usize, z: usize) -> usize {
        self.median(u, z, v)
    }

    /// `a ≤_base b`, i.e. `a ∈ [base, b]`.
    #[inline]
    pub fn leq(&self, base: usize, a: usize, b: usize) -> bool {
        self.median(base, a, b) == a
    }

    /// Every interval between two members lies inside `s`. The empty set
    /// is convex.
    pub fn is_convex(&self, s: &SubsetMask) -> bool {
        self.convexity_witness(s).is_none()
    }

    /// A triple `(a, b, z)` with `a, b ∈ s` and `med(a, b, z) ∉ s`.
    pub fn convexity_witness(&self, s: &SubsetMask) -> Option<[usize; 3]> {
        let members = s.to_vec();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                for z in self.elements() {
                    if !s.contains(self.median(a, b, z)) {
                        return Some([a, b, z]);
                    }
                }
            }
        }
        None
    }

    /// Least convex superset; `convex_hull(∅) = ∅`.
    pub fn convex_hull(&self, s: &SubsetMask) -> SubsetMask {
        let mut hull = s.clone();
        let mut members = hull.to_vec();
        let mut k = 0;
        while k < members.len() {
            let a = members[k];
            for i in 0..k {
                let b = members[i];
                for z in self.elements() {
                    let m = self.median(a, b, z);
                    if hull.insert(m) {
                        members.push(m);
                    }
                }
            }
            k += 1;
        }
        hull
    }

    /// Members of `s` sorted by `≤_base`, if that order is total on `s`.
    pub fn linear_order_from(&self, base: usize, s: &SubsetMask) -> Option<Vec<usize>> {
        let members = s.to_vec();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                let m = self.median(base, a, b);
                if m != a && m != b {
                    return None;
                }
            }
        }
        // in a total order the rank of z is the number of members below it
        let mut keyed: Vec<(usize, usize)> =
            members.iter().map(|&z| (members.iter().filter(|&&w| w != z && self.leq(base, w, z)).count(), z)).collect();
        keyed.sort_unstable();
        Some(keyed.into_iter().map(|(_, z)| z).collect())
    }

    /// Whether `≤_x` is total on `[x, y]`.
    pub fn is_chain_interval(&self, x: usize, y: usize) -> bool {
        self.chain_order(x, y).is_some()
    }

    /// The members of `[x, y]` listed from `x` to `y`, if the interval is a chain.
    pub fn chain_order(&self, x: usize, y: usize) -> Option<Vec<usize>> {
        self.linear_order_from(x, &self.interval_mask(x, y))
    }

    /// Whether `s` is linearly ordered by the betweenness relation: some
    /// member `e` makes `≤_e` total on `s`.
    pub fn is_linear_subset(&self, s: &SubsetMask) -> bool {
        s.is_empty() || s.iter().any(|e| self.linear_order_from(e, s).is_some())
    }

    /// Whether `med(a, b, c) ∈ {a, b, c}` for every triple.
    pub fn is_conservative(&self) -> bool {
        self.elements().all(|a| {
            self.elements().all(|b| {
                self.elements().all(|c| {
                    let m = self.median(a, b, c);
                    m == a || m == b || m == c
                })
            })
        })
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        a != b && self.elements().all(|z| z == a || z == b || self.median(a, b, z) != z)
    }

    /// Unordered pairs `(a, b)`, `a < b`, with `[a, b] = {a, b}`.
    pub fn adjacent_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in a + 1..self.len() {
                if self.is_adjacent(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Neighbours of `x` in the median graph.
    pub fn neighbours(&self, x: usize) -> Vec<usize> {
        self.elements().filter(|&z| self.is_adjacent(x, z)).collect()
    }

    /// Unordered pairs `(u, v)`, `u < v`, whose interval is a chain.
    pub fn chain_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in self.elements() {
            for v in u + 1..self.len() {
                if self.is_chain_interval(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

/// Checks that `f` (indexed by source element) preserves medians.
pub fn check_homomorphism(src: &FiniteMedianAlgebra, dst: &FiniteMedianAlgebra, f: &[usize]) -> Check {
    if f.len() != src.len() {
        return Err(Violation::new("map length differs from source carrier", Vec::new()));
    }
    if let Some(a) = f.iter().position(|&v| v >= dst.len()) {
        return Err(Violation::new("map leaves the target carrier", alloc::vec![a]));
    }
    for a in src.elements() {
        for b in a..src.len() {
            for c in b..src.len() {
                if f[src.median(a, b, c)] != dst.median(f[a], f[b], f[c]) {
                    return Err(Violation::new("map does not preserve the median", alloc::vec![a, b, c]));
                }
            }
        }
    }
    Ok(())
}
