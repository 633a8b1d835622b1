//! Median automorphisms and isomorphisms by backtracking.
//!
//! A median isomorphism is the same thing as an isomorphism of the
//! underlying median graphs, so the search extends partial maps along a BFS
//! order, pruning on degree, distance profile and distances to already
//! assigned vertices. Every complete map is re-verified on all triples.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::FiniteMedianAlgebra;
use crate::error::{MedianError, Violation};
use crate::mask::SubsetMask;
use crate::Check;

/// Largest carrier accepted by the exhaustive searches.
pub const MAX_ISO_ELEMENTS: usize = 64;

/// A permutation of the carrier, stored as `perm[i] = image of i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Automorphism {
    pub perm: Vec<usize>,
}

impl Automorphism {
    pub fn identity(n: usize) -> Self {
        Automorphism { perm: (0..n).collect() }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.perm[x]
    }

    pub fn apply_mask(&self, s: &SubsetMask) -> SubsetMask {
        s.map(self.perm.len(), |i| self.perm[i])
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism { perm: other.perm.iter().map(|&i| self.perm[i]).collect() }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        Automorphism { perm: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Bijective and median-preserving on `a`.
    pub fn verify(&self, a: &FiniteMedianAlgebra) -> Check {
        let n = a.len();
        if self.perm.len() != n {
            return Err(Violation::new("permutation length differs from carrier", Vec::new()));
        }
        let mut seen = SubsetMask::empty(n);
        for (i, &p) in self.perm.iter().enumerate() {
            if p >= n || !seen.insert(p) {
                return Err(Violation::new("map is not a bijection", vec![i]));
            }
        }
        crate::calculus::check_homomorphism(a, a, &self.perm)
    }
}

struct GraphData {
    adj: Vec<Vec<usize>>,
    dist: Vec<Vec<u16>>,
    profile: Vec<Vec<u16>>,
}

fn graph_data(a: &FiniteMedianAlgebra) -> GraphData {
    let n = a.len();
    let mut adj = vec![Vec::new(); n];
    for (p, q) in a.adjacent_pairs() {
        adj[p].push(q);
        adj[q].push(p);
    }
    let dist: Vec<Vec<u16>> = (0..n)
        .map(|s| {
            let mut d = vec![u16::MAX; n];
            d[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if d[v] == u16::MAX {
                        d[v] = d[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            d
        })
        .collect();
    let profile = dist
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.sort_unstable();
            r
        })
        .collect();
    GraphData { adj, dist, profile }
}

fn bfs_order(g: &GraphData) -> Vec<usize> {
    let n = g.adj.len();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &g.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    order
}

struct Search<'a> {
    src: &'a FiniteMedianAlgebra,
    dst: &'a FiniteMedianAlgebra,
    gs: GraphData,
    gd: GraphData,
    order: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
    first_only: bool,
}

impl Search<'_> {
    fn compatible(&self, k: usize, v: usize, w: usize) -> bool {
        if self.used[w] || self.gs.adj[v].len() != self.gd.adj[w].len() || self.gs.profile[v] != self.gd.profile[w] {
            return false;
        }
        self.order[..k].iter().all(|&u| self.gs.dist[v][u] == self.gd.dist[w][self.map[u]])
    }

    fn run(&mut self, k: usize) {
        if self.first_only && !self.found.is_empty() {
            return;
        }
        if k == self.order.len() {
            if crate::calculus::check_homomorphism(self.src, self.dst, &self.map).is_ok() {
                self.found.push(self.map.clone());
            }
            return;
        }
        let v = self.order[k];
        // a vertex with an assigned neighbour must map next to that neighbour's image
        let anchor = self.gs.adj[v].iter().copied().find(|&u| self.order[..k].contains(&u));
        let candidates: Vec<usize> = match anchor {
            Some(u) => self.gd.adj[self.map[u]].clone(),
            None => (0..self.dst.len()).collect(),
        };
        for w in candidates {
            if self.compatible(k, v, w) {
                self.map[v] = w;
                self.used[w] = true;
                self.run(k + 1);
                self.used[w] = false;
                self.map[v] = usize::MAX;
            }
        }
    }
}

fn search(
    src: &FiniteMedianAlgebra,
    dst: &FiniteMedianAlgebra,
    first_only: bool,
) -> Result<Vec<Vec<usize>>, MedianError> {
    for a in [src, dst] {
        if a.len() > MAX_ISO_ELEMENTS {
            return Err(MedianError::SizeOverflow { requested: a.len(), max: MAX_ISO_ELEMENTS });
        }
    }
    if src.len() != dst.len() {
        return Ok(Vec::new());
    }
    let gs = graph_data(src);
    let gd = graph_data(dst);
    let order = bfs_order(&gs);
    let n = src.len();
    let mut s = Search {
        src,
        dst,
        gs,
        gd,
        order,
        map: vec![usize::MAX; n],
        used: vec![false; n],
        found: Vec::new(),
        first_only,
    };
    s.run(0);
    Ok(s.found)
}

impl FiniteMedianAlgebra {
    /// The full automorphism group, sorted. Requires `n <= 64`.
    pub fn automorphisms(&self) -> Result<Vec<Automorphism>, MedianError> {
        let mut group: Vec<Automorphism> =
            search(self, self, false)?.into_iter().map(|perm| Automorphism { perm }).collect();
        group.sort();
        Ok(group)
    }

    /// A median isomorphism `self -> other`, if one exists.
    pub fn isomorphism_to(&self, other: &FiniteMedianAlgebra) -> Result<Option<Vec<usize>>, MedianError> {
        Ok(search(self, other, true)?.into_iter().next())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_has_two_automorphisms() {
        for k in 2..6 {
            assert_eq!(FiniteMedianAlgebra::chain(k).unwrap().automorphisms().unwrap().len(), 2);
        }
        assert_eq!(FiniteMedianAlgebra::chain(1).unwrap().automorphisms().unwrap().len(), 1);
    }

    #[test]
    fn cube_group_order() {
        let g = FiniteMedianAlgebra::hypercube(3).unwrap().automorphisms().unwrap();
        assert_eq!(g.len(), 48);
        assert!(g[0].is_identity());
    }

    #[test]
    fn starlet_group_fixes_centre() {
        let s = FiniteMedianAlgebra::starlet(4).unwrap();
        let g = s.automorphisms().unwrap();
        assert_eq!(g.len(), 24);
        assert!(g.iter().all(|h| h.apply(0) == 0));
    }

    #[test]
    fn group_closure() {
        let s = FiniteMedianAlgebra::hypercube(2).unwrap();
        let g = s.automorphisms().unwrap();
        for a in &g {
            assert!(g.contains(&a.inverse()));
            for b in &g {
                assert!(g.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn square_is_product_of_two_chains() {
        let c2 = FiniteMedianAlgebra::chain(2).unwrap();
        let p = FiniteMedianAlgebra::product(&c2, &c2).unwrap();
        let sq = FiniteMedianAlgebra::median_graph_from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(p.isomorphism_to(&sq).unwrap().is_some());
        let c4 = FiniteMedianAlgebra::chain(4).unwrap();
        assert!(p.isomorphism_to(&c4).unwrap().is_none());
    }
}
