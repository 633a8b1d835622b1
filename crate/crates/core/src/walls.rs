//! Walls, crossing, rank, fingerprints and interval embeddings into
//! products of chains.
//!
//! Walls are generated from adjacent pairs: for `[a, b] = {a, b}` the gate
//! fibres over `a` and `b` partition the carrier into two convex sides.
//! Every wall of a finite median algebra arises this way.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{median3, FiniteMedianAlgebra};
use crate::clique::max_clique;
use crate::dilworth::min_chain_cover;
use crate::error::{MedianError, Violation};
use crate::mask::SubsetMask;
use crate::Check;

/// Upper bound on the wall count for exact rank computation.
pub const MAX_RANK_WALLS: usize = 1024;

/// A partition of the carrier into two nonempty convex halfspaces.
/// `side_a` is the side containing element 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Wall {
    pub side_a: SubsetMask,
    pub side_b: SubsetMask,
}

impl Wall {
    pub fn separates(&self, x: usize, y: usize) -> bool {
        self.side_a.contains(x) != self.side_a.contains(y)
    }

    /// The side containing `z`.
    pub fn side_of(&self, z: usize) -> &SubsetMask {
        if self.side_a.contains(z) {
            &self.side_a
        } else {
            &self.side_b
        }
    }

    pub fn crosses(&self, other: &Wall) -> bool {
        self.side_a.intersects(&other.side_a)
            && self.side_a.intersects(&other.side_b)
            && self.side_b.intersects(&other.side_a)
            && self.side_b.intersects(&other.side_b)
    }

    /// This wall with its minus side chosen as the side containing `z`.
    pub fn oriented_at(&self, z: usize) -> OrientedWall {
        let (minus, plus) = if self.side_a.contains(z) {
            (self.side_a.clone(), self.side_b.clone())
        } else {
            (self.side_b.clone(), self.side_a.clone())
        };
        OrientedWall { minus, plus }
    }
}

/// A wall with a designated minus side. `W ≤ W'` iff `minus(W) ⊆ minus(W')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedWall {
    pub minus: SubsetMask,
    pub plus: SubsetMask,
}

impl OrientedWall {
    pub fn le(&self, other: &OrientedWall) -> bool {
        self.minus.is_subset(&other.minus)
    }
}

/// The wall set of an algebra together with per-element side indicators.
#[derive(Clone, Debug)]
pub struct WallSet {
    walls: Vec<Wall>,
    /// For each element, the walls on whose `side_b` it lies.
    signs: Vec<SubsetMask>,
    /// An adjacent pair generating each wall.
    generators: Vec<(usize, usize)>,
}

impl FiniteMedianAlgebra {
    /// The wall set. Both sides of every wall are verified convex.
    pub fn walls(&self) -> Result<WallSet, MedianError> {
        WallSet::new(self)
    }

    /// Maximum number of pairwise crossing walls; 0 when `|A| <= 1`.
    pub fn rank(&self) -> Result<usize, MedianError> {
        self.walls()?.rank()
    }
}

impl WallSet {
    pub fn new(a: &FiniteMedianAlgebra) -> Result<Self, MedianError> {
        let n = a.len();
        let mut walls: Vec<Wall> = Vec::new();
        let mut generators = Vec::new();
        for (p, q) in a.adjacent_pairs() {
            let at_p = SubsetMask::from_fn(n, |z| a.median(p, z, q) == p);
            let at_q = at_p.complement();
            let wall = if at_p.contains(0) {
                Wall { side_a: at_p, side_b: at_q }
            } else {
                Wall { side_a: at_q, side_b: at_p }
            };
            if walls.contains(&wall) {
                continue;
            }
            if !wall.side_a.iter().chain(wall.side_b.iter()).all(|z| {
                let g = a.median(p, z, q);
                g == p || g == q
            }) {
                return Err(MedianError::InternalConsistency { reason: "gate fibres do not partition the carrier" });
            }
            if !a.is_convex(&wall.side_a) || !a.is_convex(&wall.side_b) {
                return Err(MedianError::InternalConsistency { reason: "wall side is not convex" });
            }
            walls.push(wall);
            generators.push((p, q));
        }
        let mut order: Vec<usize> = (0..walls.len()).collect();
        order.sort_by(|&i, &j| walls[i].cmp(&walls[j]));
        let walls: Vec<Wall> = order.iter().map(|&i| walls[i].clone()).collect();
        let generators = order.iter().map(|&i| generators[i]).collect();
        let signs = (0..n).map(|z| SubsetMask::from_fn(walls.len(), |w| walls[w].side_b.contains(z))).collect();
        Ok(WallSet { walls, signs, generators })
    }

    pub fn len(&self) -> usize {
        self.walls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walls.is_empty()
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn wall(&self, i: usize) -> &Wall {
        &self.walls[i]
    }

    pub fn generator(&self, i: usize) -> (usize, usize) {
        self.generators[i]
    }

    /// Side indicator of `z`: bit `w` is set when `z ∈ side_b` of wall `w`.
    pub fn sign(&self, z: usize) -> &SubsetMask {
        &self.signs[z]
    }

    /// Walls separating `x` from `y`, as a mask over wall indices.
    pub fn separating(&self, x: usize, y: usize) -> SubsetMask {
        self.signs[x].symmetric_difference(&self.signs[y])
    }

    pub fn separating_walls(&self, x: usize, y: usize) -> Vec<&Wall> {
        self.separating(x, y).iter().map(|w| &self.walls[w]).collect()
    }

    /// The wall-count metric.
    pub fn distance(&self, x: usize, y: usize) -> usize {
        self.separating(x, y).count()
    }

    pub fn crossing(&self, i: usize, j: usize) -> bool {
        i != j && self.walls[i].crosses(&self.walls[j])
    }

    pub fn crossing_graph(&self) -> Vec<SubsetMask> {
        let k = self.walls.len();
        (0..k).map(|i| SubsetMask::from_fn(k, |j| self.crossing(i, j))).collect()
    }

    pub fn rank(&self) -> Result<usize, MedianError> {
        Ok(self.max_crossing_family()?.len())
    }

    /// A largest family of pairwise crossing walls.
    pub fn max_crossing_family(&self) -> Result<Vec<usize>, MedianError> {
        if self.walls.len() > MAX_RANK_WALLS {
            return Err(MedianError::TooManyWalls { walls: self.walls.len(), max: MAX_RANK_WALLS });
        }
        Ok(max_clique(&self.crossing_graph()))
    }

    pub fn fingerprint(&self, x0: usize) -> WallFingerprint {
        WallFingerprint { basepoint: x0, sets: (0..self.signs.len()).map(|z| self.separating(x0, z)).collect() }
    }

    /// Partition of the walls separating `x` and `y` into totally ordered
    /// classes, minus sides containing `x`, using the fewest classes.
    pub fn dilworth_colouring(&self, x: usize, y: usize) -> Result<Vec<Vec<usize>>, MedianError> {
        if x == y {
            return Err(MedianError::DegeneratePair { element: x });
        }
        let sep = self.separating(x, y).to_vec();
        let oriented: Vec<OrientedWall> = sep.iter().map(|&w| self.walls[w].oriented_at(x)).collect();
        for i in 0..sep.len() {
            for j in i + 1..sep.len() {
                let comparable = oriented[i].le(&oriented[j]) || oriented[j].le(&oriented[i]);
                if !comparable && !self.crossing(sep[i], sep[j]) {
                    return Err(MedianError::ComparabilityViolation { walls: (sep[i], sep[j]) });
                }
            }
        }
        let chains = min_chain_cover(sep.len(), |i, j| i != j && oriented[i].le(&oriented[j]));
        Ok(chains.into_iter().map(|c| c.into_iter().map(|i| sep[i]).collect()).collect())
    }

    /// Embeds `[x, y]` into a product of chains, one factor per colour class.
    /// The coordinate of `z` in class `i` counts the walls of that class
    /// whose plus side (the side avoiding `x`) contains `z`.
    pub fn interval_chain_embedding(
        &self,
        a: &FiniteMedianAlgebra,
        x: usize,
        y: usize,
    ) -> Result<ChainEmbedding, MedianError> {
        let classes = self.dilworth_colouring(x, y)?;
        let members = a.interval_mask(x, y).to_vec();
        let coords: Vec<Vec<u16>> = members
            .iter()
            .map(|&z| {
                classes
                    .iter()
                    .map(|class| class.iter().filter(|&&w| self.separating(x, z).contains(w)).count() as u16)
                    .collect()
            })
            .collect();
        let factors = classes.iter().map(|c| c.len() as u32 + 1).collect();
        let emb = ChainEmbedding { x, y, classes, members, coords, factors };
        emb.verify(a)
            .map_err(|_| MedianError::InternalConsistency { reason: "chain embedding is not a median injection" })?;
        Ok(emb)
    }
}

/// Separating-wall sets from a base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallFingerprint {
    pub basepoint: usize,
    pub sets: Vec<SubsetMask>,
}

impl WallFingerprint {
    /// Two elements with the same fingerprint, if any.
    pub fn collision(&self) -> Option<(usize, usize)> {
        let mut keyed: Vec<(&SubsetMask, usize)> = self.sets.iter().zip(0..).collect();
        keyed.sort();
        keyed.windows(2).find(|w| w[0].0 == w[1].0).map(|w| (w[0].1, w[1].1))
    }

    pub fn is_injective(&self) -> bool {
        self.collision().is_none()
    }
}

/// An interval embedded into a product of chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainEmbedding {
    pub x: usize,
    pub y: usize,
    /// Colour classes of separating walls, each in increasing nesting order.
    pub classes: Vec<Vec<usize>>,
    /// Interval members in increasing index order.
    pub members: Vec<usize>,
    pub coords: Vec<Vec<u16>>,
    /// Chain lengths: `|class| + 1`.
    pub factors: Vec<u32>,
}

impl ChainEmbedding {
    pub fn coordinates_of(&self, z: usize) -> Option<&[u16]> {
        self.members.binary_search(&z).ok().map(|i| self.coords[i].as_slice())
    }

    /// Injective and median-preserving into the product of chains.
    pub fn verify(&self, a: &FiniteMedianAlgebra) -> Check {
        let mut sorted: Vec<&Vec<u16>> = self.coords.iter().collect();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            let c = sorted.windows(2).find(|w| w[0] == w[1]).unwrap()[0];
            let dup: Vec<usize> =
                self.members.iter().zip(&self.coords).filter(|(_, k)| *k == c).map(|(&z, _)| z).collect();
            return Err(Violation::new("chain embedding is not injective", dup));
        }
        for (i, &p) in self.members.iter().enumerate() {
            for (j, &q) in self.members.iter().enumerate().skip(i) {
                for (k, &r) in self.members.iter().enumerate().skip(j) {
                    let m = a.median(p, q, r);
                    let Some(cm) = self.coordinates_of(m) else {
                        return Err(Violation::new("median leaves the interval", vec![p, q, r]));
                    };
                    let ok = (0..self.factors.len())
                        .all(|t| cm[t] == median3(self.coords[i][t], self.coords[j][t], self.coords[k][t]));
                    if !ok {
                        return Err(Violation::new("chain embedding does not preserve the median", vec![p, q, r]));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_walls_are_cuts() {
        let c = FiniteMedianAlgebra::chain(5).unwrap();
        let ws = c.walls().unwrap();
        assert_eq!(ws.len(), 4);
        assert_eq!(ws.separating(0, 4).count(), 4);
        assert_eq!(ws.rank().unwrap(), 1);
        assert!(!ws.crossing(0, 1));
    }

    #[test]
    fn cube_walls_are_coordinates() {
        let c = FiniteMedianAlgebra::hypercube(3).unwrap();
        let ws = c.walls().unwrap();
        assert_eq!(ws.len(), 3);
        assert_eq!(ws.rank().unwrap(), 3);
        let o = c.index_of_label(&[0, 0, 0]).unwrap();
        let t = c.index_of_label(&[1, 1, 0]).unwrap();
        let sep = ws.separating_walls(o, t);
        assert_eq!(sep.len(), 2);
        for w in sep {
            let moved: Vec<usize> = (0..3)
                .filter(|&i| {
                    let mut l = [0u16; 3];
                    l[i] = 1;
                    w.separates(o, c.index_of_label(&l).unwrap())
                })
                .collect();
            assert!(moved == [0] || moved == [1]);
        }
        let fp = ws.fingerprint(o);
        assert!(fp.sets[o].is_empty());
        assert!(fp.sets[c.index_of_label(&[1, 1, 1]).unwrap()].is_full());
        assert!(fp.is_injective());
    }

    #[test]
    fn square_walls_cross() {
        let sq = FiniteMedianAlgebra::hypercube(2).unwrap();
        let ws = sq.walls().unwrap();
        assert!(ws.crossing(0, 1));
        assert!(!ws.crossing(0, 0));
    }

    #[test]
    fn starlet_has_one_wall_per_leaf() {
        for n in 2..=6 {
            let s = FiniteMedianAlgebra::starlet(n).unwrap();
            let ws = s.walls().unwrap();
            assert_eq!(ws.len(), n);
            assert_eq!(ws.rank().unwrap(), 1);
        }
    }

    #[test]
    fn degenerate_rank() {
        assert_eq!(FiniteMedianAlgebra::chain(1).unwrap().rank().unwrap(), 0);
        assert_eq!(FiniteMedianAlgebra::chain(2).unwrap().rank().unwrap(), 1);
    }

    #[test]
    fn product_rank_adds() {
        let c3 = FiniteMedianAlgebra::chain(3).unwrap();
        let p = FiniteMedianAlgebra::product(&c3, &c3).unwrap();
        assert_eq!(p.rank().unwrap(), 2);
    }

    #[test]
    fn dilworth_classes() {
        let c = FiniteMedianAlgebra::chain(4).unwrap();
        let ws = c.walls().unwrap();
        let classes = ws.dilworth_colouring(0, 3).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].len(), 3);
        let emb = ws.interval_chain_embedding(&c, 0, 3).unwrap();
        assert_eq!(emb.coords, [vec![0], vec![1], vec![2], vec![3]]);

        let sq = FiniteMedianAlgebra::hypercube(2).unwrap();
        let ws = sq.walls().unwrap();
        let classes = ws.dilworth_colouring(0, 3).unwrap();
        assert_eq!(classes.len(), 2);
        assert!(classes.iter().all(|c| c.len() == 1));
        let emb = ws.interval_chain_embedding(&sq, 0, 3).unwrap();
        assert_eq!(emb.factors, [2, 2]);

        let cube = FiniteMedianAlgebra::hypercube(3).unwrap();
        let ws = cube.walls().unwrap();
        assert_eq!(ws.dilworth_colouring(0, 7).unwrap().len(), 3);
        assert!(ws.dilworth_colouring(2, 2).is_err());
    }
}
