//! Finite topologies as minimal-neighbourhood maps: the intrinsic topology
//! generated by branches, the halfspace topology, gate-initial topologies,
//! isolation counts, the wall metric and geometric branching.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::FiniteMedianAlgebra;
use crate::error::{MedianError, Violation};
use crate::mask::SubsetMask;
use crate::uniformity::UniformSubbase;
use crate::walls::WallSet;
use crate::Check;

pub const EXHAUSTIVE_LIPSCHITZ_LIMIT: usize = 16;
pub const LIPSCHITZ_SAMPLES: usize = 100_000;
const LIPSCHITZ_SEED: u64 = 0x6d65_6461_6c67_0003;
/// Candidate-set bound for exact minimum set cover.
pub const MAX_EXACT_COVER_SETS: usize = 256;

/// A topology on `0..n`, stored as the smallest open set around each point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTopology {
    min_nbhd: Vec<SubsetMask>,
}

impl FiniteTopology {
    /// The topology generated by an open subbase. Points in no subbasic
    /// open get the whole carrier.
    pub fn from_subbase(n: usize, subbase: &[SubsetMask]) -> Self {
        let min_nbhd = (0..n)
            .map(|x| {
                let mut m = SubsetMask::full(n);
                for o in subbase.iter().filter(|o| o.contains(x)) {
                    m.intersect_with(o);
                }
                m
            })
            .collect();
        FiniteTopology { min_nbhd }
    }

    pub fn indiscrete(n: usize) -> Self {
        FiniteTopology { min_nbhd: vec![SubsetMask::full(n); n] }
    }

    pub fn discrete(n: usize) -> Self {
        FiniteTopology { min_nbhd: (0..n).map(|x| SubsetMask::singleton(n, x)).collect() }
    }

    pub fn len(&self) -> usize {
        self.min_nbhd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.min_nbhd.is_empty()
    }

    pub fn min_nbhd(&self, x: usize) -> &SubsetMask {
        &self.min_nbhd[x]
    }

    pub fn is_discrete(&self) -> bool {
        self.min_nbhd.iter().all(|m| m.count() == 1)
    }

    pub fn is_open(&self, s: &SubsetMask) -> bool {
        s.iter().all(|x| self.min_nbhd[x].is_subset(s))
    }

    /// Every open set of `self` is open in `finer`.
    pub fn is_coarser_or_equal(&self, finer: &FiniteTopology) -> bool {
        self.len() == finer.len() && (0..self.len()).all(|x| finer.min_nbhd[x].is_subset(&self.min_nbhd[x]))
    }
}

impl FiniteMedianAlgebra {
    /// The topology whose open subbase is the set of branches of chain pairs.
    pub fn tau_m(&self, sb: &UniformSubbase) -> FiniteTopology {
        FiniteTopology::from_subbase(self.len(), &sb.branches())
    }

    pub fn halfspace_topology(&self, walls: &WallSet) -> FiniteTopology {
        let sides: Vec<SubsetMask> = walls.walls().iter().flat_map(|w| [w.side_a.clone(), w.side_b.clone()]).collect();
        FiniteTopology::from_subbase(self.len(), &sides)
    }

    /// The initial topology of the gate retractions onto target intervals,
    /// each carrying its own intrinsic topology. Targets are the chain
    /// intervals, or every nontrivial interval when `all_intervals` is set.
    pub fn gate_initial_topology(&self, all_intervals: bool) -> Result<FiniteTopology, MedianError> {
        let n = self.len();
        let mut nbhd = vec![SubsetMask::full(n); n];
        for u in self.elements() {
            for v in u + 1..n {
                if !all_intervals && !self.is_chain_interval(u, v) {
                    continue;
                }
                let mask = self.interval_mask(u, v);
                let (sub, members) = self.induced(&mask)?;
                let target = sub.tau_m(&sub.chain_subbase());
                let mut pos = vec![usize::MAX; n];
                for (k, &m) in members.iter().enumerate() {
                    pos[m] = k;
                }
                let gate: Vec<usize> = self.elements().map(|z| pos[self.gate(u, v, z)]).collect();
                for x in self.elements() {
                    let around = target.min_nbhd(gate[x]);
                    nbhd[x].intersect_with(&SubsetMask::from_fn(n, |z| around.contains(gate[z])));
                }
            }
        }
        Ok(FiniteTopology { min_nbhd: nbhd })
    }
}

/// Minimum number of subbasic branches whose intersection is `{x}`.
///
/// The degree of `x` in the median graph is a lower bound, since a convex
/// branch containing `x` misses at most one neighbour of `x`; the branches
/// towards each neighbour attain it. When a greedy cover does not already
/// meet the bound the exact minimum is found by set-cover search.
pub fn min_isolating_branches(a: &FiniteMedianAlgebra, sb: &UniformSubbase, x: usize) -> Result<usize, MedianError> {
    let n = a.len();
    let around: Vec<SubsetMask> = sb.branches().into_iter().filter(|b| b.contains(x)).collect();
    let mut nbhd = SubsetMask::full(n);
    for b in &around {
        nbhd.intersect_with(b);
    }
    if nbhd.count() != 1 {
        return Err(MedianError::NotIsolated { element: x });
    }
    let neighbours = a.neighbours(x);
    let mut core = SubsetMask::full(n);
    for &v in &neighbours {
        core.intersect_with(&a.branch(v, x)?);
    }
    if core != SubsetMask::singleton(n, x) {
        return Err(MedianError::InternalConsistency { reason: "neighbour branches do not isolate the point" });
    }
    for b in &around {
        if neighbours.iter().filter(|&&v| !b.contains(v)).count() > 1 {
            return Err(MedianError::InternalConsistency { reason: "a branch excludes two neighbours" });
        }
    }
    let lower = neighbours.len();
    let target = SubsetMask::singleton(n, x).complement();
    let excluded: Vec<SubsetMask> = around.iter().map(SubsetMask::complement).collect();
    let greedy = greedy_cover(&target, &excluded).len();
    if greedy == lower {
        return Ok(lower);
    }
    let exact = exact_cover(&target, &excluded).map(|c| c.len());
    match exact {
        Some(k) if k >= lower => Ok(k),
        _ => Err(MedianError::InternalConsistency { reason: "isolation bounds do not meet" }),
    }
}

fn greedy_cover(target: &SubsetMask, sets: &[SubsetMask]) -> Vec<usize> {
    let mut left = target.clone();
    let mut chosen = Vec::new();
    while !left.is_empty() {
        let Some((i, gain)) = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (i, s.intersection(&left).count()))
            .max_by_key(|&(i, g)| (g, usize::MAX - i))
        else {
            break;
        };
        if gain == 0 {
            break;
        }
        left = left.difference(&sets[i]);
        chosen.push(i);
    }
    chosen
}

/// A minimum family of `sets` whose union contains `target`, or `None` if
/// no family does or the instance exceeds the search bound.
pub fn exact_cover(target: &SubsetMask, sets: &[SubsetMask]) -> Option<Vec<usize>> {
    let universe = target.universe();
    let mut cands: Vec<(SubsetMask, usize)> =
        sets.iter().enumerate().map(|(i, s)| (s.intersection(target), i)).filter(|(s, _)| !s.is_empty()).collect();
    cands.sort_by(|a, b| b.0.count().cmp(&a.0.count()).then_with(|| a.0.cmp(&b.0)));
    cands.dedup_by(|a, b| a.0 == b.0);
    let mut kept: Vec<(SubsetMask, usize)> = Vec::new();
    for (s, i) in cands {
        if !kept.iter().any(|(k, _)| s.is_subset(k)) {
            kept.push((s, i));
        }
    }
    if kept.len() > MAX_EXACT_COVER_SETS {
        return None;
    }
    let mut reach = SubsetMask::empty(universe);
    for (s, _) in &kept {
        reach.union_with(s);
    }
    if !target.is_subset(&reach) {
        return None;
    }
    let mut best: Option<Vec<usize>> =
        Some(greedy_cover(target, &kept.iter().map(|k| k.0.clone()).collect::<Vec<_>>()));
    let mut current = Vec::new();
    search_cover(target.clone(), &kept, &mut current, &mut best);
    best.map(|b| {
        let mut out: Vec<usize> = b.into_iter().map(|k| kept[k].1).collect();
        out.sort_unstable();
        out
    })
}

fn search_cover(
    left: SubsetMask,
    sets: &[(SubsetMask, usize)],
    current: &mut Vec<usize>,
    best: &mut Option<Vec<usize>>,
) {
    let Some(_) = left.first() else {
        if best.as_ref().is_none_or(|b| current.len() < b.len()) {
            *best = Some(current.clone());
        }
        return;
    };
    let bound = best.as_ref().map_or(usize::MAX, Vec::len);
    let max_gain = sets.iter().map(|s| s.0.intersection(&left).count()).max().unwrap_or(0);
    if max_gain == 0 || current.len() + left.count().div_ceil(max_gain) >= bound {
        return;
    }
    // branch on the uncovered element with the fewest covering sets
    let pivot = left.iter().min_by_key(|&e| sets.iter().filter(|s| s.0.contains(e)).count()).expect("nonempty");
    for (k, s) in sets.iter().enumerate() {
        if s.0.contains(pivot) {
            current.push(k);
            search_cover(left.difference(&s.0), sets, current, best);
            current.pop();
        }
    }
}

/// Wall-count distance table, row-major `n × n`.
pub fn wall_metric(a: &FiniteMedianAlgebra, walls: &WallSet) -> Vec<u32> {
    let n = a.len();
    let mut d = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            d[x * n + y] = walls.distance(x, y) as u32;
        }
    }
    d
}

/// Metric axioms, interval additivity `z ∈ [x, y] ⟺ d(x,z)+d(z,y) = d(x,y)`,
/// and the Lipschitz bound `d(m(x1,y1,z1), m(x2,y2,z2)) <= d(x1,x2)+d(y1,y2)+d(z1,z2)`.
///
/// The Lipschitz bound is exhaustive for `n <= 16`, sampled above.
pub fn lipschitz_median_check(a: &FiniteMedianAlgebra, walls: &WallSet) -> Check {
    let n = a.len();
    let d = wall_metric(a, walls);
    let dist = |x: usize, y: usize| d[x * n + y];
    for x in 0..n {
        for y in 0..n {
            if (dist(x, y) == 0) != (x == y) || dist(x, y) != dist(y, x) {
                return Err(Violation::new("wall count is not a metric", vec![x, y]));
            }
            for z in 0..n {
                if dist(x, z) > dist(x, y) + dist(y, z) {
                    return Err(Violation::new("triangle inequality fails", vec![x, y, z]));
                }
                let between = a.median(x, y, z) == z;
                if between != (dist(x, z) + dist(z, y) == dist(x, y)) {
                    return Err(Violation::new("interval is not the metric interval", vec![x, y, z]));
                }
            }
        }
    }
    let lip = |t: [usize; 6]| {
        let lhs = dist(a.median(t[0], t[1], t[2]), a.median(t[3], t[4], t[5]));
        lhs <= dist(t[0], t[3]) + dist(t[1], t[4]) + dist(t[2], t[5])
    };
    if n <= EXHAUSTIVE_LIPSCHITZ_LIMIT {
        let total = n.pow(6);
        for code in 0..total {
            let mut c = code;
            let t: [usize; 6] = core::array::from_fn(|_| {
                let v = c % n;
                c /= n;
                v
            });
            if !lip(t) {
                return Err(Violation::new("median is not 1-Lipschitz", t.to_vec()));
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(LIPSCHITZ_SEED);
        for _ in 0..LIPSCHITZ_SAMPLES {
            let t: [usize; 6] = core::array::from_fn(|_| rng.gen_range(0..n));
            if !lip(t) {
                return Err(Violation::new("median is not 1-Lipschitz", t.to_vec()));
            }
        }
    }
    Ok(())
}

/// A finite intersection of branches around a point inside a metric ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchingWitness {
    pub x: usize,
    pub eps: u32,
    /// The branches used; empty when the ball is the whole carrier.
    pub branches: Vec<SubsetMask>,
    pub star: SubsetMask,
}

impl BranchingWitness {
    pub fn count(&self) -> usize {
        self.branches.len()
    }
}

/// Fewest branches containing `x` whose intersection lies in the open ball
/// `{y : d(x, y) < eps}`.
pub fn geometric_branching_check(
    a: &FiniteMedianAlgebra,
    sb: &UniformSubbase,
    walls: &WallSet,
    x: usize,
    eps: u32,
) -> Result<BranchingWitness, MedianError> {
    let n = a.len();
    let ball = SubsetMask::from_fn(n, |y| (walls.distance(x, y) as u32) < eps);
    let around: Vec<SubsetMask> = sb.branches().into_iter().filter(|b| b.contains(x)).collect();
    let outside = ball.complement();
    let excluded: Vec<SubsetMask> = around.iter().map(SubsetMask::complement).collect();
    let chosen = exact_cover(&outside, &excluded).ok_or(MedianError::NotIsolated { element: x })?;
    let branches: Vec<SubsetMask> = chosen.iter().map(|&i| around[i].clone()).collect();
    let mut star = SubsetMask::full(n);
    for b in &branches {
        star.intersect_with(b);
    }
    if !star.contains(x) || !star.is_subset(&ball) {
        return Err(MedianError::InternalConsistency { reason: "branch star leaves the ball" });
    }
    Ok(BranchingWitness { x, eps, branches, star })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_topology() {
        let one = FiniteMedianAlgebra::chain(1).unwrap();
        let t = one.tau_m(&one.chain_subbase());
        assert!(t.is_discrete());
        assert_eq!(t, FiniteTopology::indiscrete(1));
    }

    #[test]
    fn small_algebras_are_discrete() {
        for a in [
            FiniteMedianAlgebra::hypercube(3).unwrap(),
            FiniteMedianAlgebra::chain(5).unwrap(),
            FiniteMedianAlgebra::starlet(6).unwrap(),
        ] {
            let sb = a.chain_subbase();
            let t = a.tau_m(&sb);
            assert!(t.is_discrete());
            assert_eq!(a.halfspace_topology(&a.walls().unwrap()), t);
            assert_eq!(a.gate_initial_topology(false).unwrap(), t);
        }
        let c = FiniteMedianAlgebra::hypercube(3).unwrap();
        assert!(c.gate_initial_topology(true).unwrap().is_discrete());
    }

    #[test]
    fn isolation_counts() {
        let c3 = FiniteMedianAlgebra::chain(3).unwrap();
        assert_eq!(min_isolating_branches(&c3, &c3.chain_subbase(), 1).unwrap(), 2);
        let cube = FiniteMedianAlgebra::hypercube(3).unwrap();
        let sb = cube.chain_subbase();
        for x in 0..8 {
            assert_eq!(min_isolating_branches(&cube, &sb, x).unwrap(), 3);
        }
        for n in 2..=6 {
            let s = FiniteMedianAlgebra::starlet(n).unwrap();
            assert_eq!(min_isolating_branches(&s, &s.chain_subbase(), 0).unwrap(), n);
        }
    }

    #[test]
    fn metric_and_lipschitz() {
        let cube = FiniteMedianAlgebra::hypercube(3).unwrap();
        let ws = cube.walls().unwrap();
        let d = wall_metric(&cube, &ws);
        for x in 0..8 {
            for y in 0..8 {
                assert_eq!(d[x * 8 + y], (x ^ y).count_ones());
            }
        }
        lipschitz_median_check(&cube, &ws).unwrap();
    }

    #[test]
    fn geometric_branching() {
        let s = FiniteMedianAlgebra::starlet(5).unwrap();
        let (sb, ws) = (s.chain_subbase(), s.walls().unwrap());
        assert_eq!(geometric_branching_check(&s, &sb, &ws, 0, 1).unwrap().count(), 5);
        assert_eq!(geometric_branching_check(&s, &sb, &ws, 0, 3).unwrap().count(), 0);
        let cube = FiniteMedianAlgebra::hypercube(3).unwrap();
        let (sb, ws) = (cube.chain_subbase(), cube.walls().unwrap());
        assert_eq!(geometric_branching_check(&cube, &sb, &ws, 5, 1).unwrap().count(), 3);
    }

    #[test]
    fn exact_cover_basics() {
        let t = SubsetMask::full(4);
        let sets = [
            SubsetMask::from_indices(4, [0, 1]),
            SubsetMask::from_indices(4, [2]),
            SubsetMask::from_indices(4, [1, 2, 3]),
            SubsetMask::from_indices(4, [0]),
        ];
        assert_eq!(exact_cover(&t, &sets).unwrap().len(), 2);
        assert!(exact_cover(&t, &sets[1..2]).is_none());
    }
}
