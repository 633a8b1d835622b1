//! Shadows, branches and the intrinsic uniformity generated by chain
//! intervals, with the separation and compatibility checks built on it.
//!
//! Notation: `shadow(u, v) = {x : med(u, x, v) = u}` is the gate fibre over
//! `u` for the retraction onto `[u, v]`, and `branch(u, v)` is its
//! complement. The subbasic cover of a chain pair is
//! `{branch(v, u), branch(u, v)}`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::FiniteMedianAlgebra;
use crate::cover::{total_wedge, Cover, CoverFamily};
use crate::error::{MedianError, Violation};
use crate::iso::Automorphism;
use crate::mask::SubsetMask;
use crate::Check;

/// Above this size continuity of the median is checked on random triples.
pub const EXHAUSTIVE_CONTINUITY_LIMIT: usize = 32;
pub const CONTINUITY_SAMPLES: usize = 20_000;
const CONTINUITY_SEED: u64 = 0x6d65_6461_6c67_0002;

impl FiniteMedianAlgebra {
    pub fn shadow(&self, u: usize, v: usize) -> SubsetMask {
        SubsetMask::from_fn(self.len(), |x| self.median(u, x, v) == u)
    }

    /// Complement of the shadow; requires `u != v`.
    pub fn branch(&self, u: usize, v: usize) -> Result<SubsetMask, MedianError> {
        if u == v {
            return Err(MedianError::DegeneratePair { element: u });
        }
        Ok(self.shadow(u, v).complement())
    }

    /// `{branch(v, u), branch(u, v)}` for a nontrivial chain interval.
    pub fn subbasic_cover(&self, u: usize, v: usize) -> Result<Cover, MedianError> {
        if u == v {
            return Err(MedianError::DegeneratePair { element: u });
        }
        if !self.is_chain_interval(u, v) {
            return Err(MedianError::NotAChainInterval { x: u, y: v });
        }
        Ok(self.subbasic_cover_unchecked(u, v))
    }

    fn subbasic_cover_unchecked(&self, u: usize, v: usize) -> Cover {
        let a = self.shadow(v, u).complement();
        let b = self.shadow(u, v).complement();
        Cover::new(self.len(), vec![a, b]).expect("branches of a pair cover the carrier")
    }

    /// One subbasic cover per nontrivial chain interval, deduplicated.
    pub fn chain_subbase(&self) -> UniformSubbase {
        UniformSubbase::from_pairs(self, &self.chain_pairs())
    }

    /// Subbasic covers of adjacent pairs only.
    pub fn adjacent_subbase(&self) -> UniformSubbase {
        UniformSubbase::from_pairs(self, &self.adjacent_pairs())
    }
}

/// A subbasic cover together with every chain pair generating it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubbaseEntry {
    pub pairs: Vec<(usize, usize)>,
    pub cover: Cover,
}

/// The two-branch covers of a set of chain pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformSubbase {
    universe: usize,
    entries: Vec<SubbaseEntry>,
}

impl UniformSubbase {
    /// Pairs must be nontrivial chain pairs of `a`.
    pub fn from_pairs(a: &FiniteMedianAlgebra, pairs: &[(usize, usize)]) -> Self {
        let mut entries: Vec<SubbaseEntry> = Vec::new();
        for &(u, v) in pairs {
            let cover = a.subbasic_cover_unchecked(u, v);
            match entries.iter_mut().find(|e| e.cover == cover) {
                Some(e) => e.pairs.push((u, v)),
                None => entries.push(SubbaseEntry { pairs: vec![(u, v)], cover }),
            }
        }
        UniformSubbase { universe: a.len(), entries }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Number of distinct covers.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[SubbaseEntry] {
        &self.entries
    }

    /// All generating pairs, in generation order per cover.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().flat_map(|e| e.pairs.iter().copied())
    }

    pub fn pair_count(&self) -> usize {
        self.entries.iter().map(|e| e.pairs.len()).sum()
    }

    pub fn covers(&self) -> impl Iterator<Item = &Cover> {
        self.entries.iter().map(|e| &e.cover)
    }

    pub fn family(&self) -> CoverFamily {
        CoverFamily::from_covers(self.universe, self.covers().cloned().collect()).expect("same carrier")
    }

    /// Wedge of all subbasic covers; `{X}` for an empty subbase.
    pub fn total_wedge(&self) -> Cover {
        total_wedge(self.universe, self.covers())
    }

    /// Whether `c` lies in the generated uniformity.
    pub fn contains(&self, c: &Cover) -> Result<bool, MedianError> {
        self.total_wedge().refines(c)
    }

    /// The open subbase: every branch occurring in a subbasic cover.
    pub fn branches(&self) -> Vec<SubsetMask> {
        let mut out: Vec<SubsetMask> = self.covers().flat_map(|c| c.members().iter().cloned()).collect();
        out.sort();
        out.dedup();
        out
    }
}

pub fn uniformity_contains(sb: &UniformSubbase, c: &Cover) -> Result<bool, MedianError> {
    sb.contains(c)
}

/// For every `x`, the intersection of its stars over the subbase is `{x}`.
/// The one-point algebra is declared Hausdorff.
pub fn is_hausdorff_um(a: &FiniteMedianAlgebra, sb: &UniformSubbase) -> bool {
    hausdorff_witness(a, sb).is_none()
}

/// An element whose star intersection is not a singleton.
pub fn hausdorff_witness(a: &FiniteMedianAlgebra, sb: &UniformSubbase) -> Option<(usize, SubsetMask)> {
    if a.len() == 1 {
        return None;
    }
    a.elements().find_map(|x| {
        let mut st = SubsetMask::full(a.len());
        for c in sb.covers() {
            st.intersect_with(&c.star(x));
        }
        (st.count() != 1).then_some((x, st))
    })
}

/// A chain pair `(u, v)` separating `x` from `y`: `gate(u, v, x) = u` and
/// `gate(u, v, y) = v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairWitness {
    pub x: usize,
    pub y: usize,
    pub u: usize,
    pub v: usize,
}

impl PairWitness {
    pub fn verify_t2m(&self, a: &FiniteMedianAlgebra) -> Check {
        let ok = self.u != self.v
            && a.is_chain_interval(self.u, self.v)
            && a.gate(self.u, self.v, self.x) == self.u
            && a.gate(self.u, self.v, self.y) == self.v;
        ok.then_some(())
            .ok_or_else(|| Violation::new("gate separation witness fails", vec![self.x, self.y, self.u, self.v]))
    }

    /// `[u, v] ⊆ [x, y]` is a nontrivial chain with `u <_x v`.
    pub fn verify_chain_solvable(&self, a: &FiniteMedianAlgebra) -> Check {
        let xy = a.interval_mask(self.x, self.y);
        let ok = self.u != self.v
            && xy.contains(self.u)
            && xy.contains(self.v)
            && a.leq(self.x, self.u, self.v)
            && a.is_chain_interval(self.u, self.v);
        ok.then_some(())
            .ok_or_else(|| Violation::new("chain-solvability witness fails", vec![self.x, self.y, self.u, self.v]))
    }

    /// Transports a gate separation witness to a chain inside `[x, y]` by
    /// gating its endpoints onto `[x, y]`.
    pub fn to_chain_solvable(&self, a: &FiniteMedianAlgebra) -> PairWitness {
        PairWitness { u: a.gate(self.x, self.y, self.u), v: a.gate(self.x, self.y, self.v), ..*self }
    }
}

/// Searches the chain pairs of the subbase for a gate separation of every
/// pair `x < y`. Each witness is re-verified.
pub fn t2m_check(a: &FiniteMedianAlgebra, sb: &UniformSubbase) -> Result<Vec<PairWitness>, Violation> {
    let pairs: Vec<(usize, usize)> = sb.pairs().flat_map(|(u, v)| [(u, v), (v, u)]).collect();
    let mut out = Vec::new();
    for x in a.elements() {
        for y in x + 1..a.len() {
            let (u, v) = pairs
                .iter()
                .copied()
                .find(|&(u, v)| a.gate(u, v, x) == u && a.gate(u, v, y) == v)
                .ok_or_else(|| Violation::new("no chain interval separates the pair", vec![x, y]))?;
            let w = PairWitness { x, y, u, v };
            w.verify_t2m(a)?;
            out.push(w);
        }
    }
    Ok(out)
}

/// For every pair `x < y`, walks a maximal chain of `([x, y], ≤_x)` and
/// returns its first step, which spans a two-element chain interval.
pub fn chain_solvable_check(a: &FiniteMedianAlgebra) -> Result<Vec<PairWitness>, Violation> {
    let mut out = Vec::new();
    for x in a.elements() {
        for y in x + 1..a.len() {
            let xy = a.interval_mask(x, y);
            let chain = maximal_chain(a, x, &xy);
            let w = chain
                .windows(2)
                .map(|s| PairWitness { x, y, u: s[0], v: s[1] })
                .find(|w| w.verify_chain_solvable(a).is_ok())
                .ok_or_else(|| Violation::new("no chain interval inside the interval", vec![x, y]))?;
            out.push(w);
        }
    }
    Ok(out)
}

/// A maximal chain from `base` in `(s, ≤_base)`, stepping to a minimal
/// strict upper bound each time.
fn maximal_chain(a: &FiniteMedianAlgebra, base: usize, s: &SubsetMask) -> Vec<usize> {
    let mut chain = vec![base];
    let mut cur = base;
    loop {
        let above: Vec<usize> = s.iter().filter(|&z| z != cur && a.leq(base, cur, z)).collect();
        let Some(&next) = above.iter().find(|&&z| above.iter().all(|&w| w == z || !a.leq(base, w, z))) else {
            return chain;
        };
        chain.push(next);
        cur = next;
    }
}

/// For every subbasic cover `{H0, H1}` and every choice of three members,
/// the median image of `Ha × Hb × Hc` lies inside one member.
///
/// Exhaustive for `n <= 32`, otherwise on seeded random triples.
pub fn median_uniform_continuity_check(a: &FiniteMedianAlgebra, sb: &UniformSubbase) -> Check {
    let n = a.len();
    let mut rng = ChaCha8Rng::seed_from_u64(CONTINUITY_SEED);
    let triples: Vec<[usize; 3]> = if n <= EXHAUSTIVE_CONTINUITY_LIMIT {
        let mut t = Vec::with_capacity(n * n * n);
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    t.push([p, q, r]);
                }
            }
        }
        t
    } else {
        (0..CONTINUITY_SAMPLES).map(|_| core::array::from_fn(|_| rng.gen_range(0..n))).collect()
    };
    for entry in sb.entries() {
        let h = entry.cover.members();
        // escaped[combo][i]: some image of the combo lies outside member i
        let mut escaped = [[false; 2]; 8];
        let mut witness: [Option<[usize; 3]>; 8] = [None; 8];
        for t in &triples {
            let m = a.median(t[0], t[1], t[2]);
            let outside = [!h[0].contains(m), !h[1].contains(m)];
            for combo in 0..8 {
                let fits = (0..3).all(|k| h[(combo >> k) & 1].contains(t[k]));
                if fits {
                    for i in 0..2 {
                        if outside[i] {
                            escaped[combo][i] = true;
                            witness[combo] = Some(*t);
                        }
                    }
                    if escaped[combo][0] && escaped[combo][1] {
                        let (u, v) = entry.pairs[0];
                        let w = witness[combo].unwrap();
                        return Err(Violation::new(
                            format!("median of a product member escapes the subbasic cover of ({u}, {v})"),
                            vec![w[0], w[1], w[2]],
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Positions of the members of a chain, by index.
fn chain_rank(n: usize, chain: &[usize]) -> Vec<usize> {
    let mut rank = vec![usize::MAX; n];
    for (i, &z) in chain.iter().enumerate() {
        rank[z] = i;
    }
    rank
}

/// The filter generated by the chain subbase equals the initial filter of
/// the gate retractions onto chain intervals, each carrying its two-ray
/// covers. The ray preimage identities are checked pointwise on the way.
pub fn initial_uniformity_check(a: &FiniteMedianAlgebra, sb: &UniformSubbase) -> Check {
    let n = a.len();
    let mut pulled = CoverFamily::new(n);
    for (p, q) in sb.pairs() {
        for (u, v) in [(p, q), (q, p)] {
            let chain = a.chain_order(u, v).ok_or_else(|| Violation::new("subbase pair is not a chain", vec![u, v]))?;
            let rank = chain_rank(n, &chain);
            let pos: Vec<usize> = a.elements().map(|z| rank[a.gate(u, v, z)]).collect();
            for (i, &d) in chain.iter().enumerate() {
                let below = SubsetMask::from_fn(n, |z| pos[z] < i);
                let above = SubsetMask::from_fn(n, |z| pos[z] > i);
                if d != u && below != a.branch(d, u)? {
                    return Err(Violation::new("preimage of the lower ray is not the branch", vec![u, v, d]));
                }
                if d != v && above != a.branch(d, v)? {
                    return Err(Violation::new("preimage of the upper ray is not the branch", vec![u, v, d]));
                }
            }
            for i in 0..chain.len() {
                for j in i + 1..chain.len() {
                    let lower = SubsetMask::from_fn(n, |z| pos[z] < j);
                    let upper = SubsetMask::from_fn(n, |z| pos[z] > i);
                    pulled.push(Cover::new(n, vec![lower, upper])?)?;
                }
            }
        }
    }
    if !sb.family().same_filter(&pulled)? {
        return Err(Violation::new("chain subbase and gate pullbacks generate different filters", Vec::new()));
    }
    Ok(())
}

/// Checks, on `A × B`: (i) a product interval is a chain iff at most one
/// coordinate interval is nontrivial and that one is a chain; (ii) the
/// chain subbase of the product and the pullbacks of the factor subbases
/// along the projections generate the same filter.
pub fn product_uniformity_check(a: &FiniteMedianAlgebra, b: &FiniteMedianAlgebra) -> Check {
    let p = FiniteMedianAlgebra::product(a, b)?;
    let nb = b.len();
    for s in p.elements() {
        for t in s + 1..p.len() {
            let (i1, j1, i2, j2) = (s / nb, s % nb, t / nb, t % nb);
            let expected = if i1 == i2 {
                b.is_chain_interval(j1, j2)
            } else if j1 == j2 {
                a.is_chain_interval(i1, i2)
            } else {
                false
            };
            if p.is_chain_interval(s, t) != expected {
                return Err(Violation::new("product chain intervals disagree with the coordinate rule", vec![s, t]));
            }
        }
    }
    let proj_a: Vec<usize> = p.elements().map(|s| s / nb).collect();
    let proj_b: Vec<usize> = p.elements().map(|s| s % nb).collect();
    let mut factors = CoverFamily::new(p.len());
    for c in a.chain_subbase().covers() {
        factors.push(c.pullback(&proj_a))?;
    }
    for c in b.chain_subbase().covers() {
        factors.push(c.pullback(&proj_b))?;
    }
    if !p.chain_subbase().family().same_filter(&factors)? {
        return Err(Violation::new("product uniformity differs from the product of factor uniformities", Vec::new()));
    }
    Ok(())
}

/// The intrinsic uniformity of a convex subset equals the trace of the
/// ambient uniformity.
pub fn convex_restriction_check(a: &FiniteMedianAlgebra, sb: &UniformSubbase, c: &SubsetMask) -> Check {
    if c.is_empty() || !a.is_convex(c) {
        return Err(MedianError::NotConvex.into());
    }
    let (sub, _) = a.induced(c)?;
    let own = sub.chain_subbase().total_wedge();
    let traced = sb.total_wedge().trace(c);
    if !(own.refines(&traced)? && traced.refines(&own)?) {
        return Err(Violation::new("intrinsic uniformity of the convex subset differs from the trace", c.to_vec()));
    }
    Ok(())
}

/// `g(branch(u, v)) = branch(g u, g v)` for every chain pair in both
/// orientations, and `g` permutes the subbasic covers.
pub fn equivariance_check(a: &FiniteMedianAlgebra, sb: &UniformSubbase, g: &Automorphism) -> Check {
    for (p, q) in sb.pairs() {
        for (u, v) in [(p, q), (q, p)] {
            if g.apply_mask(&a.branch(u, v)?) != a.branch(g.apply(u), g.apply(v))? {
                return Err(Violation::new("automorphism does not carry branch to branch", vec![u, v]));
            }
        }
    }
    for c in sb.covers() {
        let image = Cover::new(a.len(), c.members().iter().map(|m| g.apply_mask(m)).collect())?;
        if !sb.covers().any(|d| *d == image) {
            return Err(Violation::new("automorphism image of a subbasic cover is not subbasic", Vec::new()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube3() -> FiniteMedianAlgebra {
        FiniteMedianAlgebra::hypercube(3).unwrap()
    }

    fn set(a: &FiniteMedianAlgebra, labels: &[[u16; 3]]) -> SubsetMask {
        SubsetMask::from_indices(a.len(), labels.iter().map(|l| a.index_of_label(l).unwrap()))
    }

    #[test]
    fn cube_shadows_and_branches() {
        let c = cube3();
        let x = c.index_of_label(&[0, 0, 0]).unwrap();
        let y = c.index_of_label(&[1, 1, 0]).unwrap();
        let z = c.index_of_label(&[1, 0, 0]).unwrap();
        assert_eq!(c.shadow(y, x), set(&c, &[[1, 1, 0], [1, 1, 1]]));
        assert_eq!(c.branch(y, x).unwrap().count(), 6);
        assert_eq!(c.shadow(y, z), set(&c, &[[0, 1, 0], [1, 1, 0], [0, 1, 1], [1, 1, 1]]));
        assert_eq!(c.branch(y, z).unwrap(), set(&c, &[[0, 0, 0], [1, 0, 0], [0, 0, 1], [1, 0, 1]]));
        assert!(c.shadow(x, x).is_full());
        assert_eq!(c.branch(x, x), Err(MedianError::DegeneratePair { element: x }));
    }

    #[test]
    fn chain_branches_are_rays() {
        let c3 = FiniteMedianAlgebra::chain(3).unwrap();
        assert_eq!(c3.branch(0, 2).unwrap().to_vec(), [1, 2]);
        let cov = c3.subbasic_cover(0, 2).unwrap();
        assert_eq!(cov.members().len(), 2);
        assert!(!cov.is_partition());
        assert!(c3.subbasic_cover(0, 1).unwrap().is_partition());
    }

    #[test]
    fn non_chain_pair_rejected() {
        let c = cube3();
        assert_eq!(c.subbasic_cover(0, 6), Err(MedianError::NotAChainInterval { x: 0, y: 6 }));
    }

    #[test]
    fn square_subbase_dedups_parallel_edges() {
        let sq = FiniteMedianAlgebra::hypercube(2).unwrap();
        let sb = sq.chain_subbase();
        assert_eq!(sb.pair_count(), 4);
        assert_eq!(sb.len(), 2);
        assert!(FiniteMedianAlgebra::chain(1).unwrap().chain_subbase().is_empty());
    }

    #[test]
    fn star_cover_from_two_rays() {
        // in C_4, the rays below 2 and above 1 give {{0,1},{2,3}}
        let c4 = FiniteMedianAlgebra::chain(4).unwrap();
        let cov = c4.subbasic_cover(1, 2).unwrap();
        let expect =
            Cover::new(4, vec![SubsetMask::from_indices(4, [0, 1]), SubsetMask::from_indices(4, [2, 3])]).unwrap();
        assert_eq!(cov.wedge(&cov).unwrap(), expect);
    }

    #[test]
    fn cube_uniformity_is_discrete() {
        let c = cube3();
        let sb = c.chain_subbase();
        assert!(uniformity_contains(&sb, &Cover::discrete(8)).unwrap());
        assert!(uniformity_contains(&sb, &Cover::trivial(8)).unwrap());
        assert!(is_hausdorff_um(&c, &sb));
    }

    #[test]
    fn separation_witnesses() {
        let c = cube3();
        let sb = c.chain_subbase();
        let t2 = t2m_check(&c, &sb).unwrap();
        assert_eq!(t2.len(), 28);
        for w in &t2 {
            w.to_chain_solvable(&c).verify_chain_solvable(&c).unwrap();
        }
        let cs = chain_solvable_check(&c).unwrap();
        let w = cs.iter().find(|w| w.x == 0 && w.y == 7).unwrap();
        assert!(c.is_adjacent(w.u, w.v));
        let c4 = FiniteMedianAlgebra::chain(4).unwrap();
        let sb4 = c4.chain_subbase();
        assert!(t2m_check(&c4, &sb4).unwrap().iter().all(|w| w.verify_t2m(&c4).is_ok()));
    }

    #[test]
    fn uniform_checks_on_small_algebras() {
        for a in [cube3(), FiniteMedianAlgebra::chain(5).unwrap(), FiniteMedianAlgebra::starlet(4).unwrap()] {
            let sb = a.chain_subbase();
            median_uniform_continuity_check(&a, &sb).unwrap();
            initial_uniformity_check(&a, &sb).unwrap();
            convex_restriction_check(&a, &sb, &SubsetMask::full(a.len())).unwrap();
        }
        let c3 = FiniteMedianAlgebra::chain(3).unwrap();
        product_uniformity_check(&c3, &c3).unwrap();
        product_uniformity_check(&c3, &FiniteMedianAlgebra::chain(1).unwrap()).unwrap();
    }

    #[test]
    fn convex_restriction_rejects_nonconvex() {
        let sq = FiniteMedianAlgebra::hypercube(2).unwrap();
        let sb = sq.chain_subbase();
        assert!(convex_restriction_check(&sq, &sb, &SubsetMask::from_indices(4, [0, 3])).is_err());
    }

    #[test]
    fn reversal_is_equivariant() {
        let c5 = FiniteMedianAlgebra::chain(5).unwrap();
        let sb = c5.chain_subbase();
        let rev = Automorphism { perm: vec![4, 3, 2, 1, 0] };
        equivariance_check(&c5, &sb, &rev).unwrap();
        assert_eq!(rev.apply_mask(&c5.branch(0, 2).unwrap()), c5.branch(4, 2).unwrap());
        let bad = Automorphism { perm: vec![1, 0, 2, 3, 4] };
        assert!(equivariance_check(&c5, &sb, &bad).is_err());
    }
}
