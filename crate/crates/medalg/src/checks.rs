//! The check registry: one executable predicate per verified statement,
//! run over every corpus instance (or once, for statements about fixed
//! symbolic objects).
//!
//! Quantifiers are exhaustive up to per-check size thresholds and sampled
//! above them with a stream seeded by `(seed, check id, instance id)`, so
//! a run is reproducible from its seed.

use std::cell::OnceCell;
use std::collections::VecDeque;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use medalg_core::calculus::check_homomorphism;
use medalg_core::periodic::{periodic_square_witness, verify_square, PeriodicBiSequence};
use medalg_core::roller::{roller_check, truncation_consistency, MAX_ORIENTATION_WALLS};
use medalg_core::symbolic::{symbolic_mmc, ExtInt, StarletCompactification, SymbolicFactor};
use medalg_core::topology::{
    geometric_branching_check, lipschitz_median_check, min_isolating_branches, wall_metric, FiniteTopology,
};
use medalg_core::uniformity::{
    chain_solvable_check, convex_restriction_check, equivariance_check, initial_uniformity_check, is_hausdorff_um,
    median_uniform_continuity_check, product_uniformity_check, t2m_check,
};
use medalg_core::{
    Cover, CoverFamily, FiniteMedianAlgebra, MedianError, SubsetMask, UniformSubbase, Violation, WallSet,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::corpus::Instance;
use crate::io::AlgebraFile;
use crate::oracle;
use crate::report::{TheoremReport, Verdict, Witness};
use crate::HarnessError;

/// Instance id used for checks that run once per registry run.
pub const GLOBAL_INSTANCE: &str = "global";

/// Whether a check applied to its instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ran {
    Checked,
    Skipped,
}

pub type Run = Result<Ran, Violation>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    PerInstance,
    Global,
}

pub struct CheckSpec {
    pub id: &'static str,
    pub statement: &'static str,
    pub scope: Scope,
    run: fn(&Ctx) -> Run,
}

/// One instance plus lazily computed shared structure.
pub struct Ctx<'a> {
    pub instance: &'a Instance,
    seed: u64,
    check: &'static str,
    walls: OnceCell<Result<WallSet, MedianError>>,
    subbase: OnceCell<UniformSubbase>,
    tau: OnceCell<FiniteTopology>,
}

impl<'a> Ctx<'a> {
    fn new(instance: &'a Instance, seed: u64) -> Self {
        Ctx { instance, seed, check: "", walls: OnceCell::new(), subbase: OnceCell::new(), tau: OnceCell::new() }
    }

    pub fn a(&self) -> &FiniteMedianAlgebra {
        &self.instance.algebra
    }

    fn n(&self) -> usize {
        self.a().len()
    }

    fn walls(&self) -> Result<&WallSet, Violation> {
        self.walls.get_or_init(|| self.a().walls()).as_ref().map_err(|e| e.clone().into())
    }

    fn sb(&self) -> &UniformSubbase {
        self.subbase.get_or_init(|| self.a().chain_subbase())
    }

    fn tau(&self) -> &FiniteTopology {
        self.tau.get_or_init(|| self.a().tau_m(self.sb()))
    }

    /// Deterministic per (seed, check, instance).
    fn rng(&self) -> ChaCha8Rng {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for part in [self.check, self.instance.id.as_str()] {
            for b in part.bytes().chain([0xff]) {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        ChaCha8Rng::seed_from_u64(self.seed ^ h)
    }
}

fn fail(reason: impl Into<String>, elements: Vec<usize>) -> Violation {
    Violation::new(reason, elements)
}

fn ensure(ok: bool, reason: &str, elements: Vec<usize>) -> Result<(), Violation> {
    if ok {
        Ok(())
    } else {
        Err(fail(reason, elements))
    }
}

/// Unordered pairs `x < y`: all of them, or `limit` random ones.
fn pairs(n: usize, limit: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    if n * (n - 1) / 2 <= limit {
        return (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
    }
    (0..limit)
        .map(|_| {
            let x = rng.gen_range(0..n);
            let y = (x + rng.gen_range(1..n)) % n;
            (x.min(y), x.max(y))
        })
        .collect()
}

/// All ordered triples, or `limit` random ones.
fn triples(n: usize, limit: usize, rng: &mut ChaCha8Rng) -> Vec<[usize; 3]> {
    if n * n * n <= limit {
        let mut out = Vec::with_capacity(n * n * n);
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    out.push([p, q, r]);
                }
            }
        }
        return out;
    }
    (0..limit).map(|_| std::array::from_fn(|_| rng.gen_range(0..n))).collect()
}

/// Graph distances in the adjacency graph, by breadth-first search.
fn graph_distances(a: &FiniteMedianAlgebra) -> Vec<Vec<u32>> {
    let n = a.len();
    let mut adj = vec![Vec::new(); n];
    for (p, q) in a.adjacent_pairs() {
        adj[p].push(q);
        adj[q].push(p);
    }
    (0..n)
        .map(|s| {
            let mut d = vec![u32::MAX; n];
            d[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if d[w] == u32::MAX {
                        d[w] = d[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            d
        })
        .collect()
}

/// Four distinct points `[a, b, c, d]` forming a square with `a`, `d`
/// opposite: `b, c ∈ [a, d]` and `a, d ∈ [b, c]`.
pub fn find_square(a: &FiniteMedianAlgebra) -> Option<[usize; 4]> {
    let n = a.len();
    for p in 0..n {
        for q in p + 1..n {
            let inside: Vec<usize> = a.interval_mask(p, q).iter().filter(|&z| z != p && z != q).collect();
            for (i, &b) in inside.iter().enumerate() {
                for &c in &inside[i + 1..] {
                    if a.median(b, c, p) == p && a.median(b, c, q) == q {
                        return Some([p, b, c, q]);
                    }
                }
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// elementary calculus

fn median_axioms(c: &Ctx) -> Run {
    c.a().verify_axioms()?;
    Ok(Ran::Checked)
}

fn gate_retraction(c: &Ctx) -> Run {
    let (a, n) = (c.a(), c.n());
    let mut rng = c.rng();
    for (u, v) in pairs(n, 528, &mut rng).into_iter().flat_map(|(u, v)| [(u, v), (v, u)]) {
        let iv = a.interval_mask(u, v);
        let g: Vec<usize> = a.elements().map(|z| a.gate(u, v, z)).collect();
        let image = SubsetMask::from_indices(n, g.iter().copied());
        ensure(image == iv, "gate image is not the interval", vec![u, v])?;
        for z in a.elements() {
            ensure(g[g[z]] == g[z], "gate is not idempotent", vec![u, v, z])?;
        }
        for [p, q, r] in triples(n, 512, &mut rng) {
            ensure(
                g[a.median(p, q, r)] == a.median(g[p], g[q], g[r]),
                "gate is not a homomorphism",
                vec![u, v, p, q, r],
            )?;
        }
    }
    Ok(Ran::Checked)
}

fn gate_composition(c: &Ctx) -> Run {
    let (a, n) = (c.a(), c.n());
    let mut rng = c.rng();
    let test = |[u, v, x, y, z]: [usize; 5]| {
        let (p, q) = (a.gate(u, v, x), a.gate(u, v, y));
        ensure(
            a.gate(u, v, a.gate(x, y, z)) == a.gate(p, q, z),
            "composed gates are not the gate onto the projection",
            vec![u, v, x, y, z],
        )
    };
    if n <= 10 {
        for t in 0..n.pow(5) {
            test(std::array::from_fn(|k| t / n.pow(k as u32) % n))?;
        }
    } else {
        for _ in 0..50_000 {
            test(std::array::from_fn(|_| rng.gen_range(0..n)))?;
        }
    }
    Ok(Ran::Checked)
}

/// With `gate(x,y,u) = x` and `gate(x,y,v) = y`, the gates restrict to
/// mutually inverse median bijections `[x,y] ↔ [gate(u,v,x), gate(u,v,y)]`.
fn gate_isomorphism(c: &Ctx) -> Run {
    let (a, n) = (c.a(), c.n());
    let mut rng = c.rng();
    let mut quads: Vec<[usize; 4]> = Vec::new();
    if n <= 8 {
        for t in 0..n.pow(4) {
            quads.push(std::array::from_fn(|k| t / n.pow(k as u32) % n));
        }
    } else {
        for _ in 0..2_000 {
            let [p, q, u, v]: [usize; 4] = std::array::from_fn(|_| rng.gen_range(0..n));
            quads.push([a.gate(p, q, u), a.gate(p, q, v), u, v]);
        }
    }
    for [x, y, u, v] in quads {
        if a.gate(x, y, u) != x || a.gate(x, y, v) != y {
            continue;
        }
        let (p, q) = (a.gate(u, v, x), a.gate(u, v, y));
        let (xy, pq) = (a.interval_mask(x, y), a.interval_mask(p, q));
        ensure(xy.count() == pq.count(), "projected intervals differ in size", vec![x, y, u, v])?;
        for z in xy.iter() {
            let w = a.gate(u, v, z);
            ensure(
                pq.contains(w) && a.gate(x, y, w) == z,
                "gates are not inverse on the intervals",
                vec![x, y, u, v, z],
            )?;
        }
        let members = xy.to_vec();
        for _ in 0..members.len().min(64) {
            let [s, t, r]: [usize; 3] = std::array::from_fn(|_| *members.choose(&mut rng).expect("nonempty"));
            let lhs = a.gate(u, v, a.median(s, t, r));
            let rhs = a.median(a.gate(u, v, s), a.gate(u, v, t), a.gate(u, v, r));
            ensure(lhs == rhs, "interval bijection is not median-preserving", vec![x, y, u, v, s, t, r])?;
        }
    }
    Ok(Ran::Checked)
}

/// Gate retractions and automorphisms carry chain intervals to linear
/// subsets.
fn homomorphic_image_chain(c: &Ctx) -> Run {
    let (a, n) = (c.a(), c.n());
    let mut rng = c.rng();
    let mut chains: Vec<SubsetMask> = c.sb().pairs().map(|(u, v)| a.interval_mask(u, v)).collect();
    chains.sort();
    chains.dedup();
    chains.shuffle(&mut rng);
    chains.truncate(48);
    let mut maps: Vec<Vec<usize>> =
        pairs(n, 24, &mut rng).into_iter().map(|(u, v)| a.elements().map(|z| a.gate(u, v, z)).collect()).collect();
    let mut reversed: Vec<usize> = (0..n).collect();
    if let Some(order) = a.linear_order_from(0, &SubsetMask::full(n)) {
        for (i, &z) in order.iter().enumerate() {
            reversed[z] = order[n - 1 - i];
        }
        maps.push(reversed);
    }
    for f in &maps {
        check_homomorphism(a, a, f)?;
        for ch in &chains {
            ensure(a.is_linear_subset(ch), "chain interval is not linear", ch.to_vec())?;
            let image = SubsetMask::from_indices(n, ch.iter().map(|z| f[z]));
            ensure(a.is_linear_subset(&image), "homomorphic image of a chain is not a chain", image.to_vec())?;
        }
    }
    Ok(Ran::Checked)
}

/// For `x ≠ y`, `m(x,y,p) = y` and `m(y,x,q) = x` force `[x,y] ⊆ [p,q]` on rank at most
/// one; any square breaks it, with `x`, `y` a side and `p`, `q` the far
/// corners.
fn interval_concatenation(c: &Ctx) -> Run {
    let (a, n) = (c.a(), c.n());
    if c.walls()?.rank()? >= 2 {
        let [x, y, q, p] = find_square(a).ok_or_else(|| fail("rank two without a square", Vec::new()))?;
        ensure(
            a.median(x, y, p) == y && a.median(y, x, q) == x && !a.interval_mask(p, q).contains(x),
            "square corners do not break concatenation",
            vec![x, y, p, q],
        )?;
        return Ok(Ran::Checked);
    }
    let mut rng = c.rng();
    for (x, y) in pairs(n, 300, &mut rng) {
        let ps: Vec<usize> = a.elements().filter(|&p| a.median(x, y, p) == y).collect();
        let qs: Vec<usize> = a.elements().filter(|&q| a.median(y, x, q) == x).collect();
        let xy = a.interval_mask(x, y);
        for _ in 0..8 {
            let (p, q) = (*ps.choose(&mut rng).expect("y qualifies"), *qs.choose(&mut rng).expect("x qualifies"));
            ensure(
                xy.is_subset(&a.interval_mask(p, q)),
                "interval does not extend to the outer pair",
                vec![x, y, p, q],
            )?;
        }
    }
    Ok(Ran::Checked)
}

fn conservativity_dichotomy(c: &Ctx) -> Run {
    let a = c.a();
    if a.len() > 64 {
        return Ok(Ran::Skipped);
    }
    let linear = a.is_linear_subset(&SubsetMask::full(a.len()));
    let square = find_square(a);
    if a.is_conservative() {
        ensure(
            linear != square.is_some(),
            "conservative algebra is neither a chain nor contains a square",
            Vec::new(),
        )?;
    }
    if linear {
        ensure(square.is_none(), "a chain contains a square", square.map_or(Vec::new(), |s| s.to_vec()))?;
    }
    Ok(Ran::Checked)
}

// ---------------------------------------------------------------------------
// branches and the intrinsic uniformity

fn branch_convexity(c: &Ctx) -> Run {
    let a = c.a();
    for b in c.sb().branches() {
        if let Some(w) = a.convexity_witness(&b) {
            return Err(fail("branch is not convex", w.to_vec()));
        }
        if let Some(w) = a.convexity_witness(&b.complement()) {
            return Err(fail("shadow is not convex", w.to_vec()));
        }
    }
    Ok(Ran::Checked)
}

/// An algebra has a non-chain interval iff it contains a square, and then
/// the branch across the square's diagonal is not convex.
fn non_chain_branch(c: &Ctx) -> Run {
    let (a, n) = (c.a(), c.n());
    if n > 64 {
        return Ok(Ran::Skipped);
    }
    let all_chains = c.sb().pair_count() == n * (n - 1) / 2;
    match find_square(a) {
        None => ensure(all_chains, "non-chain interval without a square", Vec::new())?,
        Some([p, b, cc, q]) => {
            ensure(!all_chains && !a.is_chain_interval(p, q), "square diagonal spans a chain", vec![p, q])?;
            let br = a.branch(p, q)?;
            ensure(
                br.contains(b) && br.contains(cc) && !br.contains(p),
                "square branch has the wrong shape",
                vec![p, b, cc, q],
            )?;
            ensure(!a.is_convex(&br), "branch across a square is convex", vec![p, q])?;
        }
    }
    Ok(Ran::Checked)
}

fn star_trichotomy(c: &Ctx) -> Run {
    let (a, n) = (c.a(), c.n());
    for entry in c.sb().entries() {
        for &(u, v) in &entry.pairs {
            let (towards_v, towards_u) = (a.branch(u, v)?, a.branch(v, u)?);
            for x in a.elements() {
                let g = a.gate(u, v, x);
                let expected = if g == u {
                    &towards_u
                } else if g == v {
                    &towards_v
                } else {
                    &SubsetMask::full(n)
                };
                ensure(entry.cover.star(x) == *expected, "star is not given by the gate position", vec![u, v, x])?;
            }
        }
    }
    Ok(Ran::Checked)
}

fn branch_equivalence(c: &Ctx) -> Run {
    let a = c.a();
    for (p, q) in c.sb().pairs() {
        for (x, y) in [(p, q), (q, p)] {
            let order = a.chain_order(x, y).ok_or_else(|| fail("subbase pair is not a chain", vec![x, y]))?;
            let reference = a.branch(y, x)?;
            for &z in &order[..order.len() - 1] {
                ensure(a.branch(y, z)? == reference, "branch changes along the chain", vec![x, y, z])?;
            }
        }
    }
    Ok(Ran::Checked)
}

fn preimage_rays(c: &Ctx) -> Run {
    let (a, n) = (c.a(), c.n());
    for (p, q) in c.sb().pairs() {
        for (u, v) in [(p, q), (q, p)] {
            let order = a.chain_order(u, v).ok_or_else(|| fail("subbase pair is not a chain", vec![u, v]))?;
            let mut pos = vec![usize::MAX; n];
            for (i, &z) in order.iter().enumerate() {
                pos[z] = i;
            }
            let at: Vec<usize> = a.elements().map(|z| pos[a.gate(u, v, z)]).collect();
            for (i, &d) in order.iter().enumerate() {
                if d != u {
                    let below = SubsetMask::from_fn(n, |z| at[z] < i);
                    ensure(below == a.branch(d, u)?, "lower ray preimage is not a branch", vec![u, v, d])?;
                }
                if d != v {
                    let above = SubsetMask::from_fn(n, |z| at[z] > i);
                    ensure(above == a.branch(d, v)?, "upper ray preimage is not a branch", vec![u, v, d])?;
                }
            }
        }
    }
    Ok(Ran::Checked)
}

fn median_uniform_continuity(c: &Ctx) -> Run {
    median_uniform_continuity_check(c.a(), c.sb())?;
    Ok(Ran::Checked)
}

fn initial_uniformity(c: &Ctx) -> Run {
    initial_uniformity_check(c.a(), c.sb())?;
    Ok(Ran::Checked)
}

fn adjacent_subbase(c: &Ctx) -> Run {
    let adjacent = c.a().adjacent_subbase();
    ensure(c.sb().family().same_filter(&adjacent.family())?, "adjacent pairs generate a different filter", Vec::new())?;
    Ok(Ran::Checked)
}

/// On chains the uniformity is the two-ray uniformity; on every algebra the
/// gate onto a chain interval pulls its two-ray covers back into it.
fn ordered_reduction(c: &Ctx) -> Run {
    let (a, n) = (c.a(), c.n());
    let two_ray = |order: &[usize], pos: &dyn Fn(usize) -> usize| -> Result<CoverFamily, Violation> {
        let mut fam = CoverFamily::new(n);
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                let lower = SubsetMask::from_fn(n, |z| pos(z) < j);
                let upper = SubsetMask::from_fn(n, |z| pos(z) > i);
                fam.push(Cover::new(n, vec![lower, upper])?)?;
            }
        }
        Ok(fam)
    };
    if let Some(order) = a.linear_order_from(0, &SubsetMask::full(n)) {
        let mut pos = vec![0; n];
        for (i, &z) in order.iter().enumerate() {
            pos[z] = i;
        }
        let rays = two_ray(&order, &|z| pos[z])?;
        ensure(
            rays.same_filter(&c.sb().family())?,
            "chain uniformity differs from the two-ray uniformity",
            Vec::new(),
        )?;
    }
    let mut rng = c.rng();
    let mut chain_pairs: Vec<(usize, usize)> = c.sb().pairs().collect();
    chain_pairs.shuffle(&mut rng);
    let total = c.sb().total_wedge();
    for &(u, v) in chain_pairs.iter().take(32) {
        let order = a.chain_order(u, v).ok_or_else(|| fail("subbase pair is not a chain", vec![u, v]))?;
        let mut pos = vec![usize::MAX; n];
        for (i, &z) in order.iter().enumerate() {
            pos[z] = i;
        }
        let gated: Vec<usize> = a.elements().map(|z| pos[a.gate(u, v, z)]).collect();
        for cover in two_ray(&order, &|z| gated[z])?.covers() {
            ensure(total.refines(cover)?, "gate pullback of a ray cover is not uniform", vec![u, v])?;
        }
    }
    Ok(Ran::Checked)
}

fn hausdorff_agreement(c: &Ctx) -> Run {
    let a = c.a();
    let hausdorff = is_hausdorff_um(a, c.sb());
    let t2m = t2m_check(a, c.sb());
    let solvable = chain_solvable_check(a);
    ensure(
        hausdorff == t2m.is_ok() && t2m.is_ok() == solvable.is_ok(),
        "Hausdorff, gate separation and chain solvability disagree",
        Vec::new(),
    )?;
    if let Ok(ws) = t2m {
        for w in ws {
            w.verify_t2m(a)?;
            w.to_chain_solvable(a).verify_chain_solvable(a)?;
        }
    }
    Ok(Ran::Checked)
}

fn discrete_chain_solvable(c: &Ctx) -> Run {
    let a = c.a();
    for w in chain_solvable_check(a)? {
        ensure(a.is_adjacent(w.u, w.v), "maximal chain step is not an adjacent pair", vec![w.x, w.y, w.u, w.v])?;
    }
    ensure(is_hausdorff_um(a, c.sb()), "finite algebra is not Hausdorff", Vec::new())?;
    Ok(Ran::Checked)
}

fn product_uniformity(c: &Ctx) -> Run {
    match &c.instance.factors {
        Some((x, y)) => product_uniformity_check(x, y)?,
        None if c.n() <= 32 => {
            product_uniformity_check(c.a(), &FiniteMedianAlgebra::chain(2)?)?;
            product_uniformity_check(c.a(), &FiniteMedianAlgebra::chain(1)?)?;
        }
        None => return Ok(Ran::Skipped),
    }
    Ok(Ran::Checked)
}

fn product_separation(c: &Ctx) -> Run {
    let Some((x, y)) = &c.instance.factors else { return Ok(Ran::Skipped) };
    t2m_check(x, &x.chain_subbase())?;
    t2m_check(y, &y.chain_subbase())?;
    t2m_check(c.a(), c.sb())?;
    Ok(Ran::Checked)
}

fn convex_restriction(c: &Ctx) -> Run {
    let (a, n) = (c.a(), c.n());
    let mut rng = c.rng();
    let mut sets = vec![SubsetMask::full(n)];
    sets.extend(pairs(n, 6, &mut rng).into_iter().map(|(x, y)| a.interval_mask(x, y)));
    let walls = c.walls()?;
    let mut sides: Vec<SubsetMask> = walls.walls().iter().flat_map(|w| [w.side_a.clone(), w.side_b.clone()]).collect();
    sides.shuffle(&mut rng);
    sets.extend(sides.into_iter().take(6));
    for s in sets {
        convex_restriction_check(a, c.sb(), &s)?;
    }
    Ok(Ran::Checked)
}

fn equivariance(c: &Ctx) -> Run {
    let a = c.a();
    if a.len() > 32 {
        return Ok(Ran::Skipped);
    }
    let group = a.automorphisms()?;
    ensure(group.first().is_some_and(|g| g.is_identity()), "automorphism group misses the identity", Vec::new())?;
    for g in &group {
        equivariance_check(a, c.sb(), g)?;
    }
    Ok(Ran::Checked)
}

// ---------------------------------------------------------------------------
// walls, rank, metric

fn walls_oracle(c: &Ctx) -> Run {
    let Some(partitions) = oracle::convex_partitions(c.a()) else { return Ok(Ran::Skipped) };
    let walls = c.walls()?;
    let mut sides: Vec<SubsetMask> = walls.walls().iter().map(|w| w.side_of(0).clone()).collect();
    sides.sort();
    ensure(sides == partitions, "walls differ from the convex bipartitions", Vec::new())?;
    Ok(Ran::Checked)
}

fn rank_oracle(c: &Ctx) -> Run {
    let Some(expected) = oracle::cube_embedding_rank(c.a()) else { return Ok(Ran::Skipped) };
    ensure(c.walls()?.rank()? == expected, "rank differs from the largest embedded cube", Vec::new())?;
    Ok(Ran::Checked)
}

/// The rank is attained as a Dilworth width between two points, and
/// intervals never exceed it.
fn rank_bound(c: &Ctx) -> Run {
    let (a, n) = (c.a(), c.n());
    let walls = c.walls()?;
    let rank = walls.rank()?;
    ensure((rank == 0) == (n == 1), "rank vanishes exactly on the point", Vec::new())?;
    if n == 1 {
        return Ok(Ran::Checked);
    }
    let family = walls.max_crossing_family()?;
    let mut low = SubsetMask::full(n);
    let mut high = SubsetMask::full(n);
    for &w in &family {
        low.intersect_with(&walls.wall(w).side_a);
        high.intersect_with(&walls.wall(w).side_b);
    }
    let (Some(x), Some(y)) = (low.first(), high.first()) else {
        return Err(fail("crossing walls have empty side intersection", family));
    };
    ensure(walls.dilworth_colouring(x, y)?.len() == rank, "rank is not attained between corners", vec![x, y])?;
    let mut rng = c.rng();
    for (x, y) in pairs(n, 24, &mut rng) {
        let (sub, _) = a.induced(&a.interval_mask(x, y))?;
        ensure(sub.rank()? <= rank, "interval rank exceeds the rank", vec![x, y])?;
    }
    Ok(Ran::Checked)
}

fn rank_additivity(c: &Ctx) -> Run {
    let Some((x, y)) = &c.instance.factors else { return Ok(Ran::Skipped) };
    ensure(c.walls()?.rank()? == x.rank()? + y.rank()?, "rank of a product is not additive", Vec::new())?;
    Ok(Ran::Checked)
}

fn dilworth_embedding(c: &Ctx) -> Run {
    let a = c.a();
    let walls = c.walls()?;
    let mut rng = c.rng();
    for (x, y) in pairs(c.n(), 8, &mut rng) {
        let classes = walls.dilworth_colouring(x, y)?;
        let (sub, _) = a.induced(&a.interval_mask(x, y))?;
        ensure(classes.len() == sub.rank()?, "colour classes differ from the interval rank", vec![x, y])?;
        for class in &classes {
            for (i, &p) in class.iter().enumerate() {
                for &q in &class[i + 1..] {
                    let (op, oq) = (walls.wall(p).oriented_at(x), walls.wall(q).oriented_at(x));
                    ensure(op.le(&oq) || oq.le(&op), "colour class is not totally ordered", vec![x, y])?;
                }
            }
        }
        walls.interval_chain_embedding(a, x, y)?.verify(a)?;
    }
    Ok(Ran::Checked)
}

fn fingerprint_injectivity(c: &Ctx) -> Run {
    let n = c.n();
    let walls = c.walls()?;
    let dist = graph_distances(c.a());
    let mut rng = c.rng();
    let mut bases: Vec<usize> = (0..n).collect();
    bases.shuffle(&mut rng);
    bases.truncate(16);
    for x0 in bases {
        let fp = walls.fingerprint(x0);
        if let Some((p, q)) = fp.collision() {
            return Err(fail("wall fingerprint is not injective", vec![x0, p, q]));
        }
        ensure(fp.sets[x0].is_empty(), "base point has a nonempty fingerprint", vec![x0])?;
        for (z, set) in fp.sets.iter().enumerate() {
            ensure(set.count() as u32 == dist[x0][z], "fingerprint size differs from graph distance", vec![x0, z])?;
        }
    }
    Ok(Ran::Checked)
}

fn wall_metric_laws(c: &Ctx) -> Run {
    let (a, n) = (c.a(), c.n());
    let walls = c.walls()?;
    let d = wall_metric(a, walls);
    let at = |x: usize, y: usize| d[x * n + y];
    let mut rng = c.rng();
    for [x, y, z] in triples(n, 40_000, &mut rng) {
        ensure((at(x, y) == 0) == (x == y) && at(x, y) == at(y, x), "wall count is not a metric", vec![x, y])?;
        ensure(at(x, z) <= at(x, y) + at(y, z), "triangle inequality fails", vec![x, y, z])?;
        let between = a.median(x, z, y) == y;
        ensure(between == (at(x, y) + at(y, z) == at(x, z)), "interval is not metric betweenness", vec![x, y, z])?;
    }
    lipschitz_median_check(a, walls)?;
    Ok(Ran::Checked)
}

// ---------------------------------------------------------------------------
// topology and compactification

fn topology_equivalence(c: &Ctx) -> Run {
    let a = c.a();
    let tau = c.tau();
    ensure(a.halfspace_topology(c.walls()?) == *tau, "halfspace topology differs", Vec::new())?;
    ensure(a.gate_initial_topology(false)? == *tau, "initial topology of chain gates differs", Vec::new())?;
    if a.len() <= 32 && t2m_check(a, c.sb()).is_ok() {
        ensure(a.gate_initial_topology(true)? == *tau, "initial topology of all gates differs", Vec::new())?;
    }
    Ok(Ran::Checked)
}

fn discreteness_criterion(c: &Ctx) -> Run {
    let a = c.a();
    ensure(c.tau().is_discrete(), "finite-degree algebra is not discrete", Vec::new())?;
    let mut rng = c.rng();
    let mut points: Vec<usize> = a.elements().collect();
    points.shuffle(&mut rng);
    points.truncate(24);
    for x in points {
        let k = min_isolating_branches(a, c.sb(), x)?;
        ensure(k == a.neighbours(x).len(), "isolating branch count differs from the degree", vec![x])?;
    }
    Ok(Ran::Checked)
}

fn least_topology(c: &Ctx) -> Run {
    let tau = c.tau();
    for b in c.sb().branches() {
        ensure(tau.is_open(&b), "branch is not open", b.to_vec())?;
    }
    ensure(tau.is_coarser_or_equal(&FiniteTopology::discrete(c.n())), "topology is finer than discrete", Vec::new())?;
    Ok(Ran::Checked)
}

fn local_convexity(c: &Ctx) -> Run {
    for x in c.a().elements() {
        let nb = c.tau().min_nbhd(x);
        if let Some(w) = c.a().convexity_witness(nb) {
            return Err(fail("minimal neighbourhood is not convex", w.to_vec()));
        }
    }
    Ok(Ran::Checked)
}

/// On rank-one algebras the chain branches are exactly the pretree
/// branches `{x : u ∉ [x, v]}` over all pairs, with betweenness read off
/// graph geodesics.
fn tree_shadow_topology(c: &Ctx) -> Run {
    let n = c.n();
    if c.walls()?.rank()? > 1 {
        return Ok(Ran::Skipped);
    }
    let d = graph_distances(c.a());
    let mut shadow_branches: Vec<SubsetMask> = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v {
                shadow_branches.push(SubsetMask::from_fn(n, |x| d[x][u] + d[u][v] != d[x][v]));
            }
        }
    }
    shadow_branches.sort();
    shadow_branches.dedup();
    ensure(shadow_branches == c.sb().branches(), "branch subbase differs from the shadow subbase", Vec::new())?;
    Ok(Ran::Checked)
}

fn geometric_branching(c: &Ctx) -> Run {
    let (a, n) = (c.a(), c.n());
    let walls = c.walls()?;
    let mut rng = c.rng();
    let diameter =
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| walls.distance(x, y)).max().unwrap_or(0);
    for _ in 0..4.min(n) {
        let x = rng.gen_range(0..n);
        let point = geometric_branching_check(a, c.sb(), walls, x, 1)?;
        ensure(
            point.count() == min_isolating_branches(a, c.sb(), x)?,
            "unit ball needs a different branch count",
            vec![x],
        )?;
        let whole = geometric_branching_check(a, c.sb(), walls, x, diameter as u32 + 1)?;
        ensure(whole.count() == 0, "the whole carrier needs branches", vec![x])?;
    }
    Ok(Ran::Checked)
}

fn roller_uniqueness(c: &Ctx) -> Run {
    let walls = c.walls()?;
    if walls.len() > MAX_ORIENTATION_WALLS {
        return Ok(Ran::Skipped);
    }
    roller_check(c.a(), walls)?;
    Ok(Ran::Checked)
}

// ---------------------------------------------------------------------------
// global checks

fn symbolic_compactification(c: &Ctx) -> Run {
    use ExtInt::*;
    let z = SymbolicFactor::IntegerLine;
    let line = symbolic_mmc(&[z])?;
    ensure(line.boundary_size() == Some(2), "the line does not have two ends", Vec::new())?;
    let plane = symbolic_mmc(&[z, z])?;
    ensure(
        plane.median(&[PosInf, Fin(0)], &[NegInf, Fin(0)], &[Fin(5), Fin(7)]) == [Fin(5), Fin(0)],
        "plane median differs",
        Vec::new(),
    )?;
    ensure(
        plane.is_boundary(&[PosInf, Fin(0)]) && !plane.is_boundary(&[Fin(3), Fin(-4)]),
        "plane boundary membership",
        Vec::new(),
    )?;
    let configs: [&[SymbolicFactor]; 4] =
        [&[z], &[z, z], &[z, SymbolicFactor::FiniteChain(3)], &[SymbolicFactor::FiniteChain(4)]];
    for (i, f) in configs.iter().enumerate() {
        let sym = symbolic_mmc(f)?;
        sym.sampled_axiom_check(100_000, c.seed.wrapping_add(i as u64))?;
        for r in 1..=4 {
            truncation_consistency(&sym, r)?;
        }
    }
    Ok(Ran::Checked)
}

fn starlet_compactification(_: &Ctx) -> Run {
    for leaves in 1..=8 {
        let s = StarletCompactification::new(leaves)?;
        let a = s.algebra()?;
        for p in 0..a.len() {
            for q in 0..a.len() {
                for r in 0..a.len() {
                    if p != q && q != r && p != r {
                        ensure(
                            a.median(p, q, r) == 0,
                            "three distinct points do not meet at the centre",
                            vec![p, q, r],
                        )?;
                    }
                }
            }
        }
    }
    Ok(Ran::Checked)
}

/// The centre of `starlet(n)` needs `n` branches, and any `k` branches
/// around it keep at least `n - k` leaves.
pub fn starlet_scaling(n: usize) -> Check {
    let a = FiniteMedianAlgebra::starlet(n)?;
    let sb = a.chain_subbase();
    let k = min_isolating_branches(&a, &sb, 0)?;
    if k != n {
        return Err(fail(format!("centre of starlet({n}) needs {k} branches"), vec![0]));
    }
    let around: Vec<SubsetMask> = sb.branches().into_iter().filter(|b| b.contains(0)).collect();
    for b in &around {
        let missed = (1..=n).filter(|&l| !b.contains(l)).count();
        if missed > 1 {
            return Err(fail("a branch at the centre excludes two leaves", b.to_vec()));
        }
    }
    if around.len() <= 16 {
        for choice in 0u32..(1 << around.len()) {
            let mut star = SubsetMask::full(a.len());
            for (i, b) in around.iter().enumerate() {
                if choice >> i & 1 == 1 {
                    star.intersect_with(b);
                }
            }
            let used = choice.count_ones() as usize;
            let leaves = (1..=n).filter(|&l| star.contains(l)).count();
            if used <= n && leaves + used < n {
                return Err(fail(format!("{used} branches keep only {leaves} leaves"), Vec::new()));
            }
        }
    }
    Ok(())
}

type Check = Result<(), Violation>;

fn starlet_scaling_all(_: &Ctx) -> Run {
    for n in 2..=8 {
        starlet_scaling(n)?;
    }
    Ok(Ran::Checked)
}

/// `count` seeded pairs of distinct periodic sequences with periods up to
/// `max_period`.
pub fn periodic_pairs(seed: u64, count: usize, max_period: usize) -> Vec<(PeriodicBiSequence, PeriodicBiSequence)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let random = |rng: &mut ChaCha8Rng| {
        let p = rng.gen_range(1..=max_period);
        let bits: Vec<bool> = (0..p).map(|_| rng.gen()).collect();
        PeriodicBiSequence::new(&bits).expect("nonempty pattern")
    };
    while out.len() < count {
        let (x, y) = (random(&mut rng), random(&mut rng));
        if x != y {
            out.push((x, y));
        }
    }
    out
}

fn periodic_squares(c: &Ctx) -> Run {
    for (x, y) in periodic_pairs(c.seed, 100, 6) {
        let sq = periodic_square_witness(&x, &y).map_err(|e| fail(format!("{x} vs {y}: {e}"), Vec::new()))?;
        verify_square(&x, &y, &sq)?;
        let alg = medalg_core::periodic::square_algebra(&sq)?;
        ensure(!alg.is_chain_interval(0, 3), "square spans a chain", Vec::new())?;
    }
    Ok(Ran::Checked)
}

fn fixed_examples(_: &Ctx) -> Run {
    for r in crate::examples::paper_examples() {
        if r.verdict == Verdict::Fail {
            let reason = r.witness.map_or_else(|| r.check_id.clone(), |w| w.reason);
            return Err(fail(reason, Vec::new()));
        }
    }
    Ok(Ran::Checked)
}

// ---------------------------------------------------------------------------

macro_rules! check {
    ($id:literal, $scope:ident, $run:path, $statement:literal) => {
        CheckSpec { id: $id, statement: $statement, scope: Scope::$scope, run: $run }
    };
}

pub static REGISTRY: &[CheckSpec] = &[
    check!(
        "median-axioms",
        PerInstance,
        median_axioms,
        "the median satisfies symmetry, absorption and the exchange law"
    ),
    check!(
        "gate-retraction",
        PerInstance,
        gate_retraction,
        "each gate is an idempotent homomorphism onto its interval"
    ),
    check!(
        "gate-composition",
        PerInstance,
        gate_composition,
        "a gate after a gate is the gate onto the projected interval"
    ),
    check!("gate-isomorphism", PerInstance, gate_isomorphism, "mutually gated intervals are isomorphic via the gates"),
    check!("homomorphic-image-chain", PerInstance, homomorphic_image_chain, "homomorphisms carry chains to chains"),
    check!(
        "interval-concatenation",
        PerInstance,
        interval_concatenation,
        "intervals extend to outer pairs exactly on rank one"
    ),
    check!(
        "conservativity-dichotomy",
        PerInstance,
        conservativity_dichotomy,
        "a conservative algebra is a chain or contains a square"
    ),
    check!("branch-convexity", PerInstance, branch_convexity, "branches of chain intervals are halfspaces"),
    check!(
        "non-chain-branch",
        PerInstance,
        non_chain_branch,
        "a branch across a non-chain interval can fail to be convex"
    ),
    check!(
        "star-trichotomy",
        PerInstance,
        star_trichotomy,
        "stars of subbasic covers are one branch, the other, or everything"
    ),
    check!(
        "branch-equivalence",
        PerInstance,
        branch_equivalence,
        "the branch at an endpoint does not depend on the other endpoint along a chain"
    ),
    check!("preimage-rays", PerInstance, preimage_rays, "gate preimages of open rays are branches"),
    check!("median-uniform-continuity", PerInstance, median_uniform_continuity, "the median is uniformly continuous"),
    check!(
        "initial-uniformity",
        PerInstance,
        initial_uniformity,
        "the intrinsic uniformity is initial for the chain gates"
    ),
    check!("adjacent-subbase", PerInstance, adjacent_subbase, "adjacent pairs generate the intrinsic uniformity"),
    check!(
        "ordered-reduction",
        PerInstance,
        ordered_reduction,
        "on chains the intrinsic uniformity is the two-ray uniformity"
    ),
    check!(
        "hausdorff-agreement",
        PerInstance,
        hausdorff_agreement,
        "Hausdorff, gate separation and chain solvability agree"
    ),
    check!(
        "discrete-chain-solvable",
        PerInstance,
        discrete_chain_solvable,
        "algebras with finite intervals are chain-solvable"
    ),
    check!(
        "product-uniformity",
        PerInstance,
        product_uniformity,
        "the intrinsic uniformity of a product is the product uniformity"
    ),
    check!("product-separation", PerInstance, product_separation, "gate separation is preserved by products"),
    check!(
        "convex-restriction",
        PerInstance,
        convex_restriction,
        "a convex subset carries the trace of the intrinsic uniformity"
    ),
    check!("equivariance", PerInstance, equivariance, "automorphisms carry branches to branches"),
    check!("walls-oracle", PerInstance, walls_oracle, "walls are exactly the convex bipartitions"),
    check!("rank-oracle", PerInstance, rank_oracle, "rank is the largest embedded cube"),
    check!("rank-bound", PerInstance, rank_bound, "rank is attained between two points and bounds every interval"),
    check!("rank-additivity", PerInstance, rank_additivity, "rank is additive on products"),
    check!("dilworth-embedding", PerInstance, dilworth_embedding, "intervals embed in a product of rank many chains"),
    check!("fingerprint-injectivity", PerInstance, fingerprint_injectivity, "separating wall sets determine points"),
    check!("wall-metric", PerInstance, wall_metric_laws, "the wall count is a median metric with 1-Lipschitz median"),
    check!(
        "topology-equivalence",
        PerInstance,
        topology_equivalence,
        "halfspace, gate-initial and intrinsic topologies coincide"
    ),
    check!(
        "discreteness-criterion",
        PerInstance,
        discreteness_criterion,
        "finite degree makes the intrinsic topology discrete"
    ),
    check!("least-topology", PerInstance, least_topology, "branches are open in the intrinsic topology"),
    check!("local-convexity", PerInstance, local_convexity, "minimal neighbourhoods are convex"),
    check!(
        "tree-shadow-topology",
        PerInstance,
        tree_shadow_topology,
        "on rank one the intrinsic topology is the shadow topology"
    ),
    check!("geometric-branching", PerInstance, geometric_branching, "metric balls contain finite branch stars"),
    check!("roller-uniqueness", PerInstance, roller_uniqueness, "consistent orientations are exactly the points"),
    check!(
        "symbolic-compactification",
        Global,
        symbolic_compactification,
        "products of lines and chains compactify coordinatewise"
    ),
    check!(
        "starlet-compactification",
        Global,
        starlet_compactification,
        "the compactified starlet is a median algebra with central medians"
    ),
    check!("starlet-scaling", Global, starlet_scaling_all, "isolating the starlet centre needs one branch per leaf"),
    check!("periodic-squares", Global, periodic_squares, "intervals of periodic sequences contain squares"),
    check!("fixed-examples", Global, fixed_examples, "fixed worked examples reproduce exactly"),
];

pub fn find(id: &str) -> Option<&'static CheckSpec> {
    REGISTRY.iter().find(|c| c.id == id)
}

/// Runs one check on one instance, turning panics into failures.
pub fn run_one(spec: &CheckSpec, ctx: &mut Ctx) -> TheoremReport {
    ctx.check = spec.id;
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(|| (spec.run)(ctx))).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| p.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".into());
        Err(fail(format!("panic: {msg}"), Vec::new()))
    });
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let a = ctx.a();
    let (verdict, witness) = match &result {
        Ok(Ran::Checked) => (Verdict::Pass, None),
        Ok(Ran::Skipped) => (Verdict::Skip, None),
        Err(v) => (Verdict::Fail, Some(Witness::from_violation(a, v))),
    };
    let algebra = (verdict == Verdict::Fail && spec.scope == Scope::PerInstance)
        .then(|| AlgebraFile::from_algebra(a).ok())
        .flatten();
    TheoremReport {
        check_id: spec.id.to_string(),
        instance_id: ctx.instance.id.clone(),
        verdict,
        witness,
        algebra,
        elapsed_ms,
    }
}

/// Worker count from `MEDALG_THREADS`, defaulting to the machine.
pub fn thread_count() -> usize {
    std::env::var("MEDALG_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
}

/// Runs the selected checks (all when `filter` is `None`) over the corpus.
/// Reports are sorted by check id, then instance id.
pub fn run_registry(
    corpus: &[Instance],
    filter: Option<&[String]>,
    seed: u64,
) -> Result<Vec<TheoremReport>, HarnessError> {
    let selected: Vec<&'static CheckSpec> = match filter {
        None => REGISTRY.iter().collect(),
        Some(ids) => ids
            .iter()
            .map(|id| find(id).ok_or_else(|| HarnessError::UnknownCheck(id.clone())))
            .collect::<Result<_, _>>()?,
    };
    let per_instance: Vec<&CheckSpec> = selected.iter().copied().filter(|c| c.scope == Scope::PerInstance).collect();
    let global: Vec<&CheckSpec> = selected.iter().copied().filter(|c| c.scope == Scope::Global).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .map_err(|e| HarnessError::Input(format!("thread pool: {e}")))?;
    let placeholder = Instance::new(GLOBAL_INSTANCE, FiniteMedianAlgebra::chain(1)?);
    let mut reports: Vec<TheoremReport> = pool.install(|| {
        let mut out: Vec<TheoremReport> = corpus
            .par_iter()
            .flat_map_iter(|inst| {
                let mut ctx = Ctx::new(inst, seed);
                per_instance.iter().map(|spec| run_one(spec, &mut ctx)).collect::<Vec<_>>()
            })
            .collect();
        if !corpus.is_empty() || filter.is_some() {
            out.extend(
                global.par_iter().map(|spec| run_one(spec, &mut Ctx::new(&placeholder, seed))).collect::<Vec<_>>(),
            );
        }
        out
    });
    reports.sort_by(|p, q| (&p.check_id, &p.instance_id).cmp(&(&q.check_id, &q.instance_id)));
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every statement the harness must cover, registered exactly once.
    const REQUIRED: &[&str] = &[
        "adjacent-subbase",
        "branch-convexity",
        "branch-equivalence",
        "conservativity-dichotomy",
        "convex-restriction",
        "dilworth-embedding",
        "discrete-chain-solvable",
        "discreteness-criterion",
        "equivariance",
        "fingerprint-injectivity",
        "fixed-examples",
        "gate-composition",
        "gate-isomorphism",
        "gate-retraction",
        "geometric-branching",
        "hausdorff-agreement",
        "homomorphic-image-chain",
        "initial-uniformity",
        "interval-concatenation",
        "least-topology",
        "local-convexity",
        "median-axioms",
        "median-uniform-continuity",
        "non-chain-branch",
        "ordered-reduction",
        "periodic-squares",
        "preimage-rays",
        "product-separation",
        "product-uniformity",
        "rank-additivity",
        "rank-bound",
        "rank-oracle",
        "roller-uniqueness",
        "star-trichotomy",
        "starlet-compactification",
        "starlet-scaling",
        "symbolic-compactification",
        "topology-equivalence",
        "tree-shadow-topology",
        "wall-metric",
        "walls-oracle",
    ];

    #[test]
    fn registry_covers_every_statement_once() {
        let mut ids: Vec<&str> = REGISTRY.iter().map(|c| c.id).collect();
        ids.sort_unstable();
        assert_eq!(ids, REQUIRED);
    }

    #[test]
    fn empty_corpus_gives_empty_report() {
        assert!(run_registry(&[], None, 1).unwrap().is_empty());
    }

    #[test]
    fn unknown_check_is_rejected() {
        let err = run_registry(&[], Some(&["no-such-check".to_string()]), 1).unwrap_err();
        assert!(matches!(err, HarnessError::UnknownCheck(_)));
    }

    #[test]
    fn squares_are_found() {
        assert!(find_square(&FiniteMedianAlgebra::chain(5).unwrap()).is_none());
        let sq = find_square(&FiniteMedianAlgebra::hypercube(2).unwrap()).unwrap();
        assert_eq!(sq, [0, 1, 2, 3]);
    }
}
