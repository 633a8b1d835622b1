//! Seeded generation of the algebra corpus the registry runs over.

use medalg_core::{FiniteMedianAlgebra, SubsetMask};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Largest ambient carrier for exhaustive subalgebra enumeration.
pub const MAX_ENUMERATION_AMBIENT: usize = 10;
const CLOSURE_RETRIES: usize = 64;

/// Shapes and counts of the generated corpus. Equal specs give equal
/// corpora.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusSpec {
    pub seed: u64,
    /// Every subalgebra of the 3-cube.
    pub cube3_subalgebras: bool,
    /// Dimension of the Boolean cube sampled by random closures.
    pub cube_dim: usize,
    pub cube_closures: usize,
    /// Chain length and power of the grid `C_k^d` sampled by random closures.
    pub grid_chain: u32,
    pub grid_dim: usize,
    pub grid_closures: usize,
    pub trees: usize,
    pub max_tree_vertices: usize,
    /// Starlets with this many leaves, inclusive.
    pub starlet_leaves: (usize, usize),
    pub products: usize,
    /// Most seed points fed to a random closure.
    pub max_seeds: usize,
    /// Instance size cap.
    pub cap: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            seed: 42,
            cube3_subalgebras: true,
            cube_dim: 5,
            cube_closures: 200,
            grid_chain: 3,
            grid_dim: 3,
            grid_closures: 200,
            trees: 40,
            max_tree_vertices: 24,
            starlet_leaves: (2, 8),
            products: 40,
            max_seeds: 5,
            cap: 128,
        }
    }
}

impl CorpusSpec {
    /// A few instances of every shape, for fast runs.
    pub fn small(seed: u64) -> Self {
        CorpusSpec {
            seed,
            cube3_subalgebras: false,
            cube_closures: 6,
            grid_closures: 6,
            trees: 4,
            starlet_leaves: (2, 4),
            products: 4,
            cap: 64,
            ..CorpusSpec::default()
        }
    }

    fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Spec(m.to_string()));
        if self.cube_dim == 0 || self.cube_dim > 7 {
            return bad("cube_dim must be in 1..=7");
        }
        if self.grid_chain < 2 || self.grid_dim == 0 || (self.grid_chain as usize).pow(self.grid_dim as u32) > 4096 {
            return bad("grid must have chain length >= 2 and at most 4096 points");
        }
        if self.max_seeds == 0 {
            return bad("max_seeds must be positive");
        }
        if self.cap == 0 || self.cap > 256 {
            return bad("cap must be in 1..=256");
        }
        if self.starlet_leaves.0 > self.starlet_leaves.1 || self.starlet_leaves.1 > 64 {
            return bad("starlet_leaves must be an increasing range within 0..=64");
        }
        if self.max_tree_vertices < 2 || self.max_tree_vertices > self.cap {
            return bad("max_tree_vertices must be in 2..=cap");
        }
        Ok(())
    }
}

/// A corpus member. Products remember their factors.
#[derive(Clone, Debug)]
pub struct Instance {
    pub id: String,
    pub algebra: FiniteMedianAlgebra,
    pub factors: Option<(FiniteMedianAlgebra, FiniteMedianAlgebra)>,
}

impl Instance {
    pub fn new(id: impl Into<String>, algebra: FiniteMedianAlgebra) -> Self {
        Instance { id: id.into(), algebra, factors: None }
    }
}

/// All nonempty median-closed subsets of a small ambient algebra, in
/// increasing order of their membership masks.
pub fn enumerate_subalgebras(ambient: &FiniteMedianAlgebra) -> Result<Vec<FiniteMedianAlgebra>, HarnessError> {
    let n = ambient.len();
    if n > MAX_ENUMERATION_AMBIENT {
        return Err(medalg_core::MedianError::SizeOverflow { requested: n, max: MAX_ENUMERATION_AMBIENT }.into());
    }
    let mut out = Vec::new();
    for bits in 1u32..(1 << n) {
        let mask = SubsetMask::from_fn(n, |i| bits >> i & 1 == 1);
        let closed =
            mask.iter().all(|a| mask.iter().all(|b| mask.iter().all(|c| mask.contains(ambient.median(a, b, c)))));
        if closed {
            out.push(ambient.induced(&mask)?.0);
        }
    }
    Ok(out)
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// The closure of `1..=max_seeds` random points of `ambient`, resampled
/// until it fits under `cap`. Deterministic in `(seed, index)`.
pub fn random_subalgebra(
    ambient: &FiniteMedianAlgebra,
    max_seeds: usize,
    cap: usize,
    seed: u64,
    index: u64,
) -> Result<FiniteMedianAlgebra, HarnessError> {
    let mut rng = rng_for(seed, index);
    for _ in 0..CLOSURE_RETRIES {
        let k = rng.gen_range(1..=max_seeds);
        let seeds: Vec<usize> = (0..k).map(|_| rng.gen_range(0..ambient.len())).collect();
        match ambient.median_closure_capped(&seeds, cap) {
            Ok(a) => return Ok(a),
            Err(medalg_core::MedianError::ClosureTooLarge { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(HarnessError::RetryExhausted { tries: CLOSURE_RETRIES, what: format!("closure under {cap} elements") })
}

/// A spanning tree of a random connected graph on `k` vertices, built by
/// breadth-first search from vertex 0.
pub fn random_tree(k: usize, rng: &mut ChaCha8Rng) -> Result<FiniteMedianAlgebra, HarnessError> {
    let mut adj = vec![Vec::new(); k];
    let mut order: Vec<usize> = (0..k).collect();
    order[1..].shuffle(rng);
    for i in 1..k {
        let j = rng.gen_range(0..i);
        adj[order[i]].push(order[j]);
        adj[order[j]].push(order[i]);
    }
    for _ in 0..k {
        let (a, b) = (rng.gen_range(0..k), rng.gen_range(0..k));
        if a != b && !adj[a].contains(&b) {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut seen = vec![false; k];
    let mut edges = Vec::new();
    let mut queue = std::collections::VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                edges.push((v, w));
                queue.push_back(w);
            }
        }
    }
    Ok(FiniteMedianAlgebra::median_graph_from_edges(k, &edges)?)
}

fn grid(chain: u32, dim: usize) -> Result<FiniteMedianAlgebra, HarnessError> {
    let c = FiniteMedianAlgebra::chain(chain as usize)?;
    let mut g = c.clone();
    for _ in 1..dim {
        g = FiniteMedianAlgebra::product(&g, &c)?;
    }
    Ok(g)
}

/// The corpus described by `spec`, in a fixed order.
pub fn build_corpus(spec: &CorpusSpec) -> Result<Vec<Instance>, HarnessError> {
    spec.validate()?;
    let mut out = Vec::new();
    if spec.cube3_subalgebras {
        let cube = FiniteMedianAlgebra::hypercube(3)?;
        for (i, a) in enumerate_subalgebras(&cube)?.into_iter().enumerate() {
            out.push(Instance::new(format!("cube3-sub-{i:03}"), a));
        }
    }
    let cube = FiniteMedianAlgebra::hypercube(spec.cube_dim)?;
    for i in 0..spec.cube_closures {
        let a = random_subalgebra(&cube, spec.max_seeds, spec.cap, spec.seed, i as u64)?;
        out.push(Instance::new(format!("cube{}-closure-{i:03}", spec.cube_dim), a));
    }
    let g = grid(spec.grid_chain, spec.grid_dim)?;
    for i in 0..spec.grid_closures {
        let a = random_subalgebra(&g, spec.max_seeds, spec.cap, spec.seed, (1 << 20) + i as u64)?;
        out.push(Instance::new(format!("grid{}x{}-closure-{i:03}", spec.grid_chain, spec.grid_dim), a));
    }
    let mut rng = rng_for(spec.seed, 1 << 21);
    for i in 0..spec.trees {
        let k = rng.gen_range(2..=spec.max_tree_vertices);
        out.push(Instance::new(format!("tree-{i:03}"), random_tree(k, &mut rng)?));
    }
    for leaves in spec.starlet_leaves.0..=spec.starlet_leaves.1 {
        let a = FiniteMedianAlgebra::starlet(leaves)?;
        if a.len() <= spec.cap {
            out.push(Instance::new(format!("starlet-{leaves}"), a));
        }
    }
    let pool: Vec<FiniteMedianAlgebra> =
        out.iter().map(|i| i.algebra.clone()).filter(|a| a.len() >= 2 && 2 * a.len() <= spec.cap).collect();
    if !pool.is_empty() {
        let mut rng = rng_for(spec.seed, 1 << 22);
        let mut made = 0;
        let mut tries = 0;
        while made < spec.products {
            tries += 1;
            if tries > spec.products * CLOSURE_RETRIES {
                return Err(HarnessError::RetryExhausted { tries, what: "product pairs under the cap".into() });
            }
            let a = pool.choose(&mut rng).expect("nonempty pool");
            let b = pool.choose(&mut rng).expect("nonempty pool");
            if a.len() * b.len() > spec.cap {
                continue;
            }
            let p = FiniteMedianAlgebra::product(a, b)?;
            out.push(Instance { id: format!("product-{made:03}"), algebra: p, factors: Some((a.clone(), b.clone())) });
            made += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cube_subalgebras() {
        let c1 = FiniteMedianAlgebra::hypercube(1).unwrap();
        assert_eq!(enumerate_subalgebras(&c1).unwrap().len(), 3);
        let big = FiniteMedianAlgebra::hypercube(4).unwrap();
        assert!(enumerate_subalgebras(&big).is_err());
    }

    #[test]
    fn closures_are_deterministic() {
        let cube = FiniteMedianAlgebra::hypercube(5).unwrap();
        for i in 0..5 {
            let a = random_subalgebra(&cube, 5, 128, 7, i).unwrap();
            let b = random_subalgebra(&cube, 5, 128, 7, i).unwrap();
            assert_eq!(a.labels(), b.labels());
        }
        let one = random_subalgebra(&cube, 1, 128, 7, 0).unwrap();
        assert_eq!(one.len(), 1);
    }

    #[test]
    fn trees_have_rank_one() {
        let mut rng = rng_for(3, 0);
        for k in 2..12 {
            let t = random_tree(k, &mut rng).unwrap();
            assert_eq!(t.len(), k);
            assert_eq!(t.rank().unwrap(), 1);
        }
    }
}
