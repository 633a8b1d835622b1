//! Finite median algebras.
//!
//! A [`FiniteMedianAlgebra`] is a carrier `0..n` with a total ternary
//! operation. Three backends share one interface:
//!
//! * an explicit `n³` table (the oracle representation, `n <= 256`);
//! * a coordinate backend: a median-closed subset of a product of finite
//!   chains, evaluated by coordinatewise majority and a binary search over
//!   mixed-radix keys;
//! * a lazy binary product of two algebras.
//!
//! Elements are ordered lexicographically by label when labels exist and by
//! input order otherwise.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::MedianError;
use crate::mask::SubsetMask;

/// Largest carrier any constructor will build.
pub const MAX_ELEMENTS: usize = 1 << 16;
/// Largest carrier stored as an explicit table.
pub const MAX_TABLE: usize = 256;
pub const MAX_HYPERCUBE_DIM: usize = 16;
/// Above this size M3 is checked on random quadruples.
pub const EXHAUSTIVE_AXIOM_LIMIT: usize = 64;
pub const AXIOM_SAMPLES: usize = 1_000_000;
const AXIOM_SEED: u64 = 0x6d65_6461_6c67_0001;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Hypercube,
    Chain,
    Product,
    Closure,
    Graph,
    Table,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::Hypercube => "hypercube",
            Provenance::Chain => "chain",
            Provenance::Product => "product",
            Provenance::Closure => "closure",
            Provenance::Graph => "graph",
            Provenance::Table => "table",
        }
    }
}

/// How the median axioms were established for an algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxiomVerdict {
    /// Coordinatewise majority on a median-closed subset of a product of
    /// chains; holds without a check.
    ByConstruction,
    Exhaustive,
    /// M1 and M2 exhaustive, M3 on `samples` random quadruples.
    Sampled {
        samples: usize,
    },
}

#[derive(Clone, Debug)]
enum Backend {
    Table(Vec<u8>),
    Coords { factors: Vec<u32>, strides: Vec<u64>, keys: Vec<u64> },
    Product { left: Box<FiniteMedianAlgebra>, right: Box<FiniteMedianAlgebra> },
}

#[derive(Clone, Debug)]
pub struct FiniteMedianAlgebra {
    n: usize,
    backend: Backend,
    labels: Option<Vec<Vec<u16>>>,
    provenance: Provenance,
    verdict: AxiomVerdict,
}

#[inline]
pub(crate) fn median3<T: Ord + Copy>(a: T, b: T, c: T) -> T {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if c <= lo {
        lo
    } else if c >= hi {
        hi
    } else {
        c
    }
}

fn strides_for(factors: &[u32]) -> Result<(Vec<u64>, u64), MedianError> {
    let mut strides = vec![0u64; factors.len()];
    let mut acc: u64 = 1;
    for i in (0..factors.len()).rev() {
        strides[i] = acc;
        acc = acc
            .checked_mul(factors[i] as u64)
            .ok_or(MedianError::SizeOverflow { requested: usize::MAX, max: MAX_ELEMENTS })?;
    }
    Ok((strides, acc))
}

fn key_of(label: &[u16], strides: &[u64]) -> u64 {
    label.iter().zip(strides).map(|(&c, &s)| c as u64 * s).sum()
}

fn check_size(n: usize, max: usize) -> Result<(), MedianError> {
    if n == 0 {
        Err(MedianError::EmptyCarrier)
    } else if n > max {
        Err(MedianError::SizeOverflow { requested: n, max })
    } else {
        Ok(())
    }
}

impl FiniteMedianAlgebra {
    /// The Boolean cube `{0,1}^k` with coordinatewise majority.
    pub fn hypercube(k: usize) -> Result<Self, MedianError> {
        if k > MAX_HYPERCUBE_DIM {
            return Err(MedianError::DimensionOutOfRange { dim: k, max: MAX_HYPERCUBE_DIM });
        }
        let n = 1usize << k;
        let labels = (0..n).map(|i| (0..k).map(|b| ((i >> (k - 1 - b)) & 1) as u16).collect()).collect();
        let factors = vec![2u32; k];
        let (strides, _) = strides_for(&factors)?;
        Ok(FiniteMedianAlgebra {
            n,
            backend: Backend::Coords { factors, strides, keys: (0..n as u64).collect() },
            labels: Some(labels),
            provenance: Provenance::Hypercube,
            verdict: AxiomVerdict::ByConstruction,
        })
    }

    /// The chain `0 < 1 < ... < k-1` with the betweenness median.
    pub fn chain(k: usize) -> Result<Self, MedianError> {
        check_size(k, MAX_ELEMENTS)?;
        let factors = vec![k as u32];
        let (strides, _) = strides_for(&factors)?;
        Ok(FiniteMedianAlgebra {
            n: k,
            backend: Backend::Coords { factors, strides, keys: (0..k as u64).collect() },
            labels: Some((0..k).map(|i| vec![i as u16]).collect()),
            provenance: Provenance::Chain,
            verdict: AxiomVerdict::ByConstruction,
        })
    }

    /// The star graph with `leaves` leaves; element 0 is the centre.
    pub fn starlet(leaves: usize) -> Result<Self, MedianError> {
        let edges: Vec<(usize, usize)> = (1..=leaves).map(|l| (0, l)).collect();
        Self::median_graph_from_edges(leaves + 1, &edges)
    }

    /// Coordinatewise product. Element `(i, j)` has index `i * |b| + j`.
    pub fn product(a: &Self, b: &Self) -> Result<Self, MedianError> {
        let n = a.n.saturating_mul(b.n);
        check_size(n, MAX_ELEMENTS)?;
        let labels = match (&a.labels, &b.labels) {
            (Some(la), Some(lb)) => Some(
                la.iter()
                    .flat_map(|x| lb.iter().map(move |y| x.iter().chain(y).copied().collect()))
                    .collect::<Vec<Vec<u16>>>(),
            ),
            _ => None,
        };
        let backend = match (&a.backend, &b.backend) {
            (Backend::Coords { factors: fa, keys: ka, .. }, Backend::Coords { factors: fb, keys: kb, .. }) => {
                let factors: Vec<u32> = fa.iter().chain(fb).copied().collect();
                let (strides, _) = strides_for(&factors)?;
                let (_, size_b) = strides_for(fb)?;
                let keys = ka.iter().flat_map(|&x| kb.iter().map(move |&y| x * size_b + y)).collect();
                Backend::Coords { factors, strides, keys }
            }
            _ => Backend::Product { left: Box::new(a.clone()), right: Box::new(b.clone()) },
        };
        let verdict = match (a.verdict, b.verdict) {
            (AxiomVerdict::Sampled { samples }, _) | (_, AxiomVerdict::Sampled { samples }) => {
                AxiomVerdict::Sampled { samples }
            }
            _ => AxiomVerdict::ByConstruction,
        };
        Ok(FiniteMedianAlgebra { n, backend, labels, provenance: Provenance::Product, verdict })
    }

    /// Builds an algebra from a flat table, `table[i*n*n + j*n + k] = med(i,j,k)`.
    ///
    /// The axioms are verified before the algebra is returned: exhaustively
    /// for `n <= 64`, otherwise M1/M2 exhaustively and M3 on random samples.
    pub fn from_median_table(n: usize, table: &[usize]) -> Result<Self, MedianError> {
        check_size(n, MAX_TABLE)?;
        if table.len() != n * n * n {
            return Err(MedianError::Malformed {
                reason: format!("table has {} entries, expected {}", table.len(), n * n * n),
            });
        }
        if let Some(pos) = table.iter().position(|&v| v >= n) {
            return Err(MedianError::Malformed {
                reason: format!(
                    "entry at ({}, {}, {}) is {} but the carrier has {n} elements",
                    pos / (n * n),
                    (pos / n) % n,
                    pos % n,
                    table[pos]
                ),
            });
        }
        let mut alg = FiniteMedianAlgebra {
            n,
            backend: Backend::Table(table.iter().map(|&v| v as u8).collect()),
            labels: None,
            provenance: Provenance::Table,
            verdict: AxiomVerdict::Exhaustive,
        };
        alg.verdict = alg.verify_axioms()?;
        Ok(alg)
    }

    /// A median-closed subset of the product of chains of the given lengths.
    /// Points are sorted lexicographically; closure is verified.
    pub fn from_coords(factors: &[u32], points: &[Vec<u16>]) -> Result<Self, MedianError> {
        check_size(points.len(), MAX_ELEMENTS)?;
        let (strides, _) = strides_for(factors)?;
        let mut labels: Vec<Vec<u16>> = points.to_vec();
        for p in &labels {
            if p.len() != factors.len() {
                return Err(MedianError::Malformed {
                    reason: format!("point {p:?} has {} coordinates, expected {}", p.len(), factors.len()),
                });
            }
            if let Some(i) = p.iter().zip(factors).position(|(&c, &f)| c as u32 >= f) {
                return Err(MedianError::Malformed {
                    reason: format!("point {p:?}: coordinate {i} outside chain of length {}", factors[i]),
                });
            }
        }
        labels.sort();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(MedianError::Malformed { reason: format!("duplicate point {:?}", w[0]) });
        }
        let keys = labels.iter().map(|l| key_of(l, &strides)).collect();
        let alg = FiniteMedianAlgebra {
            n: labels.len(),
            backend: Backend::Coords { factors: factors.to_vec(), strides, keys },
            labels: Some(labels),
            provenance: Provenance::Closure,
            verdict: AxiomVerdict::ByConstruction,
        };
        alg.check_coords_closed()?;
        Ok(alg)
    }

    fn check_coords_closed(&self) -> Result<(), MedianError> {
        let labels = self.labels.as_ref().expect("coordinate backend carries labels");
        let Backend::Coords { strides, keys, .. } = &self.backend else { return Ok(()) };
        for a in 0..self.n {
            for b in a..self.n {
                for c in b..self.n {
                    let key: u64 = (0..strides.len())
                        .map(|i| median3(labels[a][i], labels[b][i], labels[c][i]) as u64 * strides[i])
                        .sum();
                    if keys.binary_search(&key).is_err() {
                        return Err(MedianError::NotClosed { triple: [a, b, c] });
                    }
                }
            }
        }
        Ok(())
    }

    /// Median algebra of a median graph: the median of `u, v, w` is the
    /// unique vertex lying on geodesics between each pair.
    pub fn median_graph_from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, MedianError> {
        check_size(n, MAX_TABLE)?;
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(MedianError::MalformedEdge { edge: (a, b), reason: "endpoint out of range" });
            }
            if a == b {
                return Err(MedianError::MalformedEdge { edge: (a, b), reason: "self-loop" });
            }
            if !adj[a].contains(&b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut dist = vec![u16::MAX; n * n];
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0;
            let mut queue = alloc::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if row[v] == u16::MAX {
                        row[v] = row[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            if let Some(u) = row.iter().position(|&d| d == u16::MAX) {
                return Err(MedianError::Disconnected { unreachable: u });
            }
        }
        let d = |a: usize, b: usize| dist[a * n + b];
        let mut geodesic = vec![SubsetMask::empty(n); n * n];
        for u in 0..n {
            for v in u..n {
                let m = SubsetMask::from_fn(n, |z| d(u, z) + d(z, v) == d(u, v));
                geodesic[v * n + u] = m.clone();
                geodesic[u * n + v] = m;
            }
        }
        let mut table = vec![0u8; n * n * n];
        for u in 0..n {
            for v in u..n {
                let uv = &geodesic[u * n + v];
                for w in v..n {
                    let common = uv.intersection(&geodesic[v * n + w]).intersection(&geodesic[u * n + w]);
                    if common.count() != 1 {
                        return Err(MedianError::NotMedianGraph { triple: [u, v, w], candidates: common.count() });
                    }
                    let m = common.first().unwrap() as u8;
                    for (a, b, c) in [(u, v, w), (u, w, v), (v, u, w), (v, w, u), (w, u, v), (w, v, u)] {
                        table[(a * n + b) * n + c] = m;
                    }
                }
            }
        }
        let mut alg = FiniteMedianAlgebra {
            n,
            backend: Backend::Table(table),
            labels: None,
            provenance: Provenance::Graph,
            verdict: AxiomVerdict::Exhaustive,
        };
        alg.verdict = alg.verify_axioms()?;
        Ok(alg)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false; carriers are nonempty.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn elements(&self) -> Range<usize> {
        0..self.n
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn verdict(&self) -> AxiomVerdict {
        self.verdict
    }

    pub fn labels(&self) -> Option<&[Vec<u16>]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> Option<&[u16]> {
        self.labels.as_ref().map(|l| l[i].as_slice())
    }

    /// Chain lengths of the ambient product when the coordinate backend is
    /// in use.
    pub fn chain_factors(&self) -> Option<&[u32]> {
        match &self.backend {
            Backend::Coords { factors, .. } => Some(factors),
            _ => None,
        }
    }

    pub fn index_of_label(&self, label: &[u16]) -> Option<usize> {
        match &self.backend {
            Backend::Coords { strides, keys, .. } if label.len() == strides.len() => {
                keys.binary_search(&key_of(label, strides)).ok()
            }
            _ => self.labels.as_ref()?.iter().position(|l| l.as_slice() == label),
        }
    }

    /// Human-readable element name: the label tuple, or the index.
    pub fn element_name(&self, i: usize) -> String {
        match self.label(i) {
            Some(l) => {
                let parts: Vec<String> = l.iter().map(|c| format!("{c}")).collect();
                format!("({})", parts.join(","))
            }
            None => format!("{i}"),
        }
    }

    #[inline]
    pub fn median(&self, a: usize, b: usize, c: usize) -> usize {
        debug_assert!(a < self.n && b < self.n && c < self.n);
        match &self.backend {
            Backend::Table(t) => t[(a * self.n + b) * self.n + c] as usize,
            Backend::Coords { strides, keys, .. } => {
                let l = self.labels.as_ref().expect("coordinate backend carries labels");
                let (la, lb, lc) = (&l[a], &l[b], &l[c]);
                let key: u64 = (0..strides.len()).map(|i| median3(la[i], lb[i], lc[i]) as u64 * strides[i]).sum();
                keys.binary_search(&key).expect("coordinate carrier is median-closed")
            }
            Backend::Product { left, right } => {
                let nb = right.n;
                let i = left.median(a / nb, b / nb, c / nb);
                let j = right.median(a % nb, b % nb, c % nb);
                i * nb + j
            }
        }
    }

    /// Flat `n³` median table.
    pub fn to_table(&self) -> Result<Vec<usize>, MedianError> {
        check_size(self.n, MAX_TABLE)?;
        let n = self.n;
        let mut t = vec![0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    t[(a * n + b) * n + c] = self.median(a, b, c);
                }
            }
        }
        Ok(t)
    }

    /// Checks M1 (symmetry), M2 (absorption) and M3 (the exchange law).
    ///
    /// M1 and M2 are always exhaustive; M3 is exhaustive for `n <= 64` and
    /// sampled above that.
    pub fn verify_axioms(&self) -> Result<AxiomVerdict, MedianError> {
        let n = self.n;
        let m = |a, b, c| self.median(a, b, c);
        for a in 0..n {
            for b in 0..n {
                if m(a, b, b) != b {
                    return Err(MedianError::AxiomViolation { axiom: "M2", elements: vec![a, b, b] });
                }
                for c in 0..n {
                    let v = m(a, b, c);
                    if v >= n || v != m(b, a, c) || v != m(a, c, b) {
                        return Err(MedianError::AxiomViolation { axiom: "M1", elements: vec![a, b, c] });
                    }
                }
            }
        }
        let m3 = |a, b, c, d| m(m(a, b, d), c, d) == m(m(a, c, d), b, d);
        if n <= EXHAUSTIVE_AXIOM_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in b + 1..n {
                        for d in 0..n {
                            if !m3(a, b, c, d) {
                                return Err(MedianError::AxiomViolation { axiom: "M3", elements: vec![a, b, c, d] });
                            }
                        }
                    }
                }
            }
            Ok(AxiomVerdict::Exhaustive)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(AXIOM_SEED);
            for _ in 0..AXIOM_SAMPLES {
                let q: [usize; 4] = core::array::from_fn(|_| rng.gen_range(0..n));
                if !m3(q[0], q[1], q[2], q[3]) {
                    return Err(MedianError::AxiomViolation { axiom: "M3", elements: q.to_vec() });
                }
            }
            Ok(AxiomVerdict::Sampled { samples: AXIOM_SAMPLES })
        }
    }

    /// Smallest median-closed subset containing `seeds`, as a standalone
    /// algebra with inherited labels.
    pub fn median_closure(&self, seeds: &[usize]) -> Result<Self, MedianError> {
        self.median_closure_capped(seeds, MAX_ELEMENTS)
    }

    pub fn median_closure_capped(&self, seeds: &[usize], cap: usize) -> Result<Self, MedianError> {
        let mask = self.closure_mask(seeds, cap)?;
        Ok(self.induced_unchecked(&mask).0)
    }

    /// Member mask of the median closure of `seeds`.
    pub fn closure_mask(&self, seeds: &[usize], cap: usize) -> Result<SubsetMask, MedianError> {
        if seeds.is_empty() {
            return Err(MedianError::EmptyCarrier);
        }
        let mut mask = SubsetMask::empty(self.n);
        let mut members = Vec::new();
        for &s in seeds {
            if s >= self.n {
                return Err(MedianError::ElementOutOfRange { element: s, n: self.n });
            }
            if mask.insert(s) {
                members.push(s);
            }
        }
        // each triple is visited once, when its latest-added member is processed
        let mut k = 0;
        while k < members.len() {
            let x = members[k];
            for i in 0..=k {
                for j in i..=k {
                    let z = self.median(x, members[i], members[j]);
                    if mask.insert(z) {
                        members.push(z);
                        if members.len() > cap {
                            return Err(MedianError::ClosureTooLarge { max: cap });
                        }
                    }
                }
            }
            k += 1;
        }
        Ok(mask)
    }

    /// The subalgebra carried by `mask`, together with the ambient index of
    /// each of its elements. Fails if `mask` is not median-closed.
    pub fn induced(&self, mask: &SubsetMask) -> Result<(Self, Vec<usize>), MedianError> {
        let members = mask.to_vec();
        if members.is_empty() {
            return Err(MedianError::EmptyCarrier);
        }
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate().skip(i) {
                for &c in &members[j..] {
                    if !mask.contains(self.median(a, b, c)) {
                        return Err(MedianError::NotClosed { triple: [a, b, c] });
                    }
                }
            }
        }
        Ok(self.induced_unchecked(mask))
    }

    fn induced_unchecked(&self, mask: &SubsetMask) -> (Self, Vec<usize>) {
        let members = mask.to_vec();
        let s = members.len();
        let labels = self.labels.as_ref().map(|l| members.iter().map(|&i| l[i].clone()).collect());
        let backend = match &self.backend {
            Backend::Coords { factors, strides, keys } => Backend::Coords {
                factors: factors.clone(),
                strides: strides.clone(),
                keys: members.iter().map(|&i| keys[i]).collect(),
            },
            _ => {
                let mut pos = vec![usize::MAX; self.n];
                for (k, &i) in members.iter().enumerate() {
                    pos[i] = k;
                }
                let mut t = vec![0u8; s * s * s];
                for a in 0..s {
                    for b in 0..s {
                        for c in 0..s {
                            t[(a * s + b) * s + c] = pos[self.median(members[a], members[b], members[c])] as u8;
                        }
                    }
                }
                Backend::Table(t)
            }
        };
        if let Backend::Table(_) = backend {
            assert!(s <= MAX_TABLE, "table subalgebra of size {s} exceeds {MAX_TABLE}");
        }
        let verdict = match self.verdict {
            AxiomVerdict::Sampled { samples } => AxiomVerdict::Sampled { samples },
            v => v,
        };
        let alg = FiniteMedianAlgebra { n: s, backend, labels, provenance: Provenance::Closure, verdict };
        (alg, members)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube_index(bits: &[u16]) -> usize {
        bits.iter().fold(0, |acc, &b| acc * 2 + b as usize)
    }

    #[test]
    fn degenerate_cube_is_singleton() {
        let a = FiniteMedianAlgebra::hypercube(0).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a.median(0, 0, 0), 0);
    }

    #[test]
    fn square_median_from_the_nonconvex_example() {
        let a = FiniteMedianAlgebra::hypercube(2).unwrap();
        let m = a.median(cube_index(&[1, 0]), cube_index(&[1, 1]), cube_index(&[0, 1]));
        assert_eq!(a.label(m).unwrap(), &[1, 1]);
    }

    #[test]
    fn cube3_passes_exhaustive_axioms() {
        let a = FiniteMedianAlgebra::hypercube(3).unwrap();
        assert_eq!(a.verify_axioms().unwrap(), AxiomVerdict::Exhaustive);
    }

    #[test]
    fn hypercube_dimension_bound() {
        assert!(matches!(FiniteMedianAlgebra::hypercube(17), Err(MedianError::DimensionOutOfRange { dim: 17, .. })));
    }

    #[test]
    fn chain_median_is_middle() {
        let c = FiniteMedianAlgebra::chain(3).unwrap();
        assert_eq!(c.median(0, 1, 2), 1);
        assert_eq!(c.median(2, 0, 1), 1);
        assert_eq!(FiniteMedianAlgebra::chain(1).unwrap().len(), 1);
        assert!(FiniteMedianAlgebra::chain(0).is_err());
    }

    #[test]
    fn chain_is_conservative() {
        let c = FiniteMedianAlgebra::chain(5).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                for d in 0..5 {
                    let m = c.median(a, b, d);
                    assert!(m == a || m == b || m == d);
                }
            }
        }
    }

    #[test]
    fn singleton_table() {
        let a = FiniteMedianAlgebra::from_median_table(1, &[0]).unwrap();
        assert_eq!(a.provenance(), Provenance::Table);
    }

    #[test]
    fn absorption_violation_reported() {
        // med(0,1,1) = 0 breaks M2
        let mut t = FiniteMedianAlgebra::chain(2).unwrap().to_table().unwrap();
        let at = |a: usize, b: usize, c: usize| (a * 2 + b) * 2 + c;
        t[at(0, 1, 1)] = 0;
        let err = FiniteMedianAlgebra::from_median_table(2, &t).unwrap_err();
        assert_eq!(err, MedianError::AxiomViolation { axiom: "M2", elements: vec![0, 1, 1] });
    }

    #[test]
    fn table_of_square_round_trips() {
        let sq = FiniteMedianAlgebra::hypercube(2).unwrap();
        let t = FiniteMedianAlgebra::from_median_table(4, &sq.to_table().unwrap()).unwrap();
        assert_eq!(t.provenance(), Provenance::Table);
        assert_eq!(t.verdict(), AxiomVerdict::Exhaustive);
    }

    #[test]
    fn malformed_table_rejected() {
        assert!(matches!(FiniteMedianAlgebra::from_median_table(2, &[0; 7]), Err(MedianError::Malformed { .. })));
        assert!(matches!(FiniteMedianAlgebra::from_median_table(1, &[3]), Err(MedianError::Malformed { .. })));
    }

    #[test]
    fn graph_path_is_chain() {
        let p = FiniteMedianAlgebra::median_graph_from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(p.median(0, 1, 2), 1);
        assert_eq!(p.median(0, 2, 2), 2);
    }

    #[test]
    fn graph_four_cycle_is_square() {
        let c4 = FiniteMedianAlgebra::median_graph_from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(c4.median(0, 2, 1), 1);
        assert_eq!(c4.median(1, 3, 0), 0);
    }

    #[test]
    fn triangle_is_not_median() {
        let err = FiniteMedianAlgebra::median_graph_from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap_err();
        assert_eq!(err, MedianError::NotMedianGraph { triple: [0, 1, 2], candidates: 0 });
    }

    #[test]
    fn disconnected_graph_rejected() {
        let err = FiniteMedianAlgebra::median_graph_from_edges(3, &[(0, 1)]).unwrap_err();
        assert_eq!(err, MedianError::Disconnected { unreachable: 2 });
    }

    #[test]
    fn bad_edges_rejected() {
        assert!(matches!(
            FiniteMedianAlgebra::median_graph_from_edges(2, &[(0, 0)]),
            Err(MedianError::MalformedEdge { edge: (0, 0), .. })
        ));
        assert!(matches!(
            FiniteMedianAlgebra::median_graph_from_edges(2, &[(0, 5)]),
            Err(MedianError::MalformedEdge { .. })
        ));
    }

    #[test]
    fn closure_examples() {
        let sq = FiniteMedianAlgebra::hypercube(2).unwrap();
        assert_eq!(sq.median_closure(&[2]).unwrap().len(), 1);
        let diag = sq.median_closure(&[0, 3]).unwrap();
        assert_eq!(diag.labels().unwrap(), &[vec![0, 0], vec![1, 1]]);

        let cube = FiniteMedianAlgebra::hypercube(3).unwrap();
        let seeds = [cube_index(&[0, 0, 0]), cube_index(&[1, 1, 0]), cube_index(&[1, 0, 1])];
        let cl = cube.median_closure(&seeds).unwrap();
        assert!(cl.index_of_label(&[1, 0, 0]).is_some());
        assert_eq!(cl.len(), 4);
    }

    #[test]
    fn closure_cap_enforced() {
        let cube = FiniteMedianAlgebra::hypercube(3).unwrap();
        let err = cube.median_closure_capped(&[0, 3, 5, 6], 5).unwrap_err();
        assert_eq!(err, MedianError::ClosureTooLarge { max: 5 });
    }

    #[test]
    fn product_labels_and_size() {
        let c3 = FiniteMedianAlgebra::chain(3).unwrap();
        let p = FiniteMedianAlgebra::product(&c3, &c3).unwrap();
        assert_eq!(p.len(), 9);
        assert_eq!(p.label(5).unwrap(), &[1, 2]);
        assert_eq!(p.median(0, 8, 2), 2);
        // identity factor
        let one = FiniteMedianAlgebra::chain(1).unwrap();
        let q = FiniteMedianAlgebra::product(&one, &c3).unwrap();
        assert_eq!(q.len(), 3);
        assert_eq!(q.median(0, 2, 1), 1);
    }

    #[test]
    fn lazy_product_matches_table() {
        let st = FiniteMedianAlgebra::starlet(3).unwrap();
        let c2 = FiniteMedianAlgebra::chain(2).unwrap();
        let p = FiniteMedianAlgebra::product(&st, &c2).unwrap();
        assert_eq!(p.len(), 8);
        assert!(p.labels().is_none());
        assert_eq!(p.verify_axioms().unwrap(), AxiomVerdict::Exhaustive);
    }

    #[test]
    fn coords_loader_checks_closure() {
        let err =
            FiniteMedianAlgebra::from_coords(&[2, 2, 2], &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap_err();
        assert!(matches!(err, MedianError::NotClosed { .. }));
        let ok = FiniteMedianAlgebra::from_coords(&[3], &[vec![2], vec![0]]).unwrap();
        assert_eq!(ok.labels().unwrap(), &[vec![0], vec![2]]);
    }

    #[test]
    fn induced_rejects_open_subsets() {
        let sq = FiniteMedianAlgebra::hypercube(2).unwrap();
        let m = SubsetMask::from_indices(4, [1, 2, 3]);
        assert!(sq.induced(&m).is_ok());
        let c = FiniteMedianAlgebra::chain(3).unwrap();
        assert!(c.induced(&SubsetMask::from_indices(3, [0, 2])).is_ok());
        let st = FiniteMedianAlgebra::starlet(3).unwrap();
        assert!(matches!(st.induced(&SubsetMask::from_indices(4, [1, 2, 3])), Err(MedianError::NotClosed { .. })));
    }
}
