//! The Roller embedding, consistent orientations of the wall set, and
//! truncation consistency of symbolic compactifications.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::FiniteMedianAlgebra;
use crate::error::{MedianError, Violation};
use crate::mask::SubsetMask;
use crate::symbolic::{ExtInt, SymbolicCompactification, SymbolicFactor};
use crate::walls::WallSet;
use crate::Check;

/// Wall bound for orientation enumeration.
pub const MAX_ORIENTATION_WALLS: usize = 40;

/// One chosen side per wall: bit `w` set means `side_b` of wall `w`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Orientation {
    pub choice: SubsetMask,
}

impl Orientation {
    pub fn side<'a>(&self, walls: &'a WallSet, w: usize) -> &'a SubsetMask {
        let wall = walls.wall(w);
        if self.choice.contains(w) {
            &wall.side_b
        } else {
            &wall.side_a
        }
    }

    /// Elements lying in every chosen side.
    pub fn kernel(&self, walls: &WallSet, n: usize) -> SubsetMask {
        let mut k = SubsetMask::full(n);
        for w in 0..walls.len() {
            k.intersect_with(self.side(walls, w));
        }
        k
    }
}

/// `ι(x)`: the side indicator of `x` over the walls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RollerEmbedding {
    pub vectors: Vec<SubsetMask>,
}

/// The Roller embedding, verified injective and median-preserving into the
/// Boolean cube over the walls.
pub fn roller_embedding(a: &FiniteMedianAlgebra, walls: &WallSet) -> Result<RollerEmbedding, Violation> {
    let vectors: Vec<SubsetMask> = a.elements().map(|x| walls.sign(x).clone()).collect();
    let mut sorted: Vec<(&SubsetMask, usize)> = vectors.iter().zip(0..).collect();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Violation::new("roller embedding is not injective", vec![w[0].1, w[1].1]));
    }
    for x in a.elements() {
        for y in x..a.len() {
            for z in y..a.len() {
                let (p, q, r) = (&vectors[x], &vectors[y], &vectors[z]);
                let majority = p.intersection(q).union(&p.intersection(r)).union(&q.intersection(r));
                if vectors[a.median(x, y, z)] != majority {
                    return Err(Violation::new("roller embedding does not preserve the median", vec![x, y, z]));
                }
            }
        }
    }
    Ok(RollerEmbedding { vectors })
}

/// All choices of one side per wall with pairwise intersecting sides.
///
/// Choosing a side `H` forces, for every other wall, the side containing
/// `H` whenever `H` misses the opposite side; branching happens only after
/// propagation settles.
pub fn consistent_orientations(walls: &WallSet) -> Result<Vec<Orientation>, MedianError> {
    let k = walls.len();
    if k > MAX_ORIENTATION_WALLS {
        return Err(MedianError::TooManyWalls { walls: k, max: MAX_ORIENTATION_WALLS });
    }
    // forces[w][s] = (wall, side) pairs implied by choosing side s of w
    let forces: Vec<[Vec<(usize, bool)>; 2]> = (0..k)
        .map(|w| {
            let wall = walls.wall(w);
            [false, true].map(|s| {
                let h = if s { &wall.side_b } else { &wall.side_a };
                (0..k)
                    .filter(|&v| v != w)
                    .filter_map(|v| {
                        let other = walls.wall(v);
                        if !h.intersects(&other.side_a) {
                            Some((v, true))
                        } else if !h.intersects(&other.side_b) {
                            Some((v, false))
                        } else {
                            None
                        }
                    })
                    .collect()
            })
        })
        .collect();
    let mut out = Vec::new();
    let mut state = vec![None; k];
    orient(&forces, &mut state, &mut out);
    out.sort();
    Ok(out)
}

fn assign(
    forces: &[[Vec<(usize, bool)>; 2]],
    state: &mut [Option<bool>],
    w: usize,
    s: bool,
    trail: &mut Vec<usize>,
) -> bool {
    match state[w] {
        Some(t) => return t == s,
        None => {
            state[w] = Some(s);
            trail.push(w);
        }
    }
    let mut queue = vec![(w, s)];
    while let Some((v, side)) = queue.pop() {
        for &(u, forced) in &forces[v][side as usize] {
            match state[u] {
                Some(t) if t != forced => return false,
                Some(_) => {}
                None => {
                    state[u] = Some(forced);
                    trail.push(u);
                    queue.push((u, forced));
                }
            }
        }
    }
    true
}

fn orient(forces: &[[Vec<(usize, bool)>; 2]], state: &mut Vec<Option<bool>>, out: &mut Vec<Orientation>) {
    let Some(w) = state.iter().position(Option::is_none) else {
        let choice = SubsetMask::from_fn(state.len(), |i| state[i] == Some(true));
        out.push(Orientation { choice });
        return;
    };
    for s in [false, true] {
        let mut trail = Vec::new();
        if assign(forces, state, w, s, &mut trail) {
            orient(forces, state, out);
        }
        for v in trail {
            state[v] = None;
        }
    }
}

/// Every consistent orientation is `ι(x)` for exactly one `x`, and there
/// are exactly `|A|` of them.
pub fn roller_check(a: &FiniteMedianAlgebra, walls: &WallSet) -> Check {
    let emb = roller_embedding(a, walls)?;
    let orients = consistent_orientations(walls)?;
    if orients.len() != a.len() {
        return Err(Violation::new(
            format!("{} consistent orientations for {} elements", orients.len(), a.len()),
            Vec::new(),
        ));
    }
    for o in &orients {
        let kernel = o.kernel(walls, a.len());
        let Some(x) = kernel.first().filter(|_| kernel.count() == 1) else {
            return Err(Violation::new("orientation is not principal", kernel.to_vec()));
        };
        if emb.vectors[x] != o.choice {
            return Err(Violation::new("orientation differs from the embedding of its point", vec![x]));
        }
    }
    Ok(())
}

/// Checks, for the truncations at `r` and `r + 1`:
///
/// * the `r`-truncation sits in the `(r+1)`-truncation as a convex
///   subalgebra;
/// * every wall of the smaller one is the trace of a wall of the larger,
///   and every trace that splits the image is a wall, so the Roller
///   embedding restricts;
/// * every sampled boundary point, projected to the `r`-truncation by the
///   median with its extreme corners, lands on the cut sides the point
///   itself selects.
pub fn truncation_consistency(sym: &SymbolicCompactification, r: u32) -> Check {
    if r == 0 {
        return Err(Violation::new("truncation radius must be positive", Vec::new()));
    }
    let small = sym.truncation(r)?;
    let big = sym.truncation(r + 1)?;
    let embed: Vec<usize> = small
        .elements()
        .map(|x| {
            let p = sym.from_label(small.label(x).expect("labelled"), r);
            let l = sym.to_label(&p, r + 1).expect("truncations are nested");
            big.index_of_label(&l).expect("nested point present")
        })
        .collect();
    crate::calculus::check_homomorphism(&small, &big, &embed)?;
    let image = SubsetMask::from_indices(big.len(), embed.iter().copied());
    if let Some(w) = big.convexity_witness(&image) {
        return Err(Violation::new("truncation is not convex in the next one", w.to_vec()));
    }

    let ws_small = small.walls()?;
    let ws_big = big.walls()?;
    let pull = |m: &SubsetMask| SubsetMask::from_fn(small.len(), |x| m.contains(embed[x]));
    let mut traced = SubsetMask::empty(ws_small.len());
    for wall in ws_big.walls() {
        let (a, b) = (pull(&wall.side_a), pull(&wall.side_b));
        if a.is_empty() || b.is_empty() {
            continue;
        }
        let found =
            ws_small.walls().iter().position(|w| (w.side_a == a && w.side_b == b) || (w.side_a == b && w.side_b == a));
        match found {
            Some(i) => {
                traced.insert(i);
            }
            None => return Err(Violation::new("trace of a wall is not a wall of the truncation", Vec::new())),
        }
    }
    if !traced.is_full() {
        return Err(Violation::new("a wall of the truncation does not extend", Vec::new()));
    }

    for p in boundary_samples(sym, r) {
        let q = sym.project(&p, r);
        let label =
            sym.to_label(&q, r).ok_or_else(|| Violation::new("projection leaves the truncation", Vec::new()))?;
        let x = small.index_of_label(&label).ok_or_else(|| Violation::new("projected point missing", Vec::new()))?;
        for w in 0..ws_small.len() {
            let (g0, g1) = ws_small.generator(w);
            let (l0, l1) = (small.label(g0).unwrap(), small.label(g1).unwrap());
            let axis = (0..l0.len()).find(|&i| l0[i] != l1[i]).expect("generators differ");
            // the cut between values t and t + 1 on this axis
            let lo_end = if l0[axis] < l1[axis] { g0 } else { g1 };
            let threshold = sym.from_label(small.label(lo_end).unwrap(), r)[axis];
            let p_low = p[axis] <= threshold;
            let x_low = ws_small.wall(w).side_of(lo_end).contains(x);
            if p_low != x_low {
                return Err(Violation::new(
                    format!("boundary point orients wall {w} differently from its projection"),
                    vec![x],
                ));
            }
        }
    }
    Ok(())
}

/// Boundary points whose line coordinates are drawn from
/// `{-∞, +∞, -(r+2), 0, r+2}` with at least one infinite coordinate, and
/// whose chain coordinates are the chain extremes.
fn boundary_samples(sym: &SymbolicCompactification, r: u32) -> Vec<Vec<ExtInt>> {
    let far = r as i64 + 2;
    let mut out: Vec<Vec<ExtInt>> = vec![Vec::new()];
    for f in sym.factors() {
        let values: Vec<ExtInt> = match f {
            SymbolicFactor::FiniteChain(k) => {
                let mut v = vec![ExtInt::Fin(0), ExtInt::Fin(*k as i64 - 1)];
                v.dedup();
                v
            }
            SymbolicFactor::IntegerLine => {
                vec![ExtInt::NegInf, ExtInt::PosInf, ExtInt::Fin(-far), ExtInt::Fin(0), ExtInt::Fin(far)]
            }
        };
        out = out
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out.retain(|p| sym.is_boundary(p));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::symbolic_mmc;

    #[test]
    fn orientation_counts() {
        for a in [
            FiniteMedianAlgebra::chain(3).unwrap(),
            FiniteMedianAlgebra::hypercube(2).unwrap(),
            FiniteMedianAlgebra::hypercube(3).unwrap(),
            FiniteMedianAlgebra::starlet(4).unwrap(),
        ] {
            let ws = a.walls().unwrap();
            assert_eq!(consistent_orientations(&ws).unwrap().len(), a.len());
            roller_check(&a, &ws).unwrap();
        }
    }

    #[test]
    fn starlet_embedding_has_at_most_one_bit() {
        let s = FiniteMedianAlgebra::starlet(4).unwrap();
        let ws = s.walls().unwrap();
        let emb = roller_embedding(&s, &ws).unwrap();
        // element 0 is on side_a of every wall
        assert!(emb.vectors.iter().all(|v| v.count() <= 1));
    }

    #[test]
    fn chain_embedding_is_a_staircase() {
        let c = FiniteMedianAlgebra::chain(4).unwrap();
        let ws = c.walls().unwrap();
        let emb = roller_embedding(&c, &ws).unwrap();
        let counts: Vec<usize> = emb.vectors.iter().map(SubsetMask::count).collect();
        assert_eq!(counts, [0, 1, 2, 3]);
    }

    #[test]
    fn line_truncations_are_consistent() {
        let z = symbolic_mmc(&[SymbolicFactor::IntegerLine]).unwrap();
        for r in 1..=4 {
            truncation_consistency(&z, r).unwrap();
            let top = z.project(&[ExtInt::PosInf], r);
            assert_eq!(top, [ExtInt::Fin(r as i64)]);
        }
        let z2 = symbolic_mmc(&[SymbolicFactor::IntegerLine; 2]).unwrap();
        truncation_consistency(&z2, 1).unwrap();
        truncation_consistency(&z2, 2).unwrap();
        let mixed = symbolic_mmc(&[SymbolicFactor::IntegerLine, SymbolicFactor::FiniteChain(3)]).unwrap();
        truncation_consistency(&mixed, 2).unwrap();
    }
}
