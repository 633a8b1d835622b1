//! Finite covers: stars, wedges, refinement, pullbacks and traces.
//!
//! Covers are kept in canonical form: no empty member, no member contained
//! in another, members sorted. Star and refinement semantics are invariant
//! under this normalisation, so canonical covers compare by equality.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::MedianError;
use crate::mask::SubsetMask;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cover {
    universe: usize,
    members: Vec<SubsetMask>,
}

fn canonicalise(mut sets: Vec<SubsetMask>) -> Vec<SubsetMask> {
    sets.retain(|s| !s.is_empty());
    // larger sets first so a dominated set is always seen after its dominator
    sets.sort_by(|a, b| b.count().cmp(&a.count()).then_with(|| a.cmp(b)));
    sets.dedup();
    let mut kept: Vec<SubsetMask> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|k| s.is_subset(k)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

impl Cover {
    /// Fails with `NotACover` unless the members' union is the whole carrier.
    pub fn new(universe: usize, members: Vec<SubsetMask>) -> Result<Self, MedianError> {
        let mut union = SubsetMask::empty(universe);
        for m in &members {
            if m.universe() != universe {
                return Err(MedianError::CarrierMismatch { left: universe, right: m.universe() });
            }
            union.union_with(m);
        }
        if !union.is_full() {
            return Err(MedianError::NotACover);
        }
        Ok(Cover { universe, members: canonicalise(members) })
    }

    /// `{X}`.
    pub fn trivial(universe: usize) -> Self {
        Cover { universe, members: canonicalise(alloc::vec![SubsetMask::full(universe)]) }
    }

    /// The partition into singletons.
    pub fn discrete(universe: usize) -> Self {
        Cover { universe, members: (0..universe).map(|i| SubsetMask::singleton(universe, i)).collect() }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_partition(&self) -> bool {
        self.members.iter().map(SubsetMask::count).sum::<usize>() == self.universe
    }

    fn same_carrier(&self, other: &Cover) -> Result<(), MedianError> {
        if self.universe != other.universe {
            return Err(MedianError::CarrierMismatch { left: self.universe, right: other.universe });
        }
        Ok(())
    }

    /// `St(x, α)`: the union of members containing `x`.
    pub fn star(&self, x: usize) -> SubsetMask {
        let mut st = SubsetMask::empty(self.universe);
        for m in self.members.iter().filter(|m| m.contains(x)) {
            st.union_with(m);
        }
        st
    }

    /// `St(S, α)`: the union of members meeting `s`.
    pub fn star_of_set(&self, s: &SubsetMask) -> SubsetMask {
        let mut st = SubsetMask::empty(self.universe);
        for m in self.members.iter().filter(|m| m.intersects(s)) {
            st.union_with(m);
        }
        st
    }

    /// `α ∧ β`: all pairwise intersections, canonicalised.
    pub fn wedge(&self, other: &Cover) -> Result<Cover, MedianError> {
        self.same_carrier(other)?;
        let mut sets = Vec::with_capacity(self.members.len() * other.members.len());
        for a in &self.members {
            for b in &other.members {
                sets.push(a.intersection(b));
            }
        }
        Ok(Cover { universe: self.universe, members: canonicalise(sets) })
    }

    /// Every member of `self` lies inside some member of `other`.
    pub fn refines(&self, other: &Cover) -> Result<bool, MedianError> {
        self.same_carrier(other)?;
        Ok(self.members.iter().all(|m| other.members.iter().any(|o| m.is_subset(o))))
    }

    /// `{St(M, self)}` refines `other`.
    pub fn star_refines(&self, other: &Cover) -> Result<bool, MedianError> {
        self.same_carrier(other)?;
        Ok(self.members.iter().all(|m| {
            let st = self.star_of_set(m);
            other.members.iter().any(|o| st.is_subset(o))
        }))
    }

    /// `f⁻¹(self)` for `f: 0..f.len() -> 0..universe`.
    pub fn pullback(&self, f: &[usize]) -> Cover {
        let n = f.len();
        let sets = self.members.iter().map(|m| SubsetMask::from_fn(n, |i| m.contains(f[i]))).collect();
        Cover { universe: n, members: canonicalise(sets) }
    }

    /// `{M ∩ S}` re-indexed onto the members of `s` in increasing order.
    pub fn trace(&self, s: &SubsetMask) -> Cover {
        let idx = s.to_vec();
        let sets = self.members.iter().map(|m| SubsetMask::from_fn(idx.len(), |i| m.contains(idx[i]))).collect();
        Cover { universe: idx.len(), members: canonicalise(sets) }
    }
}

/// A finite family of distinct covers, kept sorted, and the filter it
/// generates under wedges and coarsening.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverFamily {
    universe: usize,
    covers: BTreeSet<Cover>,
}

impl CoverFamily {
    pub fn new(universe: usize) -> Self {
        CoverFamily { universe, covers: BTreeSet::new() }
    }

    pub fn from_covers(universe: usize, covers: Vec<Cover>) -> Result<Self, MedianError> {
        let mut fam = CoverFamily::new(universe);
        for c in covers {
            fam.push(c)?;
        }
        Ok(fam)
    }

    pub fn push(&mut self, c: Cover) -> Result<(), MedianError> {
        if c.universe != self.universe {
            return Err(MedianError::CarrierMismatch { left: self.universe, right: c.universe });
        }
        self.covers.insert(c);
        Ok(())
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.covers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covers.is_empty()
    }

    pub fn covers(&self) -> impl Iterator<Item = &Cover> {
        self.covers.iter()
    }

    /// The finest base element: the wedge of every generator. `{X}` when
    /// the family is empty.
    pub fn total_wedge(&self) -> Cover {
        total_wedge(self.universe, self.covers.iter())
    }

    /// Whether `c` belongs to the generated filter.
    pub fn contains(&self, c: &Cover) -> Result<bool, MedianError> {
        self.total_wedge().refines(c)
    }

    /// Whether both families generate the same filter.
    pub fn same_filter(&self, other: &CoverFamily) -> Result<bool, MedianError> {
        let (a, b) = (self.total_wedge(), other.total_wedge());
        Ok(a.refines(&b)? && b.refines(&a)?)
    }
}

pub(crate) fn total_wedge<'a>(universe: usize, covers: impl Iterator<Item = &'a Cover>) -> Cover {
    let mut acc = Cover::trivial(universe);
    for c in covers {
        acc = acc.wedge(c).expect("covers share the carrier");
        if acc.members.iter().all(|m| m.count() == 1) {
            break;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cover(n: usize, sets: &[&[usize]]) -> Cover {
        Cover::new(n, sets.iter().map(|s| SubsetMask::from_indices(n, s.iter().copied())).collect()).unwrap()
    }

    #[test]
    fn canonical_form_drops_dominated_members() {
        let c = cover(3, &[&[0, 1], &[0], &[1, 2], &[]]);
        assert_eq!(c.len(), 2);
        assert!(Cover::new(3, alloc::vec![SubsetMask::singleton(3, 0)]).is_err());
    }

    #[test]
    fn wedge_is_idempotent() {
        let c = cover(4, &[&[0, 1, 2], &[2, 3]]);
        assert_eq!(c.wedge(&c).unwrap(), c);
    }

    #[test]
    fn discrete_refines_everything() {
        let c = cover(4, &[&[0, 1, 2], &[2, 3]]);
        assert!(Cover::discrete(4).refines(&c).unwrap());
        assert!(c.refines(&Cover::trivial(4)).unwrap());
        assert!(!Cover::trivial(4).refines(&c).unwrap());
    }

    #[test]
    fn stars() {
        let c = cover(4, &[&[0, 1], &[1, 2], &[2, 3]]);
        assert_eq!(c.star(1).to_vec(), [0, 1, 2]);
        assert_eq!(c.star(3).to_vec(), [2, 3]);
        assert_eq!(c.star_of_set(&SubsetMask::from_indices(4, [0, 3])).count(), 4);
    }

    #[test]
    fn star_refinement() {
        let fine = cover(4, &[&[0], &[1], &[2], &[3]]);
        let coarse = cover(4, &[&[0, 1], &[2, 3]]);
        assert!(fine.star_refines(&coarse).unwrap());
        let chain = cover(4, &[&[0, 1], &[1, 2], &[2, 3]]);
        assert!(!chain.star_refines(&coarse).unwrap());
    }

    #[test]
    fn wedge_distributes_over_stars() {
        let a = cover(5, &[&[0, 1, 2], &[2, 3, 4]]);
        let b = cover(5, &[&[0, 1], &[1, 2, 3], &[3, 4]]);
        let w = a.wedge(&b).unwrap();
        for x in 0..5 {
            assert_eq!(w.star(x), a.star(x).intersection(&b.star(x)));
        }
    }

    #[test]
    fn mismatched_carriers() {
        assert!(matches!(
            Cover::trivial(2).wedge(&Cover::trivial(3)),
            Err(MedianError::CarrierMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn pullback_and_trace() {
        let c = cover(3, &[&[0, 1], &[1, 2]]);
        let p = c.pullback(&[0, 0, 2, 2]);
        assert_eq!(p, cover(4, &[&[0, 1], &[2, 3]]));
        let t = c.trace(&SubsetMask::from_indices(3, [0, 2]));
        assert_eq!(t, Cover::discrete(2));
    }

    #[test]
    fn empty_family_is_trivial() {
        let fam = CoverFamily::new(3);
        assert_eq!(fam.total_wedge(), Cover::trivial(3));
        assert!(fam.contains(&Cover::trivial(3)).unwrap());
        assert!(!fam.contains(&Cover::discrete(3)).unwrap());
    }
}
