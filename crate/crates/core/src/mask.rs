use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// A subset of `0..len`, stored as a packed bitset.
///
/// Bits beyond `len` are always zero, so derived equality and ordering are
/// exact set equality and a deterministic total order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetMask {
    len: usize,
    words: Vec<u64>,
}

impl SubsetMask {
    pub fn empty(len: usize) -> Self {
        SubsetMask { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn full(len: usize) -> Self {
        let mut m = SubsetMask { len, words: vec![!0; len.div_ceil(64)] };
        m.trim();
        m
    }

    pub fn singleton(len: usize, i: usize) -> Self {
        let mut m = Self::empty(len);
        m.insert(i);
        m
    }

    pub fn from_indices(len: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut m = Self::empty(len);
        for i in items {
            m.insert(i);
        }
        m
    }

    pub fn from_fn(len: usize, mut pred: impl FnMut(usize) -> bool) -> Self {
        let mut m = Self::empty(len);
        for i in 0..len {
            if pred(i) {
                m.insert(i);
            }
        }
        m
    }

    fn trim(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Size of the ambient carrier.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.len, "index {i} outside universe {}", self.len);
        let fresh = !self.contains(i);
        self.words[i / 64] |= 1 << (i % 64);
        fresh
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.len, other.len, "mask universes differ");
        let words = self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect();
        let mut m = SubsetMask { len: self.len, words };
        m.trim();
        m
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a ^ b)
    }

    pub fn complement(&self) -> Self {
        let mut m = SubsetMask { len: self.len, words: self.words.iter().map(|w| !w).collect() };
        m.trim();
        m
    }

    pub fn union_with(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "mask universes differ");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "mask universes differ");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "mask universes differ");
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "mask universes differ");
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> Ones<'_> {
        Ones { words: &self.words, idx: 0, cur: self.words.first().copied().unwrap_or(0) }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Image of the set under an index map into a universe of size `len`.
    pub fn map(&self, len: usize, f: impl Fn(usize) -> usize) -> Self {
        SubsetMask::from_indices(len, self.iter().map(f))
    }
}

/// Iterator over the members of a [`SubsetMask`] in increasing order.
pub struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + bit);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_operations_are_exact() {
        let a = SubsetMask::from_indices(70, [0, 3, 64, 69]);
        let b = SubsetMask::from_indices(70, [3, 5, 69]);
        assert_eq!(a.union(&b).to_vec(), [0, 3, 5, 64, 69]);
        assert_eq!(a.intersection(&b).to_vec(), [3, 69]);
        assert_eq!(a.difference(&b).to_vec(), [0, 64]);
        assert_eq!(a.complement().count(), 66);
        assert!(!a.complement().contains(69));
        assert_eq!(SubsetMask::full(70).count(), 70);
        assert!(SubsetMask::empty(0).is_empty());
        assert!(SubsetMask::full(0).is_full());
    }

    #[test]
    fn subset_and_intersects() {
        let a = SubsetMask::from_indices(10, [1, 2]);
        let b = SubsetMask::from_indices(10, [1, 2, 7]);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert!(a.intersects(&b));
        assert!(!a.intersects(&SubsetMask::singleton(10, 9)));
    }
}
