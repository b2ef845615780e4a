//! Bitset-backed sets of edge identifiers.
//!
//! Cycles, flow supports, cuts and trees are all edge sets of a fixed host
//! graph. Edge ids are small dense integers (allocated by a monotone counter),
//! so a word vector gives O(1) membership and word-parallel symmetric
//! difference, which is what the cycle-space enumerations spend their time on.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::graph::EdgeId;

/// A set of edge ids. Trailing zero words are always trimmed so that equal
/// sets have equal representations.
#[derive(Clone, Default)]
pub struct EdgeSet {
    words: Vec<u64>,
}

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet { words: Vec::new() }
    }

    pub fn with_capacity(max_id: u32) -> Self {
        EdgeSet { words: Vec::with_capacity(max_id as usize / 64 + 1) }
    }

    fn trim(&mut self) {
        while let Some(&0) = self.words.last() {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, e: EdgeId) -> bool {
        let (w, b) = (e.index() / 64, e.index() % 64);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, e: EdgeId) -> bool {
        let (w, b) = (e.index() / 64, e.index() % 64);
        if w >= self.words.len() {
            return false;
        }
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        self.trim();
        present
    }

    /// Flips membership of `e`.
    pub fn toggle(&mut self, e: EdgeId) {
        let (w, b) = (e.index() / 64, e.index() % 64);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] ^= 1 << b;
        self.trim();
    }

    #[inline]
    pub fn contains(&self, e: EdgeId) -> bool {
        let (w, b) = (e.index() / 64, e.index() % 64);
        self.words.get(w).is_some_and(|x| x & (1 << b) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn clear(&mut self) {
        self.words.clear();
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter { words: &self.words, word: 0, bits: self.words.first().copied().unwrap_or(0) }
    }

    pub fn first(&self) -> Option<EdgeId> {
        self.iter().next()
    }

    /// In-place symmetric difference.
    pub fn xor_with(&mut self, other: &EdgeSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        self.trim();
    }

    pub fn union_with(&mut self, other: &EdgeSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &EdgeSet) {
        self.words.truncate(other.words.len());
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        self.trim();
    }

    pub fn difference_with(&mut self, other: &EdgeSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        self.trim();
    }

    pub fn symmetric_difference(&self, other: &EdgeSet) -> EdgeSet {
        let mut out = self.clone();
        out.xor_with(other);
        out
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &EdgeSet) -> EdgeSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &EdgeSet) -> EdgeSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersection_len(&self, other: &EdgeSet) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn to_vec(&self) -> Vec<EdgeId> {
        self.iter().collect()
    }
}

impl PartialEq for EdgeSet {
    fn eq(&self, other: &Self) -> bool {
        self.words == other.words
    }
}

impl Eq for EdgeSet {}

impl Hash for EdgeSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.words.hash(state);
    }
}

/// Lexicographic order on the ascending id sequences.
impl Ord for EdgeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for EdgeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|e| e.0)).finish()
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        let mut s = EdgeSet::new();
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl<'a> FromIterator<&'a EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = &'a EdgeId>>(iter: I) -> Self {
        iter.into_iter().copied().collect()
    }
}

impl Extend<EdgeId> for EdgeSet {
    fn extend<I: IntoIterator<Item = EdgeId>>(&mut self, iter: I) {
        for e in iter {
            self.insert(e);
        }
    }
}

impl<'a> IntoIterator for &'a EdgeSet {
    type Item = EdgeId;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word: usize,
    bits: u64,
}

impl Iterator for Iter<'_> {
    type Item = EdgeId;

    fn next(&mut self) -> Option<EdgeId> {
        loop {
            if self.bits != 0 {
                let b = self.bits.trailing_zeros();
                self.bits &= self.bits - 1;
                return Some(EdgeId((self.word * 64) as u32 + b));
            }
            self.word += 1;
            if self.word >= self.words.len() {
                return None;
            }
            self.bits = self.words[self.word];
        }
    }
}

impl Serialize for EdgeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|e| e.0))
    }
}

impl<'de> Deserialize<'de> for EdgeSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let ids = Vec::<u32>::deserialize(deserializer)?;
        Ok(ids.into_iter().map(EdgeId).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(ids: &[u32]) -> EdgeSet {
        ids.iter().map(|&i| EdgeId(i)).collect()
    }

    #[test]
    fn trimmed_equality() {
        let mut a = set(&[3, 130]);
        a.remove(EdgeId(130));
        assert_eq!(a, set(&[3]));
        a.toggle(EdgeId(3));
        assert!(a.is_empty());
        assert_eq!(a, EdgeSet::new());
    }

    #[test]
    fn ordering_is_lexicographic() {
        assert!(set(&[1, 5]) < set(&[2]));
        assert!(set(&[1]) < set(&[1, 2]));
    }

    proptest! {
        #[test]
        fn xor_is_a_group(a in prop::collection::vec(0u32..200, 0..30),
                          b in prop::collection::vec(0u32..200, 0..30),
                          c in prop::collection::vec(0u32..200, 0..30)) {
            let (a, b, c) = (set(&a), set(&b), set(&c));
            let left = a.symmetric_difference(&b).symmetric_difference(&c);
            let right = a.symmetric_difference(&b.symmetric_difference(&c));
            prop_assert_eq!(&left, &right);
            prop_assert_eq!(a.symmetric_difference(&b), b.symmetric_difference(&a));
            prop_assert_eq!(a.symmetric_difference(&EdgeSet::new()), a.clone());
            prop_assert!(a.symmetric_difference(&a).is_empty());
            prop_assert_eq!(a.symmetric_difference(&b).len(),
                a.len() + b.len() - 2 * a.intersection_len(&b));
        }
    }
}
