use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Dense vertex identifier, `0..n`.
pub type Vertex = usize;

/// Largest vertex count a [`VertexSet`] can address.
pub const MAX_VERTICES: usize = 64;

/// A set of vertices of one host digraph, stored as a 64-bit mask.
///
/// Serializes as a sorted array of vertex ids.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "vertex count {n} exceeds {MAX_VERTICES}");
        if n == MAX_VERTICES {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: Vertex) -> Self {
        debug_assert!(v < MAX_VERTICES);
        VertexSet(1u64 << v)
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, v: Vertex) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: Vertex) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: Vertex) {
        self.0 &= !(1u64 << v);
    }

    #[must_use]
    pub fn with(self, v: Vertex) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    #[must_use]
    pub fn without(self, v: Vertex) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    pub const fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub const fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub const fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_proper_subset(self, other: Self) -> bool {
        self.is_subset(other) && self.0 != other.0
    }

    pub const fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    /// Smallest member.
    pub fn first(self) -> Option<Vertex> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as Vertex)
    }

    /// Largest member id plus one, or 0 for the empty set.
    pub fn span(self) -> usize {
        (64 - self.0.leading_zeros()) as usize
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<Vertex> {
        self.iter().collect()
    }

    /// Lexicographic comparison of the sorted member lists, so `{0} < {0,1} < {1}`.
    pub fn lex_cmp(self, other: Self) -> Ordering {
        self.iter().cmp(other.iter())
    }

    /// Iterates over every subset of `self` (including the empty set), largest mask first.
    pub fn subsets(self) -> Subsets {
        Subsets { universe: self.0, next: Some(self.0) }
    }
}

#[derive(Clone, Debug)]
pub struct Iter(u64);

impl Iterator for Iter {
    type Item = Vertex;

    fn next(&mut self) -> Option<Vertex> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as Vertex;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl IntoIterator for VertexSet {
    type Item = Vertex;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

pub struct Subsets {
    universe: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        let cur = self.next?;
        self.next = (cur != 0).then(|| (cur - 1) & self.universe);
        Some(VertexSet(cur))
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: Self) -> Self {
        self.union(rhs)
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: Self) -> Self {
        self.intersection(rhs)
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: Self) -> Self {
        self.difference(rhs)
    }
}

impl Not for VertexSet {
    type Output = VertexSet;
    fn not(self) -> Self {
        VertexSet(!self.0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let ids = Vec::<Vertex>::deserialize(deserializer)?;
        let mut s = VertexSet::EMPTY;
        for v in ids {
            if v >= MAX_VERTICES {
                return Err(serde::de::Error::custom(format!(
                    "vertex id {v} exceeds the {MAX_VERTICES}-vertex limit"
                )));
            }
            if s.contains(v) {
                return Err(serde::de::Error::custom(format!("vertex id {v} listed twice")));
            }
            s.insert(v);
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a: VertexSet = [0, 2, 5].into_iter().collect();
        let b: VertexSet = [2, 3].into_iter().collect();
        assert_eq!((a | b).to_vec(), vec![0, 2, 3, 5]);
        assert_eq!((a & b).to_vec(), vec![2]);
        assert_eq!((a - b).to_vec(), vec![0, 5]);
        assert_eq!(a.len(), 3);
        assert_eq!(a.first(), Some(0));
        assert_eq!(a.span(), 6);
        assert!(VertexSet::singleton(2).is_proper_subset(a));
        assert!(!a.is_proper_subset(a));
        assert_eq!(VertexSet::full(64).len(), 64);
    }

    #[test]
    fn lex_order_compares_sorted_lists() {
        let s = |v: &[usize]| v.iter().copied().collect::<VertexSet>();
        assert_eq!(s(&[0]).lex_cmp(s(&[0, 1])), Ordering::Less);
        assert_eq!(s(&[0, 1]).lex_cmp(s(&[1])), Ordering::Less);
        assert_eq!(s(&[0, 2]).lex_cmp(s(&[0, 1, 5])), Ordering::Greater);
    }

    #[test]
    fn subsets_enumerates_power_set() {
        let s: VertexSet = [1, 3, 4].into_iter().collect();
        let all: Vec<_> = s.subsets().collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|t| t.is_subset(s)));
        assert_eq!(*all.last().unwrap(), VertexSet::EMPTY);
    }

    #[test]
    fn serde_rejects_duplicates() {
        let s: VertexSet = serde_json::from_str("[3,1]").unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,3]");
        assert!(serde_json::from_str::<VertexSet>("[1,1]").is_err());
        assert!(serde_json::from_str::<VertexSet>("[64]").is_err());
    }
}
