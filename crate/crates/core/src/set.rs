//! Subsets of a finite group stored as bitsets over element indices.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A subset of a group of order `n`, one bit per element index.
///
/// Sets compare in *member-first lexicographic* order: at the first index where
/// two sets differ, the set containing that index sorts first. This is the
/// order in which a depth-first search that tries "include" before "exclude"
/// visits its leaves, and for antichains it coincides with lexicographic
/// order on the sorted index lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    n: usize,
    words: Vec<u64>,
}

impl ElementSet {
    pub fn empty(n: usize) -> Self {
        ElementSet {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, items: I) -> Result<Self> {
        let mut s = Self::empty(n);
        for i in items {
            if i >= n {
                return Err(Error::GroupMismatch(format!(
                    "index {i} out of range for a group of order {n}"
                )));
            }
            s.insert(i);
        }
        Ok(s)
    }

    /// Builds a set from a 64-bit mask; requires `n <= 64`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= 64, "from_mask requires n <= 64");
        let mut s = Self::empty(n);
        if n > 0 {
            let keep = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            s.words[0] = mask & keep;
        }
        s
    }

    /// The set as a 64-bit mask, when the universe is small enough.
    pub fn to_mask(&self) -> Option<u64> {
        if self.n > 64 {
            None
        } else {
            Some(self.words.first().copied().unwrap_or(0))
        }
    }

    /// Size of the ambient group.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.n, "index {i} out of range {}", self.n);
        let had = self.contains(i);
        self.words[i / 64] |= 1 << (i % 64);
        !had
    }

    pub fn remove(&mut self, i: usize) -> bool {
        let had = self.contains(i);
        if had {
            self.words[i / 64] &= !(1 << (i % 64));
        }
        had
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Members in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.n, other.n, "sets from groups of different order");
    }

    pub fn union(&self, other: &Self) -> Self {
        self.check_same(other);
        ElementSet {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.check_same(other);
        ElementSet {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.check_same(other);
        ElementSet {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check_same(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.check_same(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Comma-separated ascending indices, the stream serialization format.
    pub fn to_line(&self) -> String {
        let parts: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        parts.join(",")
    }
}

impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.n.cmp(&other.n) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let t = diff.trailing_zeros();
                return if a >> t & 1 == 1 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_line())
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_line())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = ElementSet::from_indices(70, [1, 3, 65]).unwrap();
        let b = ElementSet::from_indices(70, [3, 4]).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a.union(&b).to_vec(), vec![1, 3, 4, 65]);
        assert_eq!(a.intersection(&b).to_vec(), vec![3]);
        assert_eq!(a.difference(&b).to_vec(), vec![1, 65]);
        assert!(!a.is_disjoint(&b));
        assert!(ElementSet::from_indices(70, [3]).unwrap().is_subset(&b));
        assert_eq!(a.to_line(), "1,3,65");
        assert!(ElementSet::from_indices(4, [4]).is_err());
    }

    #[test]
    fn member_first_order() {
        let s = |v: &[usize]| ElementSet::from_indices(8, v.iter().copied()).unwrap();
        assert!(s(&[1, 2]) < s(&[1, 3]));
        assert!(s(&[0, 5]) < s(&[1]));
        assert!(s(&[1, 2]) < s(&[1]));
        assert_eq!(s(&[2, 3]).cmp(&s(&[2, 3])), Ordering::Equal);
    }

    #[test]
    fn mask_round_trip() {
        let s = ElementSet::from_mask(10, 0b10_0110_0001);
        assert_eq!(s.to_vec(), vec![0, 5, 6, 9]);
        assert_eq!(s.to_mask(), Some(0b10_0110_0001));
        assert_eq!(ElementSet::from_mask(3, u64::MAX).len(), 3);
    }
}
