//! Subset representations shared by every algorithm in the crate.
//!
//! Single frames use [`FocalSet`], a 64-bit index mask. Product frames use
//! [`ConfigSet`], a fixed-width bitset over configuration indices. Both order
//! canonically by their value read as an unsigned integer, so the smallest
//! mask sorts first.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;

/// Set operations the structuring algorithms need.
pub trait SetLike: Clone + Eq + Ord + Hash + fmt::Debug {
    fn intersection(&self, other: &Self) -> Self;
    fn union(&self, other: &Self) -> Self;
    fn difference(&self, other: &Self) -> Self;
    /// Number of elements.
    fn cardinality(&self) -> usize;
    fn is_empty(&self) -> bool;
    /// `self ⊆ other`.
    fn is_subset(&self, other: &Self) -> bool;

    fn is_strict_subset(&self, other: &Self) -> bool {
        self != other && self.is_subset(other)
    }

    fn intersects(&self, other: &Self) -> bool {
        !self.intersection(other).is_empty()
    }
}

/// A subset of a single frame, stored as an index mask (bit `i` = element `i`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FocalSet(u64);

impl FocalSet {
    pub const EMPTY: FocalSet = FocalSet(0);

    pub const fn from_mask(mask: u64) -> Self {
        FocalSet(mask)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        FocalSet(indices.into_iter().fold(0u64, |m, i| {
            assert!(i < 64, "element index {i} exceeds mask width");
            m | (1 << i)
        }))
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= 64);
        if n == 64 {
            FocalSet(u64::MAX)
        } else {
            FocalSet((1u64 << n) - 1)
        }
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    pub fn contains(self, index: usize) -> bool {
        index < 64 && self.0 & (1 << index) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        })
    }

    /// Highest index present plus one (0 for the empty set).
    pub fn span(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }
}

impl fmt::Debug for FocalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FocalSet({:#b})", self.0)
    }
}

impl SetLike for FocalSet {
    fn intersection(&self, other: &Self) -> Self {
        FocalSet(self.0 & other.0)
    }
    fn union(&self, other: &Self) -> Self {
        FocalSet(self.0 | other.0)
    }
    fn difference(&self, other: &Self) -> Self {
        FocalSet(self.0 & !other.0)
    }
    fn cardinality(&self) -> usize {
        self.0.count_ones() as usize
    }
    fn is_empty(&self) -> bool {
        self.0 == 0
    }
    fn is_subset(&self, other: &Self) -> bool {
        self.0 & !other.0 == 0
    }
}

/// A set of configuration indices of a product frame.
///
/// All sets of one frame share the same word count; operations between sets
/// of different widths panic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConfigSet {
    words: Box<[u64]>,
}

impl ConfigSet {
    pub fn empty(size: usize) -> Self {
        ConfigSet {
            words: vec![0; size.div_ceil(64).max(1)].into_boxed_slice(),
        }
    }

    pub fn full(size: usize) -> Self {
        let mut s = Self::empty(size);
        for i in 0..size {
            s.insert(i);
        }
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(size: usize, indices: I) -> Self {
        let mut s = Self::empty(size);
        for i in indices {
            assert!(i < size, "configuration index {i} out of range {size}");
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, index: usize) {
        self.words[index / 64] |= 1 << (index % 64);
    }

    pub fn contains(&self, index: usize) -> bool {
        self.words
            .get(index / 64)
            .is_some_and(|w| w & (1 << (index % 64)) != 0)
    }

    pub fn width(&self) -> usize {
        self.words.len()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + i)
            })
        })
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.words.len(), other.words.len(), "config set width mismatch");
        ConfigSet {
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }
}

impl Ord for ConfigSet {
    fn cmp(&self, other: &Self) -> Ordering {
        // numeric order: most significant word first
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for ConfigSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ConfigSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

impl SetLike for ConfigSet {
    fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }
    fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }
    fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }
    fn cardinality(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
    fn is_subset(&self, other: &Self) -> bool {
        assert_eq!(self.words.len(), other.words.len(), "config set width mismatch");
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(&a, &b)| a & !b == 0)
    }
}
