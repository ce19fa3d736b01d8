//! Fixed-width bitsets over the element universe of one instance.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ElementSet {
    words: Vec<u64>,
}

impl ElementSet {
    /// Empty set able to hold indices `0..capacity`.
    pub fn new(capacity: usize) -> Self {
        ElementSet {
            words: vec![0; capacity.div_ceil(64)],
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(capacity: usize, indices: I) -> Self {
        let mut set = Self::new(capacity);
        for i in indices {
            set.insert(i);
        }
        set
    }

    pub fn insert(&mut self, index: usize) -> bool {
        let (w, b) = (index / 64, index % 64);
        let fresh = self.words[w] >> b & 1 == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn contains(&self, index: usize) -> bool {
        self.words
            .get(index / 64)
            .is_some_and(|w| w >> (index % 64) & 1 == 1)
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    /// `self \ other`.
    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    pub fn intersects(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        Self::bits(self.words.iter().copied())
    }

    /// Indices of `self \ other` in increasing order, without allocating.
    pub fn iter_difference<'a>(&'a self, other: &'a ElementSet) -> impl Iterator<Item = usize> + 'a {
        Self::bits(self.words.iter().zip(&other.words).map(|(a, b)| a & !b))
    }

    fn bits(words: impl Iterator<Item = u64>) -> impl Iterator<Item = usize> {
        words.enumerate().flat_map(|(wi, word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
