use std::fmt;

/// A set of state indices of a fixed structure.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    len: usize,
    words: Vec<u64>,
}

impl StateSet {
    pub fn empty(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for k in 0..len {
            s.insert(k);
        }
        s
    }

    pub fn from_fn(len: usize, mut pred: impl FnMut(usize) -> bool) -> Self {
        let mut s = Self::empty(len);
        for k in 0..len {
            if pred(k) {
                s.insert(k);
            }
        }
        s
    }

    /// Size of the underlying state space.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, k: usize) {
        debug_assert!(k < self.len);
        self.words[k / 64] |= 1 << (k % 64);
    }

    pub fn contains(&self, k: usize) -> bool {
        k < self.len && self.words[k / 64] & (1 << (k % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn complement(&self) -> Self {
        Self::from_fn(self.len, |k| !self.contains(k))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&k| self.contains(k))
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
