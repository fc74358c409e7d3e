//! Fixed-universe vertex sets backed by 64-bit words.

use std::fmt;

/// Number of 64-bit words needed for `n` bits.
#[inline]
pub(crate) const fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// A subset of the vertex range `[0, universe)`.
///
/// Sets over different universes never compare equal, and binary operations
/// between them panic: mixing vertex sets from different tournaments is a
/// programming error rather than a recoverable condition.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    universe: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet {
            universe,
            words: vec![0; words_for(universe)],
        }
    }

    /// The full set `[0, universe)`.
    pub fn full(universe: usize) -> Self {
        let mut s = VertexSet::new(universe);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * 64;
            let bits = (universe - lo).min(64);
            *w = if bits == 64 {
                u64::MAX
            } else {
                (1u64 << bits) - 1
            };
        }
        s
    }

    /// Builds a set from vertex ids; returns the first id that is out of range on failure.
    pub fn try_from_vertices<I>(universe: usize, vertices: I) -> Result<Self, usize>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut s = VertexSet::new(universe);
        for v in vertices {
            if v >= universe {
                return Err(v);
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Builds a set from vertex ids.
    ///
    /// Panics if a vertex is out of range.
    pub fn from_vertices<I>(universe: usize, vertices: I) -> Self
    where
        I: IntoIterator<Item = usize>,
    {
        Self::try_from_vertices(universe, vertices)
            .unwrap_or_else(|v| panic!("vertex {v} outside universe of size {universe}"))
    }

    pub(crate) fn from_words(universe: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(universe));
        VertexSet { universe, words }
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    /// Inserts `v`; panics if `v` is outside the universe.
    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(
            v < self.universe,
            "vertex {v} outside universe of size {}",
            self.universe
        );
        let w = &mut self.words[v / 64];
        let bit = 1u64 << (v % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.universe {
            return false;
        }
        let w = &mut self.words[v / 64];
        let bit = 1u64 << (v % 64);
        let present = *w & bit != 0;
        *w &= !bit;
        present
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Members in increasing order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    fn check_universe(&self, other: &VertexSet) {
        assert_eq!(
            self.universe, other.universe,
            "vertex sets over different universes"
        );
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.check_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.check_universe(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    fn zip_with(&self, other: &VertexSet, f: impl Fn(u64, u64) -> u64) -> VertexSet {
        self.check_universe(other);
        VertexSet {
            universe: self.universe,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// Ascending iterator over the members of a [`VertexSet`].
pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * 64 + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

/// First set bit at position `>= from` of `row & !exclude`.
#[inline]
pub(crate) fn next_bit_excluding(row: &[u64], exclude: &[u64], from: usize) -> Option<usize> {
    let mut wi = from / 64;
    if wi >= row.len() {
        return None;
    }
    let mut w = row[wi] & !exclude[wi] & (u64::MAX << (from % 64));
    loop {
        if w != 0 {
            return Some(wi * 64 + w.trailing_zeros() as usize);
        }
        wi += 1;
        if wi >= row.len() {
            return None;
        }
        w = row[wi] & !exclude[wi];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_set_respects_universe() {
        for n in [0, 1, 63, 64, 65, 130] {
            let s = VertexSet::full(n);
            assert_eq!(s.len(), n);
            assert_eq!(s.iter().collect::<Vec<_>>(), (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn set_algebra() {
        let a = VertexSet::from_vertices(70, [1, 5, 66]);
        let b = VertexSet::from_vertices(70, [5, 69]);
        assert_eq!(a.union(&b).iter().collect::<Vec<_>>(), vec![1, 5, 66, 69]);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![5]);
        assert_eq!(a.difference(&b).iter().collect::<Vec<_>>(), vec![1, 66]);
        assert!(!a.is_disjoint(&b));
        assert!(VertexSet::from_vertices(70, [66]).is_subset(&a));
        assert_eq!(a.first(), Some(1));
        assert_eq!(VertexSet::new(70).first(), None);
    }

    #[test]
    fn out_of_range_is_reported() {
        assert_eq!(VertexSet::try_from_vertices(3, [0, 3]), Err(3));
        assert!(!VertexSet::new(3).contains(7));
    }

    #[test]
    fn next_bit_scans_across_words() {
        let row = [0b1010u64, 1u64 << 3];
        let excl = [0b0010u64, 0];
        assert_eq!(next_bit_excluding(&row, &excl, 0), Some(3));
        assert_eq!(next_bit_excluding(&row, &excl, 4), Some(67));
        assert_eq!(next_bit_excluding(&row, &excl, 68), None);
    }
}
