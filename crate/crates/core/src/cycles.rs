//! Directed cycles: constructive vertex-pancyclicity and exhaustive
//! enumeration.

use thiserror::Error;

use crate::bitset::{next_bit_excluding, VertexSet};
use crate::structure::is_strongly_connected;
use crate::tournament::{Tournament, TournamentError, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error(transparent)]
    Tournament(#[from] TournamentError),
    #[error("tournament is not strongly connected")]
    NotStronglyConnected,
    #[error("tournament on {n} vertices is too small to contain a cycle")]
    TooSmall { n: usize },
    #[error("cycle length range [{min}, {max}] invalid for tournament on {n} vertices")]
    LengthOutOfRange { min: usize, max: usize, n: usize },
    #[error("invalid cycle: {0}")]
    Invalid(String),
}

/// A directed cycle stored in canonical rotation (smallest vertex first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    vertices: Vec<VertexId>,
}

impl Cycle {
    /// Validates `sequence` as a cycle of `t` and rotates it to canonical form.
    pub fn new(t: &Tournament, sequence: &[VertexId]) -> Result<Self, CycleError> {
        check_cycle(t, sequence).map_err(CycleError::Invalid)?;
        Ok(Self::canonical(sequence))
    }

    pub(crate) fn canonical(sequence: &[VertexId]) -> Self {
        let start = sequence
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| v)
            .map_or(0, |(i, _)| i);
        let mut vertices = Vec::with_capacity(sequence.len());
        vertices.extend_from_slice(&sequence[start..]);
        vertices.extend_from_slice(&sequence[..start]);
        Cycle { vertices }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn vertex_set(&self, universe: usize) -> VertexSet {
        VertexSet::from_vertices(universe, self.vertices.iter().copied())
    }

    /// Re-checks this cycle against `t`.
    pub fn is_valid_in(&self, t: &Tournament) -> bool {
        check_cycle(t, &self.vertices).is_ok()
            && self.vertices.first() == self.vertices.iter().min()
    }
}

impl From<Cycle> for Vec<VertexId> {
    fn from(c: Cycle) -> Self {
        c.vertices
    }
}

/// Structural check of a vertex sequence as a closed directed cycle.
pub fn check_cycle(t: &Tournament, sequence: &[VertexId]) -> Result<(), String> {
    let n = t.order();
    let m = sequence.len();
    if m < 3 {
        return Err(format!("length {m} below 3"));
    }
    let mut seen = vec![false; n];
    for &v in sequence {
        if v >= n {
            return Err(format!("vertex {v} out of range"));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(format!("vertex {v} repeated"));
        }
    }
    for i in 0..m {
        let (a, b) = (sequence[i], sequence[(i + 1) % m]);
        if !t.dominates(a, b) {
            return Err(format!("missing arc {a} -> {b}"));
        }
    }
    Ok(())
}

fn require_strong(t: &Tournament, v: VertexId) -> Result<(), CycleError> {
    let n = t.order();
    if v >= n {
        return Err(TournamentError::VertexOutOfRange { vertex: v, n }.into());
    }
    if n < 3 {
        return Err(CycleError::TooSmall { n });
    }
    if !is_strongly_connected(t)? {
        return Err(CycleError::NotStronglyConnected);
    }
    Ok(())
}

/// A 3-cycle `(v, u, w)` with `v -> u -> w -> v`, taking the smallest
/// out-neighbour `u` of `v` that dominates some in-neighbour of `v`, then
/// the smallest such `w`.
pub fn three_cycle_through(t: &Tournament, v: VertexId) -> Result<Cycle, CycleError> {
    require_strong(t, v)?;
    let seq = three_cycle_sequence(t, v).ok_or(CycleError::NotStronglyConnected)?;
    Ok(Cycle::canonical(&seq))
}

fn three_cycle_sequence(t: &Tournament, v: VertexId) -> Option<Vec<VertexId>> {
    let n = t.order();
    (0..n).filter(|&u| t.dominates(v, u)).find_map(|u| {
        (0..n)
            .find(|&w| t.dominates(w, v) && t.dominates(u, w))
            .map(|w| vec![v, u, w])
    })
}

/// A cycle of exactly `len` vertices through `v`.
///
/// Starts from [`three_cycle_through`] and grows one vertex at a time.
/// With the current cycle `c_0 = v, .., c_{m-1}`:
///
/// * if an outside vertex has both an in- and an out-neighbour on the
///   cycle, the smallest such `x` is spliced in at the first `i` with
///   `c_i -> x -> c_{i+1}`;
/// * otherwise every outside vertex is dominated by the whole cycle (`Out`)
///   or dominates it (`In`); strong connectivity gives an arc `u -> w`
///   from `Out` to `In`, and `c_1` is replaced by the detour `u, w`.
pub fn moon_cycle(t: &Tournament, v: VertexId, len: usize) -> Result<Cycle, CycleError> {
    let n = t.order();
    if len < 3 || len > n {
        return Err(CycleError::LengthOutOfRange {
            min: len,
            max: len,
            n,
        });
    }
    require_strong(t, v)?;
    let mut cycle = three_cycle_sequence(t, v).ok_or(CycleError::NotStronglyConnected)?;
    let mut on = vec![false; n];
    for &c in &cycle {
        on[c] = true;
    }
    while cycle.len() < len {
        extend(t, &mut cycle, &mut on).ok_or(CycleError::NotStronglyConnected)?;
    }
    debug_assert!(check_cycle(t, &cycle).is_ok());
    Ok(Cycle::canonical(&cycle))
}

fn extend(t: &Tournament, cycle: &mut Vec<VertexId>, on: &mut [bool]) -> Option<()> {
    let n = t.order();
    let m = cycle.len();
    let outside = (0..n).filter(|&x| !on[x]);

    let mixed = outside.clone().find(|&x| {
        let has_in = cycle.iter().any(|&c| t.dominates(c, x));
        let has_out = cycle.iter().any(|&c| t.dominates(x, c));
        has_in && has_out
    });
    if let Some(x) = mixed {
        let i = (0..m).find(|&i| t.dominates(cycle[i], x) && t.dominates(x, cycle[(i + 1) % m]))?;
        cycle.insert(i + 1, x);
        on[x] = true;
        return Some(());
    }

    let dominated: Vec<VertexId> = outside
        .clone()
        .filter(|&x| t.dominates(cycle[0], x))
        .collect();
    let dominating: Vec<VertexId> = outside.filter(|&x| t.dominates(x, cycle[0])).collect();
    let (u, w) = dominated.iter().find_map(|&u| {
        dominating
            .iter()
            .find(|&&w| t.dominates(u, w))
            .map(|&w| (u, w))
    })?;
    on[cycle[1]] = false;
    cycle[1] = u;
    cycle.insert(2, w);
    on[u] = true;
    on[w] = true;
    Some(())
}

/// Iterator over directed cycles with lengths in an allowed set, each once
/// in canonical rotation, in lexicographic order of the canonical vertex
/// sequence.
///
/// Depth-first search from every root `r` in increasing order, extending
/// only through vertices larger than `r`; out-neighbours are tried in
/// increasing order, so a path is reported before its extensions.
pub struct CycleIter<'t> {
    t: &'t Tournament,
    allowed: Vec<bool>,
    max_len: usize,
    root: usize,
    path: Vec<VertexId>,
    /// Next candidate position to try from each path vertex.
    cursor: Vec<usize>,
    on_path: Vec<u64>,
    /// Bits `< root + 1`, excluded from extension.
    below_root: Vec<u64>,
    /// Scratch union of `on_path` and `below_root`.
    blocked: Vec<u64>,
    pending_close: bool,
}

impl<'t> CycleIter<'t> {
    pub(crate) fn with_lengths(t: &'t Tournament, lengths: &[usize]) -> Self {
        let n = t.order();
        let max_len = lengths
            .iter()
            .copied()
            .filter(|&l| l <= n)
            .max()
            .unwrap_or(0);
        let mut allowed = vec![false; max_len + 1];
        for &l in lengths {
            if (3..=max_len).contains(&l) {
                allowed[l] = true;
            }
        }
        let stride = t.stride();
        let mut it = CycleIter {
            t,
            allowed,
            max_len,
            root: 0,
            path: Vec::with_capacity(max_len),
            cursor: Vec::with_capacity(max_len),
            on_path: vec![0; stride],
            below_root: vec![0; stride],
            blocked: vec![0; stride],
            pending_close: false,
        };
        if max_len >= 3 && n >= 3 {
            it.start_root(0);
        } else {
            it.root = n;
        }
        it
    }

    fn start_root(&mut self, r: usize) {
        self.root = r;
        self.path.clear();
        self.cursor.clear();
        self.on_path.iter_mut().for_each(|w| *w = 0);
        for (i, w) in self.below_root.iter_mut().enumerate() {
            let lo = i * 64;
            *w = if r + 1 >= lo + 64 {
                u64::MAX
            } else if r < lo {
                0
            } else {
                (1u64 << (r + 1 - lo)) - 1
            };
        }
        self.push(r);
    }

    fn push(&mut self, v: VertexId) {
        self.path.push(v);
        self.cursor.push(self.root + 1);
        self.on_path[v / 64] |= 1 << (v % 64);
        self.pending_close = true;
    }

    fn pop(&mut self) {
        let v = self.path.pop().unwrap();
        self.cursor.pop();
        self.on_path[v / 64] &= !(1 << (v % 64));
    }
}

impl Iterator for CycleIter<'_> {
    type Item = Cycle;

    fn next(&mut self) -> Option<Cycle> {
        let n = self.t.order();
        // Only roots with at least three vertices at or above them can close a cycle.
        while self.root + 2 < n {
            if self.path.is_empty() {
                let r = self.root + 1;
                if r + 2 >= n {
                    self.root = n;
                    break;
                }
                self.start_root(r);
                continue;
            }
            let depth = self.path.len();
            let last = *self.path.last().unwrap();
            if self.pending_close {
                self.pending_close = false;
                if depth >= 3 && self.allowed[depth] && self.t.dominates(last, self.root) {
                    return Some(Cycle {
                        vertices: self.path.clone(),
                    });
                }
            }
            let next = if depth < self.max_len {
                for ((b, p), r) in self
                    .blocked
                    .iter_mut()
                    .zip(&self.on_path)
                    .zip(&self.below_root)
                {
                    *b = p | r;
                }
                next_bit_excluding(self.t.out_row(last), &self.blocked, self.cursor[depth - 1])
            } else {
                None
            };
            match next {
                Some(w) => {
                    self.cursor[depth - 1] = w + 1;
                    self.push(w);
                }
                None => self.pop(),
            }
        }
        None
    }
}

/// Every directed cycle with `min_len <= length <= max_len`.
///
/// Lengths beyond the order are simply absent, so tournaments on fewer
/// than three vertices yield an empty stream.
pub fn enumerate_cycles(
    t: &Tournament,
    min_len: usize,
    max_len: usize,
) -> Result<CycleIter<'_>, CycleError> {
    if min_len < 3 || min_len > max_len {
        return Err(CycleError::LengthOutOfRange {
            min: min_len,
            max: max_len,
            n: t.order(),
        });
    }
    let lengths: Vec<usize> = (min_len..=max_len.min(t.order().max(min_len))).collect();
    Ok(CycleIter::with_lengths(t, &lengths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn canonical_rotation() {
        let t = gen::rotational_unchecked(3, &[1]);
        let c = Cycle::new(&t, &[2, 0, 1]).unwrap();
        assert_eq!(c.vertices(), &[0, 1, 2]);
        assert!(Cycle::new(&t, &[0, 2, 1]).is_err());
        assert!(Cycle::new(&t, &[0, 1]).is_err());
    }

    #[test]
    fn three_cycle_examples() {
        let c3 = gen::rotational_unchecked(3, &[1]);
        assert_eq!(three_cycle_through(&c3, 0).unwrap().vertices(), &[0, 1, 2]);
        assert_eq!(
            three_cycle_through(&gen::transitive(4), 0),
            Err(CycleError::NotStronglyConnected)
        );
        assert!(matches!(
            three_cycle_through(&gen::transitive(2), 0),
            Err(CycleError::TooSmall { n: 2 })
        ));
        let p11 = gen::paley(11).unwrap();
        let c = three_cycle_through(&p11, 0).unwrap();
        assert!(c.is_valid_in(&p11) && c.contains(0) && c.len() == 3);
    }

    #[test]
    fn moon_len_three_matches_base_case() {
        let p7 = gen::paley(7).unwrap();
        for v in 0..7 {
            assert_eq!(
                moon_cycle(&p7, v, 3).unwrap(),
                three_cycle_through(&p7, v).unwrap()
            );
        }
    }

    #[test]
    fn moon_hamiltonian_on_paley_11() {
        let p11 = gen::paley(11).unwrap();
        let c = moon_cycle(&p11, 0, 11).unwrap();
        assert_eq!(c.len(), 11);
        assert!(c.is_valid_in(&p11));
    }

    #[test]
    fn moon_rejects_bad_lengths() {
        let p7 = gen::paley(7).unwrap();
        assert!(matches!(
            moon_cycle(&p7, 0, 8),
            Err(CycleError::LengthOutOfRange { .. })
        ));
        assert!(matches!(
            moon_cycle(&p7, 0, 2),
            Err(CycleError::LengthOutOfRange { .. })
        ));
    }

    #[test]
    fn detour_branch_is_exercised() {
        // 3-cycle {0,1,2} dominating {3}, {3} dominating {4}, {4} dominating the 3-cycle.
        let t = Tournament::from_upper(5, |i, j| match (i, j) {
            (0, 1) | (1, 2) => true,
            (0, 2) => false,
            (_, 3) => true,
            (_, 4) if i < 3 => false,
            (3, 4) => true,
            _ => unreachable!(),
        });
        for len in 3..=5 {
            let c = moon_cycle(&t, 0, len).unwrap();
            assert_eq!(c.len(), len);
            assert!(c.is_valid_in(&t) && c.contains(0));
        }
    }

    #[test]
    fn enumeration_examples() {
        let c3 = gen::rotational_unchecked(3, &[1]);
        assert_eq!(enumerate_cycles(&c3, 3, 3).unwrap().count(), 1);
        assert_eq!(
            enumerate_cycles(&gen::transitive(8), 3, 8).unwrap().count(),
            0
        );
        assert_eq!(
            enumerate_cycles(&gen::transitive(2), 3, 5).unwrap().count(),
            0
        );
        assert!(enumerate_cycles(&c3, 2, 3).is_err());
        assert!(enumerate_cycles(&c3, 4, 3).is_err());
    }

    #[test]
    fn paley_seven_triangles() {
        // Triangle count of a tournament: C(n,3) - sum_v C(d+(v), 2).
        let p7 = gen::paley(7).unwrap();
        let by_formula = 35
            - p7.out_degrees()
                .iter()
                .map(|d| d * (d - 1) / 2)
                .sum::<usize>();
        assert_eq!(by_formula, 14);
        assert_eq!(enumerate_cycles(&p7, 3, 3).unwrap().count(), 14);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let p7 = gen::paley(7).unwrap();
        let all: Vec<Cycle> = enumerate_cycles(&p7, 3, 7).unwrap().collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|c| c.is_valid_in(&p7)));
    }
}
