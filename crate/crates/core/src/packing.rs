//! Exact search for vertex-disjoint cycles under length constraints.
//!
//! A cycle `C` of a tournament spans a strongly connected subtournament,
//! which contains cycles of every length from 3 to `|C|` (Moon). So if `k`
//! disjoint cycles show at least `l` distinct lengths, shrinking the
//! cycle with the `i`-th smallest distinct length to length `i + 2`, and
//! every other cycle to length 3, keeps them disjoint. `MinDistinct(k, l)`
//! is therefore decided exactly by searching for the length multiset
//! `{3, 4, .., l+2}` plus `k - l` extra 3-cycles, and the search only ever
//! needs cycles of the lengths it is asked for.
//!
//! The search branches on the smallest undecided vertex `v`: either some
//! chosen cycle has `v` as its smallest vertex (every candidate cycle
//! rooted at `v` and inside the free set is tried, shorter first, then
//! lexicographic), or `v` is left uncovered. A branch is cut as soon as
//! the free vertices cannot hold the lengths still required.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::cycles::{check_cycle, Cycle, CycleIter};
use crate::tournament::{Tournament, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PackingError {
    #[error("invalid packing spec: {0}")]
    SpecInvalid(String),
}

/// Length requirement on a packing of `k` cycles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct PackingSpec {
    k: usize,
    mode: PackingMode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PackingMode {
    /// At least `l` pairwise distinct lengths among the `k` cycles.
    MinDistinct(usize),
    /// Exactly this multiset of lengths, one per cycle.
    ExactLengths(Vec<usize>),
}

impl PackingSpec {
    pub fn min_distinct(k: usize, l: usize) -> Result<Self, PackingError> {
        if k == 0 {
            return Err(PackingError::SpecInvalid("k must be at least 1".into()));
        }
        if l == 0 || l > k {
            return Err(PackingError::SpecInvalid(format!(
                "distinct-length count {l} outside 1..={k}"
            )));
        }
        Ok(PackingSpec {
            k,
            mode: PackingMode::MinDistinct(l),
        })
    }

    pub fn exact(lengths: impl Into<Vec<usize>>) -> Result<Self, PackingError> {
        let mut lengths = lengths.into();
        if lengths.is_empty() {
            return Err(PackingError::SpecInvalid("need at least one length".into()));
        }
        if let Some(&bad) = lengths.iter().find(|&&a| a < 3) {
            return Err(PackingError::SpecInvalid(format!(
                "cycle length {bad} below 3"
            )));
        }
        lengths.sort_unstable();
        Ok(PackingSpec {
            k: lengths.len(),
            mode: PackingMode::ExactLengths(lengths),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> &PackingMode {
        &self.mode
    }

    /// Sorted length multiset that decides this spec in tournaments.
    pub fn target_lengths(&self) -> Vec<usize> {
        match &self.mode {
            PackingMode::ExactLengths(a) => a.clone(),
            PackingMode::MinDistinct(l) => {
                let mut v: Vec<usize> = std::iter::repeat_n(3, self.k - l).collect();
                v.extend(3..l + 3);
                v.sort_unstable();
                v
            }
        }
    }

    /// Whether a multiset of cycle lengths meets the spec.
    pub fn is_satisfied_by(&self, lengths: &[usize]) -> bool {
        if lengths.len() != self.k || lengths.iter().any(|&m| m < 3) {
            return false;
        }
        match &self.mode {
            PackingMode::MinDistinct(l) => distinct_count(lengths) >= *l,
            PackingMode::ExactLengths(a) => {
                let mut sorted = lengths.to_vec();
                sorted.sort_unstable();
                &sorted == a
            }
        }
    }
}

impl std::fmt::Display for PackingSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.mode {
            PackingMode::MinDistinct(l) => write!(f, "k={} min-distinct={}", self.k, l),
            PackingMode::ExactLengths(a) => write!(f, "exact={a:?}"),
        }
    }
}

/// Serialized form: `{"k": 3, "min_distinct": 3}` or `{"k": 3, "exact": [3, 4, 5]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecRepr {
    k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    min_distinct: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exact: Option<Vec<usize>>,
}

impl TryFrom<SpecRepr> for PackingSpec {
    type Error = PackingError;

    fn try_from(r: SpecRepr) -> Result<Self, PackingError> {
        match (r.min_distinct, r.exact) {
            (Some(l), None) => PackingSpec::min_distinct(r.k, l),
            (None, Some(a)) => {
                if a.len() != r.k {
                    return Err(PackingError::SpecInvalid(format!(
                        "k={} but {} lengths given",
                        r.k,
                        a.len()
                    )));
                }
                PackingSpec::exact(a)
            }
            _ => Err(PackingError::SpecInvalid(
                "give exactly one of min_distinct or exact".into(),
            )),
        }
    }
}

impl From<PackingSpec> for SpecRepr {
    fn from(s: PackingSpec) -> Self {
        match s.mode {
            PackingMode::MinDistinct(l) => SpecRepr {
                k: s.k,
                min_distinct: Some(l),
                exact: None,
            },
            PackingMode::ExactLengths(a) => SpecRepr {
                k: s.k,
                min_distinct: None,
                exact: Some(a),
            },
        }
    }
}

fn distinct_count(lengths: &[usize]) -> usize {
    let mut v = lengths.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Fewest vertices a host of a satisfying packing can have:
/// `3(k - l) + (3 + 4 + .. + (l + 2))` for `MinDistinct`, the length sum otherwise.
pub fn feasibility_floor(spec: &PackingSpec) -> usize {
    match &spec.mode {
        PackingMode::MinDistinct(l) => 3 * (spec.k - l) + (3..l + 3).sum::<usize>(),
        PackingMode::ExactLengths(a) => a.iter().sum(),
    }
}

/// Pairwise vertex-disjoint cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclePacking {
    pub cycles: Vec<Cycle>,
}

impl CyclePacking {
    pub fn lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Cycle::len).collect()
    }

    pub fn distinct_length_count(&self) -> usize {
        distinct_count(&self.lengths())
    }

    /// Independent re-check: every cycle valid in `t`, pairwise disjoint,
    /// and the lengths meeting `spec`.
    pub fn validate(&self, t: &Tournament, spec: &PackingSpec) -> Result<(), String> {
        validate_raw(t, spec, self.cycles.iter().map(|c| c.vertices()))
    }

    /// Canonical vertex-id arrays, as written in certificates.
    pub fn to_arrays(&self) -> Vec<Vec<VertexId>> {
        self.cycles.iter().map(|c| c.vertices().to_vec()).collect()
    }
}

/// Validates a packing given as raw vertex sequences.
pub fn validate_raw<'a>(
    t: &Tournament,
    spec: &PackingSpec,
    cycles: impl IntoIterator<Item = &'a [VertexId]>,
) -> Result<(), String> {
    let mut used = vec![false; t.order()];
    let mut lengths = Vec::new();
    for (i, c) in cycles.into_iter().enumerate() {
        check_cycle(t, c).map_err(|e| format!("cycle {i}: {e}"))?;
        for &v in c {
            if std::mem::replace(&mut used[v], true) {
                return Err(format!("vertex {v} used by two cycles"));
            }
        }
        lengths.push(c.len());
    }
    if !spec.is_satisfied_by(&lengths) {
        return Err(format!("lengths {lengths:?} do not satisfy {spec}"));
    }
    Ok(())
}

/// Counters from one search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Candidate cycles enumerated.
    pub candidates: u64,
    /// Search tree nodes visited.
    pub nodes: u64,
}

/// Outcome of [`find_packing_with_stats`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub packing: Option<CyclePacking>,
    pub stats: SearchStats,
}

/// Complete search: `Some` iff a packing meeting `spec` exists in `t`.
pub fn find_packing(t: &Tournament, spec: &PackingSpec) -> Option<CyclePacking> {
    find_packing_with_stats(t, spec).packing
}

pub fn find_packing_with_stats(t: &Tournament, spec: &PackingSpec) -> SearchOutcome {
    let n = t.order();
    let outcome = if n < feasibility_floor(spec) {
        SearchOutcome {
            packing: None,
            stats: SearchStats::default(),
        }
    } else if n <= 64 {
        search::<u64>(t, spec)
    } else if n <= 128 {
        search::<u128>(t, spec)
    } else {
        search::<VertexSet>(t, spec)
    };
    if let Some(p) = &outcome.packing {
        if let Err(e) = p.validate(t, spec) {
            panic!("packing search returned an invalid packing for {spec}: {e}");
        }
    }
    outcome
}

/// Largest `l` with a `MinDistinct(k, l)` packing, or 0 when `t` has no
/// `k` disjoint cycles.
pub fn max_packable(t: &Tournament, k: usize) -> usize {
    if k == 0 {
        return 0;
    }
    let mut best = 0;
    for l in 1..=k {
        let spec = PackingSpec::min_distinct(k, l).expect("1 <= l <= k");
        if find_packing(t, &spec).is_none() {
            break;
        }
        best = l;
    }
    best
}

/// Vertex mask used by the search; `u64`/`u128` cover the common orders.
trait Mask: Clone {
    fn empty(n: usize) -> Self;
    fn full(n: usize) -> Self;
    fn insert(&mut self, v: VertexId);
    fn remove(&mut self, v: VertexId);
    fn lowest(&self) -> Option<VertexId>;
    /// `self ⊆ other`
    fn within(&self, other: &Self) -> bool;
    fn subtract(&mut self, other: &Self);
    fn add(&mut self, other: &Self);
}

macro_rules! int_mask {
    ($t:ty) => {
        impl Mask for $t {
            #[inline]
            fn empty(_: usize) -> Self {
                0
            }
            #[inline]
            fn full(n: usize) -> Self {
                if n == <$t>::BITS as usize {
                    <$t>::MAX
                } else {
                    ((1 as $t) << n) - 1
                }
            }
            #[inline]
            fn insert(&mut self, v: VertexId) {
                *self |= (1 as $t) << v;
            }
            #[inline]
            fn remove(&mut self, v: VertexId) {
                *self &= !((1 as $t) << v);
            }
            #[inline]
            fn lowest(&self) -> Option<VertexId> {
                (*self != 0).then(|| self.trailing_zeros() as usize)
            }
            #[inline]
            fn within(&self, other: &Self) -> bool {
                self & !other == 0
            }
            #[inline]
            fn subtract(&mut self, other: &Self) {
                *self &= !other;
            }
            #[inline]
            fn add(&mut self, other: &Self) {
                *self |= other;
            }
        }
    };
}

int_mask!(u64);
int_mask!(u128);

impl Mask for VertexSet {
    fn empty(n: usize) -> Self {
        VertexSet::new(n)
    }
    fn full(n: usize) -> Self {
        VertexSet::full(n)
    }
    fn insert(&mut self, v: VertexId) {
        VertexSet::insert(self, v);
    }
    fn remove(&mut self, v: VertexId) {
        VertexSet::remove(self, v);
    }
    fn lowest(&self) -> Option<VertexId> {
        self.first()
    }
    fn within(&self, other: &Self) -> bool {
        self.is_subset(other)
    }
    fn subtract(&mut self, other: &Self) {
        self.difference_with(other);
    }
    fn add(&mut self, other: &Self) {
        self.union_with(other);
    }
}

struct Candidate<M> {
    mask: M,
    len: usize,
    cycle: Cycle,
}

struct Search<'a, M> {
    by_root: &'a [Vec<Candidate<M>>],
    /// need[m] = cycles of length m still to place.
    need: Vec<usize>,
    need_total: usize,
    chosen: Vec<&'a Cycle>,
    nodes: u64,
}

impl<'a, M: Mask> Search<'a, M> {
    fn run(&mut self, free: &mut M, free_count: usize) -> bool {
        self.nodes += 1;
        if self.need_total == 0 {
            return true;
        }
        if free_count < self.need_total {
            return false;
        }
        let Some(v) = free.lowest() else { return false };
        let by_root = self.by_root;
        for c in &by_root[v] {
            if self.need[c.len] == 0 || !c.mask.within(free) {
                continue;
            }
            self.need[c.len] -= 1;
            self.need_total -= c.len;
            free.subtract(&c.mask);
            self.chosen.push(&c.cycle);
            if self.run(free, free_count - c.len) {
                return true;
            }
            self.chosen.pop();
            free.add(&c.mask);
            self.need_total += c.len;
            self.need[c.len] += 1;
        }
        free.remove(v);
        let found = self.run(free, free_count - 1);
        if !found {
            free.insert(v);
        }
        found
    }
}

fn search<M: Mask>(t: &Tournament, spec: &PackingSpec) -> SearchOutcome {
    let n = t.order();
    let targets = spec.target_lengths();
    let mut lengths = targets.clone();
    lengths.dedup();

    let mut by_root: Vec<Vec<Candidate<M>>> = (0..n).map(|_| Vec::new()).collect();
    let mut candidates = 0u64;
    for cycle in CycleIter::with_lengths(t, &lengths) {
        let mut mask = M::empty(n);
        for &v in cycle.vertices() {
            mask.insert(v);
        }
        candidates += 1;
        let root = cycle.vertices()[0];
        by_root[root].push(Candidate {
            mask,
            len: cycle.len(),
            cycle,
        });
    }
    // Enumeration order is lexicographic; a stable sort puts shorter first.
    for list in &mut by_root {
        list.sort_by_key(|c| c.len);
    }

    let max_len = targets.iter().copied().max().unwrap_or(0);
    let mut need = vec![0usize; max_len + 1];
    for &m in &targets {
        need[m] += 1;
    }
    let mut s = Search {
        by_root: &by_root,
        need,
        need_total: targets.iter().sum(),
        chosen: Vec::new(),
        nodes: 0,
    };
    let mut free = M::full(n);
    let found = s.run(&mut free, n);
    let packing = found.then(|| CyclePacking {
        cycles: s.chosen.iter().map(|&c| c.clone()).collect(),
    });
    SearchOutcome {
        packing,
        stats: SearchStats {
            candidates,
            nodes: s.nodes,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn spec(k: usize, l: usize) -> PackingSpec {
        PackingSpec::min_distinct(k, l).unwrap()
    }

    #[test]
    fn floors() {
        assert_eq!(feasibility_floor(&spec(3, 3)), 12);
        assert_eq!(feasibility_floor(&spec(1, 1)), 3);
        assert_eq!(feasibility_floor(&spec(5, 3)), 18);
        assert_eq!(
            feasibility_floor(&PackingSpec::exact([3, 5, 5]).unwrap()),
            13
        );
    }

    #[test]
    fn invalid_specs() {
        assert!(PackingSpec::min_distinct(0, 0).is_err());
        assert!(PackingSpec::min_distinct(2, 3).is_err());
        assert!(PackingSpec::min_distinct(2, 0).is_err());
        assert!(PackingSpec::exact([3, 2]).is_err());
        assert!(PackingSpec::exact(Vec::new()).is_err());
    }

    #[test]
    fn target_multisets() {
        assert_eq!(spec(3, 3).target_lengths(), vec![3, 4, 5]);
        assert_eq!(spec(5, 3).target_lengths(), vec![3, 3, 3, 4, 5]);
        assert_eq!(spec(3, 1).target_lengths(), vec![3, 3, 3]);
    }

    #[test]
    fn spec_serde_shapes() {
        let s: PackingSpec = serde_json::from_str(r#"{"k":3,"min_distinct":2}"#).unwrap();
        assert_eq!(s, spec(3, 2));
        let e: PackingSpec = serde_json::from_str(r#"{"k":2,"exact":[4,3]}"#).unwrap();
        assert_eq!(e.mode(), &PackingMode::ExactLengths(vec![3, 4]));
        assert_eq!(
            serde_json::to_string(&e).unwrap(),
            r#"{"k":2,"exact":[3,4]}"#
        );
        assert!(serde_json::from_str::<PackingSpec>(r#"{"k":2,"exact":[3]}"#).is_err());
        assert!(serde_json::from_str::<PackingSpec>(r#"{"k":2}"#).is_err());
        assert!(serde_json::from_str::<PackingSpec>(r#"{"k":2,"min_distinct":3}"#).is_err());
    }

    #[test]
    fn paley_eleven_has_no_three_distinct() {
        let p = gen::paley(11).unwrap();
        let out = find_packing_with_stats(&p, &spec(3, 3));
        assert!(out.packing.is_none());
        assert_eq!(out.stats.nodes, 0);
    }

    #[test]
    fn rotational_thirteen_has_three_distinct() {
        let t = gen::rotational_unchecked(13, &[1, 2, 3, 4, 5, 6]);
        let p = find_packing(&t, &spec(3, 3)).unwrap();
        assert_eq!(p.distinct_length_count(), 3);
        assert!(p.validate(&t, &spec(3, 3)).is_ok());
    }

    #[test]
    fn transitive_has_nothing() {
        let t = gen::transitive(10);
        for k in 1..4 {
            assert!(find_packing(&t, &spec(k, 1)).is_none());
            assert_eq!(max_packable(&t, k), 0);
        }
    }

    #[test]
    fn stacked_triangles() {
        let t = Tournament::from_upper(6, |i, j| i / 3 != j / 3 || !(i % 3 == 0 && j % 3 == 2));
        let p = find_packing(&t, &spec(2, 1)).unwrap();
        assert_eq!(p.to_arrays(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn max_packable_examples() {
        assert_eq!(max_packable(&gen::rotational_unchecked(3, &[1]), 1), 1);
        let m = max_packable(&gen::paley(11).unwrap(), 3);
        assert!((1..=2).contains(&m));
    }

    #[test]
    fn validation_catches_tampering() {
        let t = gen::rotational_unchecked(13, &[1, 2, 3, 4, 5, 6]);
        let s = spec(3, 3);
        let p = find_packing(&t, &s).unwrap();
        let mut arrays = p.to_arrays();
        arrays[1][0] = arrays[0][0];
        assert!(validate_raw(&t, &s, arrays.iter().map(|c| c.as_slice())).is_err());
        assert!(validate_raw(&t, &spec(2, 2), p.to_arrays().iter().map(|c| c.as_slice())).is_err());
    }

    #[test]
    fn wide_masks_agree() {
        let t = gen::random_min_outdegree(20, 6, 5).unwrap();
        let s = spec(3, 3);
        let a = search::<u64>(&t, &s);
        let b = search::<u128>(&t, &s);
        let c = search::<VertexSet>(&t, &s);
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert!(a.packing.is_some());
    }
}
