//! Tournament construction: transitive, rotational and Paley tournaments,
//! seeded random sampling, degree-constrained sampling and exhaustive
//! labeled enumeration.
//!
//! All randomness comes from [`PRNG_NAME`]: a ChaCha8 stream seeded with
//! `seed_from_u64`, consumed 64 bits at a time, least significant bit
//! first. The stream is specified by the algorithm, not the platform, so a
//! `(n, seed)` pair names the same tournament everywhere.

use std::collections::{BTreeSet, VecDeque};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::tournament::{Tournament, VertexId};

/// Identifies the generator recorded in certificates.
pub const PRNG_NAME: &str = "chacha8-seed_from_u64/rand_chacha-0.3";

/// Largest order accepted by [`enumerate_all`].
pub const MAX_ENUMERATION_ORDER: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("bad offset set for rotational tournament on {n} vertices: {reason}")]
    BadOffsetSet { n: usize, reason: String },
    #[error("no tournament on {n} vertices has minimum out-degree {d}")]
    Infeasible { n: usize, d: usize },
    #[error("labeled enumeration limited to n <= {MAX_ENUMERATION_ORDER}, got {n}")]
    TooLarge { n: usize },
    #[error("regular tournaments need an odd order, got {n}")]
    EvenOrder { n: usize },
}

/// Offsets of a rotational tournament on `Z_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSpec {
    n: usize,
    offsets: BTreeSet<usize>,
}

impl RotationSpec {
    /// Checks that `offsets` and their negatives partition `{1..n-1}`.
    pub fn new(n: usize, offsets: impl IntoIterator<Item = usize>) -> Result<Self, GenError> {
        let bad = |reason: String| GenError::BadOffsetSet { n, reason };
        if n == 0 || n.is_multiple_of(2) {
            return Err(bad("modulus must be odd".into()));
        }
        let offsets: BTreeSet<usize> = offsets.into_iter().collect();
        for &s in &offsets {
            if s == 0 || s >= n {
                return Err(bad(format!("offset {s} outside 1..{n}")));
            }
            if offsets.contains(&(n - s)) {
                return Err(bad(format!("offsets {s} and {} are negatives", n - s)));
            }
        }
        if offsets.len() != (n - 1) / 2 {
            return Err(bad(format!(
                "need {} offsets, found {}",
                (n - 1) / 2,
                offsets.len()
            )));
        }
        Ok(RotationSpec { n, offsets })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn offsets(&self) -> impl Iterator<Item = usize> + '_ {
        self.offsets.iter().copied()
    }
}

/// `i -> j` iff `(j - i) mod n` is an offset.
pub fn rotational(spec: &RotationSpec) -> Tournament {
    let n = spec.n;
    Tournament::from_upper(n, |i, j| spec.offsets.contains(&((j + n - i) % n)))
}

/// Rotational tournament from raw offsets; panics on an invalid set.
pub fn rotational_unchecked(n: usize, offsets: &[usize]) -> Tournament {
    rotational(&RotationSpec::new(n, offsets.iter().copied()).expect("valid offset set"))
}

/// Quadratic residues modulo `n`.
pub fn quadratic_residues(n: usize) -> BTreeSet<usize> {
    (1..n).map(|x| x * x % n).filter(|&r| r != 0).collect()
}

/// The Paley tournament on `p` vertices, `p` a prime with `p = 3 (mod 4)`.
pub fn paley(p: usize) -> Result<Tournament, GenError> {
    let is_prime = p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d));
    if !is_prime || p % 4 != 3 {
        return Err(GenError::BadOffsetSet {
            n: p,
            reason: "Paley tournaments need a prime order congruent to 3 mod 4".into(),
        });
    }
    Ok(rotational(&RotationSpec::new(p, quadratic_residues(p))?))
}

/// The transitive tournament `0 -> 1 -> ... -> n-1` (with all forward arcs).
pub fn transitive(n: usize) -> Tournament {
    Tournament::from_upper(n, |_, _| true)
}

/// Bit source over the named PRNG.
struct Bits {
    rng: ChaCha8Rng,
    word: u64,
    left: u32,
}

impl Bits {
    fn new(seed: u64) -> Self {
        Bits {
            rng: ChaCha8Rng::seed_from_u64(seed),
            word: 0,
            left: 0,
        }
    }

    fn next_bit(&mut self) -> bool {
        if self.left == 0 {
            self.word = self.rng.next_u64();
            self.left = 64;
        }
        let b = self.word & 1 == 1;
        self.word >>= 1;
        self.left -= 1;
        b
    }
}

/// Each pair `i < j`, in lexicographic order, is oriented `i -> j` iff the
/// next bit of the stream is 1.
pub fn random_tournament(n: usize, seed: u64) -> Tournament {
    let mut bits = Bits::new(seed);
    Tournament::from_upper(n, |_, _| bits.next_bit())
}

/// A tournament with minimum out-degree at least `d`, from a seeded random
/// start followed by deterministic repair.
///
/// Repair takes the smallest deficient vertex `v` and steals an arc from
/// its in-neighbour of largest out-degree (smallest id on ties). If that
/// in-neighbour has no surplus, the arcs of a shortest path into `v` from
/// the nearest vertex with surplus are reversed instead; such a vertex
/// always exists while `d <= (n-1)/2`. Each repair lowers the total
/// deficit by one. The output is biased, not uniform.
pub fn random_min_outdegree(n: usize, d: usize, seed: u64) -> Result<Tournament, GenError> {
    if (n == 0 && d > 0) || (n > 0 && 2 * d > n - 1) {
        return Err(GenError::Infeasible { n, d });
    }
    let start = random_tournament(n, seed);
    let mut dom = start.to_matrix();
    let mut deg: Vec<usize> = start.out_degrees();
    let cap = n * n.saturating_sub(1) / 2;
    let mut repairs = 0;

    while let Some(v) = (0..n).find(|&v| deg[v] < d) {
        repairs += 1;
        assert!(
            repairs <= cap,
            "repair loop exceeded its cap; generator bug"
        );
        let best = (0..n)
            .filter(|&u| dom[u][v])
            .max_by_key(|&u| (deg[u], std::cmp::Reverse(u)));
        match best {
            Some(u) if deg[u] > d => {
                dom[u][v] = false;
                dom[v][u] = true;
                deg[u] -= 1;
                deg[v] += 1;
            }
            _ => {
                let path = path_from_surplus(&dom, &deg, v, d).expect("surplus ancestor exists");
                // path = [w, .., v]; reversing it moves one unit of out-degree from w to v.
                for pair in path.windows(2) {
                    let (a, b) = (pair[0], pair[1]);
                    dom[a][b] = false;
                    dom[b][a] = true;
                }
                deg[path[0]] -= 1;
                deg[v] += 1;
            }
        }
    }
    Ok(Tournament::from_upper(n, |i, j| dom[i][j]))
}

/// Shortest directed path `w -> .. -> v` with `deg[w] > d`, searching
/// in-neighbours breadth first in increasing id.
fn path_from_surplus(
    dom: &[Vec<bool>],
    deg: &[usize],
    v: VertexId,
    d: usize,
) -> Option<Vec<VertexId>> {
    let n = dom.len();
    let mut next_hop = vec![usize::MAX; n];
    let mut queue = VecDeque::from([v]);
    next_hop[v] = v;
    while let Some(x) = queue.pop_front() {
        for u in 0..n {
            if next_hop[u] == usize::MAX && dom[u][x] {
                next_hop[u] = x;
                if deg[u] > d {
                    let mut path = vec![u];
                    let mut cur = u;
                    while cur != v {
                        cur = next_hop[cur];
                        path.push(cur);
                    }
                    return Some(path);
                }
                queue.push_back(u);
            }
        }
    }
    None
}

/// Number of labeled tournaments on `n` vertices, `2^(n(n-1)/2)`.
pub fn labeled_count(n: usize) -> u64 {
    1u64 << (n * n.saturating_sub(1) / 2)
}

/// The labeled tournament with upper-triangle code `code`: pairs `(i, j)`,
/// `i < j`, in lexicographic order, the first pair being the most
/// significant bit; a set bit means `i -> j`.
pub fn from_code(n: usize, code: u64) -> Tournament {
    let m = n * n.saturating_sub(1) / 2;
    let mut k = 0;
    Tournament::from_upper(n, |_, _| {
        k += 1;
        code >> (m - k) & 1 == 1
    })
}

/// Every labeled tournament on `n <= 7` vertices, in code order.
pub fn enumerate_all(n: usize) -> Result<impl Iterator<Item = Tournament>, GenError> {
    enumerate_shard(n, 0, 1)
}

/// Shard `shard` of `shards` of [`enumerate_all`]: a contiguous code range,
/// which fixes the leading upper-triangle bits when `shards` is a power of two.
pub fn enumerate_shard(
    n: usize,
    shard: u64,
    shards: u64,
) -> Result<impl Iterator<Item = Tournament>, GenError> {
    if n > MAX_ENUMERATION_ORDER {
        return Err(GenError::TooLarge { n });
    }
    assert!(
        shards > 0 && shard < shards,
        "invalid shard {shard}/{shards}"
    );
    let total = labeled_count(n);
    let lo = total / shards * shard + shard.min(total % shards);
    let hi = lo + total / shards + u64::from(shard < total % shards);
    Ok((lo..hi).map(move |code| from_code(n, code)))
}

/// Every labeled regular tournament on odd `n` in which vertex 0 dominates
/// exactly `1..=(n-1)/2`.
///
/// Any regular tournament is isomorphic to one of these (relabel so that
/// vertex 0's out-neighbours come first), so the list covers every
/// isomorphism class while being `C(n-1, (n-1)/2)` times smaller than the
/// full labeled set.
pub fn enumerate_regular_rooted(n: usize) -> Result<Vec<Tournament>, GenError> {
    if n.is_multiple_of(2) {
        return Err(GenError::EvenOrder { n });
    }
    let d = (n - 1) / 2;
    let pairs: Vec<(usize, usize)> = (1..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    // Remaining pairs per vertex, to bound how much out-degree it can still gain.
    let mut open = vec![0usize; n];
    for &(i, j) in &pairs {
        open[i] += 1;
        open[j] += 1;
    }
    let mut out = vec![0usize; n];
    out[0] = d;
    for o in &mut out[d + 1..] {
        *o += 1; // v -> 0
    }
    let mut forward = vec![false; pairs.len()];
    let mut found = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        pairs: &[(usize, usize)],
        forward: &mut [bool],
        out: &mut [usize],
        open: &mut [usize],
        d: usize,
        n: usize,
        found: &mut Vec<Tournament>,
    ) {
        if k == pairs.len() {
            let fwd = &*forward;
            found.push(Tournament::from_upper(n, |i, j| {
                if i == 0 {
                    j <= d
                } else {
                    let idx = pairs.binary_search(&(i, j)).unwrap();
                    fwd[idx]
                }
            }));
            return;
        }
        let (i, j) = pairs[k];
        open[i] -= 1;
        open[j] -= 1;
        for (winner, loser, dir) in [(i, j, true), (j, i, false)] {
            if out[winner] < d && out[loser] + open[loser] >= d {
                out[winner] += 1;
                if out[i] + open[i] >= d && out[j] + open[j] >= d {
                    forward[k] = dir;
                    rec(k + 1, pairs, forward, out, open, d, n, found);
                }
                out[winner] -= 1;
            }
        }
        open[i] += 1;
        open[j] += 1;
    }

    rec(
        0,
        &pairs,
        &mut forward,
        &mut out,
        &mut open,
        d,
        n,
        &mut found,
    );
    Ok(found)
}
