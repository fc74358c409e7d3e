//! Brute-force reference implementations used only by tests.
//!
//! Everything here depends on the adjacency relation alone and runs in
//! exponential time; orders up to about 14 are practical.

use dicycle::Tournament;

fn arc(t: &Tournament, u: usize, v: usize) -> bool {
    t.dominates(u, v)
}

/// `cyclic[S]` is true iff the vertex set `S` (bitmask, `|S| >= 3`) spans a
/// Hamiltonian cycle of the induced subtournament.
pub fn cyclic_subsets(t: &Tournament) -> Vec<bool> {
    let n = t.order();
    assert!(n <= 20, "oracle limited to n <= 20");
    let full = 1usize << n;
    // ends[S]: endpoints of Hamiltonian paths of S that start at min(S).
    let mut ends = vec![0u32; full];
    let mut cyclic = vec![false; full];
    for s in 0..n {
        ends[1 << s] = 1 << s;
    }
    for set in 1..full {
        let e = ends[set];
        if e == 0 {
            continue;
        }
        let lo = set.trailing_zeros() as usize;
        if set.count_ones() >= 3 && (0..n).any(|v| e >> v & 1 == 1 && arc(t, v, lo)) {
            cyclic[set] = true;
        }
        for v in (0..n).filter(|&v| e >> v & 1 == 1) {
            for w in lo + 1..n {
                if set >> w & 1 == 0 && arc(t, v, w) {
                    ends[set | 1 << w] |= 1 << w;
                }
            }
        }
    }
    cyclic
}

/// Number of directed cycles of each length (index = length).
pub fn cycle_counts(t: &Tournament) -> Vec<u64> {
    let n = t.order();
    assert!(n <= 14, "oracle limited to n <= 14");
    let full = 1usize << n;
    let mut paths = vec![0u64; full * n];
    let mut counts = vec![0u64; n + 1];
    for s in 0..n {
        paths[(1 << s) * n + s] = 1;
    }
    for set in 1..full {
        let lo = set.trailing_zeros() as usize;
        for v in 0..n {
            let p = paths[set * n + v];
            if p == 0 {
                continue;
            }
            let len = set.count_ones() as usize;
            if len >= 3 && arc(t, v, lo) {
                counts[len] += p;
            }
            for w in lo + 1..n {
                if set >> w & 1 == 0 && arc(t, v, w) {
                    paths[(set | 1 << w) * n + w] += p;
                }
            }
        }
    }
    counts
}

/// Whether some cycle of length `len` passes through `v`.
pub fn cycle_through_exists(cyclic: &[bool], v: usize, len: usize) -> bool {
    cyclic
        .iter()
        .enumerate()
        .any(|(s, &c)| c && s >> v & 1 == 1 && s.count_ones() as usize == len)
}

/// Strong connectivity by transitive closure.
pub fn strongly_connected(t: &Tournament) -> bool {
    let n = t.order();
    if n == 0 {
        return false;
    }
    let mut r: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i == j || arc(t, i, j)).collect())
        .collect();
    for m in 0..n {
        let via = r[m].clone();
        for row in r.iter_mut().filter(|row| row[m]) {
            for (x, &y) in row.iter_mut().zip(&via) {
                *x |= y;
            }
        }
    }
    r.iter().all(|row| row.iter().all(|&x| x))
}

/// Whether there are pairwise disjoint cycles with exactly the given
/// multiset of lengths.
pub fn packing_exists_exact(t: &Tournament, cyclic: &[bool], lengths: &[usize]) -> bool {
    let n = t.order();
    let mut ls = lengths.to_vec();
    ls.sort_unstable_by(|a, b| b.cmp(a));
    if ls.iter().sum::<usize>() > n {
        return false;
    }
    let mut by_len: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (s, &c) in cyclic.iter().enumerate() {
        if c {
            by_len[s.count_ones() as usize].push(s);
        }
    }
    fn rec(by_len: &[Vec<usize>], ls: &[usize], used: usize, prev: Option<(usize, usize)>) -> bool {
        let Some((&l, rest)) = ls.split_first() else {
            return true;
        };
        let start = match prev {
            Some((pl, idx)) if pl == l => idx + 1,
            _ => 0,
        };
        by_len[l]
            .iter()
            .enumerate()
            .skip(start)
            .any(|(i, &s)| s & used == 0 && rec(by_len, rest, used | s, Some((l, i))))
    }
    ls.iter().all(|&l| l <= n) && rec(&by_len, &ls, 0, None)
}

/// All nondecreasing length multisets of size `k` with entries `>= 3`,
/// sum `<= budget` and at least `l` distinct values.
pub fn length_multisets(k: usize, l: usize, budget: usize) -> Vec<Vec<usize>> {
    fn rec(
        k: usize,
        l: usize,
        budget: usize,
        min: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == k {
            let mut d = cur.clone();
            d.dedup();
            if d.len() >= l {
                out.push(cur.clone());
            }
            return;
        }
        let left = k - cur.len();
        let mut x = min;
        while x * left <= budget {
            cur.push(x);
            rec(k, l, budget - x, x, cur, out);
            cur.pop();
            x += 1;
        }
    }
    let mut out = Vec::new();
    rec(k, l, budget, 3, &mut Vec::new(), &mut out);
    out
}

/// Whether `k` disjoint cycles with at least `l` distinct lengths exist.
pub fn packing_exists_min_distinct(t: &Tournament, cyclic: &[bool], k: usize, l: usize) -> bool {
    length_multisets(k, l, t.order())
        .iter()
        .any(|ls| packing_exists_exact(t, cyclic, ls))
}

/// Smallest order that can hold `k` cycles with at least `l` distinct lengths.
pub fn min_total_length(k: usize, l: usize) -> usize {
    (0..)
        .map(|budget| budget * 3)
        .find_map(|b| {
            length_multisets(k, l, b)
                .iter()
                .map(|m| m.iter().sum::<usize>())
                .min()
        })
        .expect("some budget suffices")
}

/// Tournament from an explicit arc predicate on all ordered pairs; used to
/// build fixtures without going through library generators.
pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Tournament {
    let m: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i != j && f(i, j)).collect())
        .collect();
    Tournament::from_matrix(&m).expect("fixture is a tournament")
}

/// Labeled tournament from bits over pairs `i < j` in lexicographic order,
/// least significant bit first; bit set means `i -> j`.
pub fn from_bits(n: usize, bits: u64) -> Tournament {
    let mut idx = std::collections::HashMap::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            idx.insert((i, j), k);
            k += 1;
        }
    }
    from_fn(n, |i, j| {
        if i < j {
            bits >> idx[&(i, j)] & 1 == 1
        } else {
            bits >> idx[&(j, i)] & 1 == 0
        }
    })
}
