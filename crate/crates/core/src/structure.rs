//! Reachability, strong components, Hamiltonian paths and
//! outdegree-critical cores.

use thiserror::Error;

use crate::bitset::{next_bit_excluding, VertexSet};
use crate::tournament::{Induced, Tournament, TournamentError, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error(transparent)]
    Tournament(#[from] TournamentError),
    #[error("requirement r={r} exceeds the minimum out-degree {min_out_degree}")]
    RequirementExceedsDegree { r: usize, min_out_degree: usize },
    #[error("outdegree-critical check needs r >= 1")]
    ZeroRequirement,
}

/// Strong components in condensation order: for `i < j` every vertex of
/// `components[i]` dominates every vertex of `components[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongDecomposition {
    pub components: Vec<VertexSet>,
}

impl StrongDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Index of the component containing `v`.
    pub fn component_of(&self, v: VertexId) -> Option<usize> {
        self.components.iter().position(|c| c.contains(v))
    }
}

/// A Hamiltonian path, `order[i] -> order[i + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamPath {
    pub order: Vec<VertexId>,
}

impl HamPath {
    /// Checks the path against `t`: a permutation of all vertices with
    /// every consecutive arc present.
    pub fn is_valid_in(&self, t: &Tournament) -> bool {
        let n = t.order();
        if self.order.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &v in &self.order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        self.order.windows(2).all(|w| t.dominates(w[0], w[1]))
    }
}

/// Vertices reachable from `start` following arcs forward (`forward`) or backward.
fn reach(t: &Tournament, start: VertexId, forward: bool) -> VertexSet {
    let n = t.order();
    let mut seen = VertexSet::new(n);
    seen.insert(start);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        let row = if forward { t.out_row(u) } else { t.in_row(u) };
        let mut from = 0;
        while let Some(w) = next_bit_excluding(row, seen.words(), from) {
            seen.insert(w);
            stack.push(w);
            from = w + 1;
        }
    }
    seen
}

pub fn is_strongly_connected(t: &Tournament) -> Result<bool, TournamentError> {
    let n = t.order();
    if n == 0 {
        return Err(TournamentError::EmptyTournament);
    }
    Ok(reach(t, 0, true).len() == n && reach(t, 0, false).len() == n)
}

/// Strong components in dominance order.
///
/// Components come from an iterative Tarjan pass; the condensation of a
/// tournament is transitive, so the blocks are then sorted by the arc
/// between representatives.
pub fn condense(t: &Tournament) -> Result<StrongDecomposition, TournamentError> {
    let n = t.order();
    if n == 0 {
        return Err(TournamentError::EmptyTournament);
    }
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<VertexId> = Vec::new();
    let mut components: Vec<VertexSet> = Vec::new();
    let mut next_index = 0;
    // (vertex, next out-neighbour candidate to scan from)
    let mut call: Vec<(VertexId, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (u, ref mut cursor)) = call.last_mut() {
            let row = t.out_row(u);
            let mut descended = false;
            while *cursor < n {
                let w = *cursor;
                *cursor += 1;
                if row[w / 64] >> (w % 64) & 1 == 0 {
                    continue;
                }
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                    descended = true;
                    break;
                } else if on_stack[w] {
                    low[u] = low[u].min(index[w]);
                }
            }
            if descended {
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[u]);
            }
            if low[u] == index[u] {
                let mut comp = VertexSet::new(n);
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.insert(w);
                    if w == u {
                        break;
                    }
                }
                components.push(comp);
            }
        }
    }

    components.sort_by(|a, b| {
        let (x, y) = (a.first().unwrap(), b.first().unwrap());
        if t.dominates(x, y) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    Ok(StrongDecomposition { components })
}

/// Hamiltonian path by insertion: vertices in increasing id, each placed
/// at the first position where both neighbouring arcs point forward.
pub fn hamiltonian_path(t: &Tournament) -> Result<HamPath, TournamentError> {
    let n = t.order();
    if n == 0 {
        return Err(TournamentError::EmptyTournament);
    }
    let mut order = Vec::with_capacity(n);
    order.push(0);
    for v in 1..n {
        let pos = if t.dominates(v, order[0]) {
            0
        } else {
            (1..order.len())
                .find(|&i| t.dominates(order[i - 1], v) && t.dominates(v, order[i]))
                .unwrap_or(order.len())
        };
        order.insert(pos, v);
    }
    Ok(HamPath { order })
}

/// Result of [`outdegree_critical_reduce`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalCore {
    pub core: Induced,
    /// Minimum out-degree of the core, at least the requested `r`.
    pub min_out_degree: usize,
}

/// Deletes vertices one at a time while the minimum out-degree stays at
/// least `r`. Each round scans the surviving ids in increasing order and
/// deletes the first vertex whose removal is allowed; stops when none is.
/// A single vertex is never deleted.
pub fn outdegree_critical_reduce(t: &Tournament, r: usize) -> Result<CriticalCore, StructureError> {
    let n = t.order();
    let min = t.min_out_degree()?;
    if r > min {
        return Err(StructureError::RequirementExceedsDegree {
            r,
            min_out_degree: min,
        });
    }
    let mut alive = vec![true; n];
    let mut deg = t.out_degrees();
    let mut remaining = n;
    loop {
        if remaining <= 1 {
            break;
        }
        // Deleting v lowers exactly the out-degrees of its live in-neighbours.
        let removable = (0..n)
            .find(|&v| alive[v] && (0..n).all(|u| !alive[u] || !t.dominates(u, v) || deg[u] > r));
        let Some(v) = removable else { break };
        alive[v] = false;
        remaining -= 1;
        for u in 0..n {
            if alive[u] && t.dominates(u, v) {
                deg[u] -= 1;
            }
        }
    }
    let keep: Vec<VertexId> = (0..n).filter(|&v| alive[v]).collect();
    let min_out_degree = keep.iter().map(|&v| deg[v]).min().unwrap_or(0);
    Ok(CriticalCore {
        core: t.induced_by_list(keep),
        min_out_degree,
    })
}

/// Reduces to an `r'`-outdegree-critical core (re-reducing with the
/// achieved minimum out-degree until it matches the request) and reports
/// whether that core is strongly connected. Outdegree-critical tournaments
/// are always strongly connected, so `false` signals a bug.
pub fn check_lemma_2_4(t: &Tournament, r: usize) -> Result<bool, StructureError> {
    let critical = critical_core(t, r)?;
    Ok(is_strongly_connected(&critical.core.tournament)?)
}

/// Fixed point of [`outdegree_critical_reduce`] whose achieved minimum
/// out-degree equals the requirement it was reduced with.
pub fn critical_core(t: &Tournament, r: usize) -> Result<CriticalCore, StructureError> {
    if r == 0 {
        return Err(StructureError::ZeroRequirement);
    }
    let mut current = outdegree_critical_reduce(t, r)?;
    let mut target = r;
    while current.min_out_degree != target {
        target = current.min_out_degree;
        let next = outdegree_critical_reduce(&current.core.tournament, target)?;
        current = CriticalCore {
            core: current.core.compose(&next.core),
            min_out_degree: next.min_out_degree,
        };
    }
    Ok(current)
}
