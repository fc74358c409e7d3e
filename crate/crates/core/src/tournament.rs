//! The tournament type: validated dominance matrix, degree queries and
//! induced subtournaments.
//!
//! Rows are stored as packed bitsets in one flat buffer, `stride` words per
//! row, so a tournament on at most 64 vertices keeps each out-neighbourhood
//! in a single machine word. A `Tournament` is immutable once built.

use thiserror::Error;

use crate::bitset::{words_for, VertexSet};

/// Vertex index into a tournament, `0..n`.
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TournamentError {
    #[error("matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("diagonal entry set at vertex {vertex}")]
    DiagonalSet { vertex: VertexId },
    #[error("pair ({i}, {j}) has {arcs} arcs, a tournament needs exactly one")]
    NotAntisymmetricComplete { i: VertexId, j: VertexId, arcs: u8 },
    #[error("vertex {vertex} out of range for tournament on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("operation undefined on the empty tournament")]
    EmptyTournament,
    #[error("vertex sets overlap")]
    OverlappingSets,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tournament {
    n: usize,
    stride: usize,
    out: Vec<u64>,
    inn: Vec<u64>,
}

impl Tournament {
    /// Validates a square boolean matrix, `matrix[i][j]` meaning `i -> j`.
    pub fn from_matrix<R: AsRef<[bool]>>(matrix: &[R]) -> Result<Self, TournamentError> {
        let n = matrix.len();
        for (row, r) in matrix.iter().enumerate() {
            let len = r.as_ref().len();
            if len != n {
                return Err(TournamentError::NotSquare { row, len, n });
            }
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.as_ref()[i] {
                return Err(TournamentError::DiagonalSet { vertex: i });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let a = matrix[i].as_ref()[j];
                let b = matrix[j].as_ref()[i];
                if a == b {
                    return Err(TournamentError::NotAntisymmetricComplete {
                        i,
                        j,
                        arcs: a as u8 * 2,
                    });
                }
            }
        }
        Ok(Self::from_upper(n, |i, j| matrix[i].as_ref()[j]))
    }

    /// Builds the tournament where, for `i < j`, `i -> j` iff `forward(i, j)`.
    ///
    /// Every orientation of the pairs is a tournament, so this cannot fail.
    pub fn from_upper(n: usize, mut forward: impl FnMut(VertexId, VertexId) -> bool) -> Self {
        let stride = words_for(n);
        let mut t = Tournament {
            n,
            stride,
            out: vec![0; n * stride],
            inn: vec![0; n * stride],
        };
        for i in 0..n {
            for j in i + 1..n {
                if forward(i, j) {
                    t.set_arc(i, j);
                } else {
                    t.set_arc(j, i);
                }
            }
        }
        t
    }

    fn set_arc(&mut self, from: VertexId, to: VertexId) {
        self.out[from * self.stride + to / 64] |= 1 << (to % 64);
        self.inn[to * self.stride + from / 64] |= 1 << (from % 64);
    }

    /// Builds a tournament with every arc reversed.
    pub fn reversed(&self) -> Tournament {
        Tournament {
            n: self.n,
            stride: self.stride,
            out: self.inn.clone(),
            inn: self.out.clone(),
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of 64-bit words per adjacency row.
    #[inline]
    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn dominates(&self, from: VertexId, to: VertexId) -> bool {
        self.out[from * self.stride + to / 64] >> (to % 64) & 1 == 1
    }

    /// Out-neighbourhood of `v` as packed words.
    #[inline]
    pub fn out_row(&self, v: VertexId) -> &[u64] {
        &self.out[v * self.stride..(v + 1) * self.stride]
    }

    /// In-neighbourhood of `v` as packed words.
    #[inline]
    pub fn in_row(&self, v: VertexId) -> &[u64] {
        &self.inn[v * self.stride..(v + 1) * self.stride]
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), TournamentError> {
        if v < self.n {
            Ok(())
        } else {
            Err(TournamentError::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }

    fn check_set(&self, s: &VertexSet) -> Result<(), TournamentError> {
        if s.universe() == self.n {
            return Ok(());
        }
        match s.iter().find(|&v| v >= self.n) {
            Some(vertex) => Err(TournamentError::VertexOutOfRange { vertex, n: self.n }),
            None => Ok(()),
        }
    }

    pub fn out_neighbors(&self, v: VertexId) -> Result<VertexSet, TournamentError> {
        self.check_vertex(v)?;
        Ok(VertexSet::from_words(self.n, self.out_row(v).to_vec()))
    }

    pub fn in_neighbors(&self, v: VertexId) -> Result<VertexSet, TournamentError> {
        self.check_vertex(v)?;
        Ok(VertexSet::from_words(self.n, self.in_row(v).to_vec()))
    }

    pub fn out_degree(&self, v: VertexId) -> Result<usize, TournamentError> {
        self.check_vertex(v)?;
        Ok(popcount(self.out_row(v)))
    }

    pub fn in_degree(&self, v: VertexId) -> Result<usize, TournamentError> {
        self.check_vertex(v)?;
        Ok(popcount(self.in_row(v)))
    }

    /// Out-degree of every vertex, indexed by vertex id.
    pub fn out_degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| popcount(self.out_row(v))).collect()
    }

    pub fn min_out_degree(&self) -> Result<usize, TournamentError> {
        self.out_degrees()
            .into_iter()
            .min()
            .ok_or(TournamentError::EmptyTournament)
    }

    pub fn max_out_degree(&self) -> Result<usize, TournamentError> {
        self.out_degrees()
            .into_iter()
            .max()
            .ok_or(TournamentError::EmptyTournament)
    }

    pub fn is_regular(&self) -> bool {
        let d = self.out_degrees();
        d.windows(2).all(|w| w[0] == w[1])
    }

    /// `X -> Y`: every vertex of `xs` dominates every vertex of `ys`.
    pub fn dominates_set(&self, xs: &VertexSet, ys: &VertexSet) -> Result<bool, TournamentError> {
        self.check_set(xs)?;
        self.check_set(ys)?;
        if xs.iter().any(|x| ys.contains(x)) {
            return Err(TournamentError::OverlappingSets);
        }
        Ok(xs.iter().all(|x| {
            let row = self.out_row(x);
            ys.iter().all(|y| row[y / 64] >> (y % 64) & 1 == 1)
        }))
    }

    /// The subtournament induced by `subset`, with vertices renumbered in increasing order.
    pub fn induced(&self, subset: &VertexSet) -> Result<Induced, TournamentError> {
        self.check_set(subset)?;
        let to_original: Vec<VertexId> = subset.iter().collect();
        Ok(self.induced_by_list(to_original))
    }

    /// Induced subtournament on an explicit ascending vertex list.
    pub(crate) fn induced_by_list(&self, to_original: Vec<VertexId>) -> Induced {
        let tournament = Tournament::from_upper(to_original.len(), |i, j| {
            self.dominates(to_original[i], to_original[j])
        });
        Induced {
            tournament,
            to_original,
        }
    }

    /// The dominance matrix as nested vectors.
    pub fn to_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.dominates(i, j)).collect())
            .collect()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl std::fmt::Debug for Tournament {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Tournament({})", crate::io::encode_digraph6(self))
    }
}

#[inline]
fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// An induced subtournament together with its vertex mapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Induced {
    pub tournament: Tournament,
    /// `to_original[new] = old`; ascending.
    pub to_original: Vec<VertexId>,
}

impl Induced {
    /// Position of an original vertex in the subtournament.
    pub fn to_local(&self, original: VertexId) -> Option<VertexId> {
        self.to_original.binary_search(&original).ok()
    }

    /// Composes with a further induction taken inside this subtournament.
    pub fn compose(&self, inner: &Induced) -> Induced {
        Induced {
            tournament: inner.tournament.clone(),
            to_original: inner
                .to_original
                .iter()
                .map(|&v| self.to_original[v])
                .collect(),
        }
    }
}
