//! Tournament combinatorics for disjoint cycles of different lengths.
//!
//! The crate covers the structural toolkit (strong components in
//! condensation order, Hamiltonian paths, outdegree-critical cores,
//! constructive vertex-pancyclicity) and an exact search for `k`
//! vertex-disjoint cycles with a prescribed number of distinct lengths,
//! together with generators and a certificate-producing campaign runner
//! for checking threshold claims about minimum out-degree.

pub mod bitset;
pub mod bounds;
pub mod campaign;
pub mod cycles;
pub mod gen;
pub mod io;
pub mod packing;
pub mod structure;
pub mod tournament;

pub use bitset::VertexSet;
pub use cycles::{enumerate_cycles, moon_cycle, three_cycle_through, Cycle, CycleError};
pub use packing::{
    feasibility_floor, find_packing, find_packing_with_stats, max_packable, CyclePacking,
    PackingError, PackingMode, PackingSpec,
};
pub use structure::{
    check_lemma_2_4, condense, critical_core, hamiltonian_path, is_strongly_connected,
    outdegree_critical_reduce, CriticalCore, HamPath, StrongDecomposition, StructureError,
};
pub use tournament::{Induced, Tournament, TournamentError, VertexId};
