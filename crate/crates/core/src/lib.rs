//! Singular Laplacian-type linear systems and the random walks they describe.
//!
//! A [`ConductanceMatrix`] is a symmetric matrix with non-positive
//! off-diagonal entries, a connected off-diagonal pattern and zero row sums.
//! Such a matrix has rank `n - 1`, so `A x = f` is solvable only when the
//! load sums to zero, and then only up to a constant shift. This crate fixes
//! the shift by pinning one coordinate to zero and builds on that:
//!
//! * [`pinned`]: pinned solves `A x = f_i`, `x_i = 0`.
//! * [`elimination`]: symmetric vertex elimination (Schur complement) and the
//!   triangle to star expansion.
//! * [`cycle`]: cycle-reversal residuals `x_ij + x_jk + x_ki - (x_ji + x_kj + x_ik)`
//!   and their k-cycle generalisation.
//! * [`mechanics`]: equilibria of masses joined by linear springs with one
//!   mass nailed to the origin, in any dimension.
//! * [`walk`]: exact hitting and return times of the simple random walk.
//! * [`sim`]: a seeded Monte Carlo walk simulator used as an oracle.
//!
//! Vertex indices are 0-based in the API and 1-based in every message and
//! serialized output.

pub mod cycle;
pub mod elimination;
mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod laplacian;
pub mod mechanics;
pub mod pinned;
pub mod sim;
pub mod tol;
pub mod walk;

pub use cycle::{cycle_residual, three_cycle_residual, CycleResidual};
pub use elimination::{eliminate_vertex, star_expand_triangle, EliminationResult};
pub use error::{Error, ParseError, Result};
pub use graph::{Edge, WeightedGraph};
pub use laplacian::{graph_from_matrix, laplacian_from_graph, validate, ConductanceMatrix, ValidationReport, Violation};
pub use mechanics::{nail_reaction, residual_forces, solve_equilibrium, Equilibrium, ForceField};
pub use pinned::{pinned_solve, shift_load, LoadVector, PinnedSolution};
pub use sim::{simulate_hitting, simulate_return, WalkConfig, WalkStats};
pub use walk::{ctw_residual, hitting_matrix, hitting_times_to, neighbor_sum_residual, return_times, HittingTable, ReturnTimes, WalkLaw};

/// Serializes a 0-based vertex index as the 1-based index users see.
pub(crate) fn one_based<S: serde::Serializer>(index: &usize, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(*index as u64 + 1)
}
