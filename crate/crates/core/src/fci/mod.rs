//! Determinant-space full configuration interaction.
//!
//! Determinants are `u64` occupation masks, so at most 64 spin orbitals.
//! Besides the ground-state solver this module is the brute-force reference
//! used to test the density-matrix and contraction code:
//! [`full_space_expectation`] applies operator strings determinant by
//! determinant with no shortcuts.

mod determinant;
mod hamiltonian;
mod solver;
mod wavefunction;

pub use determinant::{
    adjoint_string, apply_ladder_string, enumerate_sector, Determinant, Ladder, MAX_SPIN_ORBITALS,
};
pub use hamiltonian::{build_hamiltonian_action, HamiltonianAction};
pub use solver::{ground_state, ground_state_with, GroundState, GroundStateOptions};
pub use wavefunction::{full_space_expectation, SecondQuantizedOperator, Wavefunction};
