//! Orbital relaxation of an active-space state.
//!
//! The active 1- and 2-RDMs, padded with a doubly occupied core, fix an
//! energy functional `E(U)` of a real orbital rotation `U`. It is minimised
//! by cyclic Givens sweeps (each angle exactly, via a trigonometric
//! polynomial fit) or jointly by a simplex method.

mod relax;
mod rotation;
mod trig;

pub use relax::{
    givens_sweep, joint_optimize, relax_then_resolve, rotation_pairs, solve_active_space,
    ActiveSolution, IterationReport, JointOptions, RelaxationReport, SweepOptions,
};
pub use rotation::{
    check_unitary, energy_of_rotation, energy_of_unitary, energy_of_unitary_rdm_path,
    givens_matrix, wrap_angle, GivensAngle, RotationParameters, SpatialRdms,
};
pub use trig::{sample_angles, TrigPolynomial};
