//! Classically simulated virtual quantum subspace expansion (VQSE) and
//! active-space orbital relaxation for small molecules.
//!
//! The crate is organised bottom-up:
//!
//! - [`integrals`]: Gaussian integrals (McMurchie–Davidson), restricted
//!   Hartree–Fock, MO transformation, core dressing and FCIDUMP I/O.
//! - [`fci`]: determinant algebra, the matrix-free Hamiltonian and exact
//!   diagonalisation. Also the brute-force Fock-space oracle.
//! - [`rdm`]: k-particle reduced density matrices, Grassmann wedge products
//!   and cumulant reconstruction.
//! - [`wick`]: contraction of virtual-space operators against the virtual
//!   vacuum, reducing arbitrary strings to active-space RDM elements.
//! - [`vqse`]: expansion pools, subspace matrices and the generalized
//!   eigenvalue problem.
//! - [`oo`]: orbital relaxation by Givens sweeps or a derivative-free joint
//!   optimizer.
//! - [`pipeline`]: per-geometry driver combining all of the above.
//!
//! With the default `rayon` feature the data-parallel loops (ERI shell
//! quartets, RDM tuples, subspace matrix elements, scan points) run on the
//! rayon pool; without it every loop falls back to a sequential iterator.

/// Chooses between a rayon expression and its sequential fallback.
#[macro_export]
#[doc(hidden)]
macro_rules! if_rayon {
    ($par:expr, $seq:expr) => {{
        #[cfg(feature = "rayon")]
        {
            $par
        }
        #[cfg(not(feature = "rayon"))]
        {
            $seq
        }
    }};
}

pub mod error;
pub mod fci;
pub mod integrals;
pub mod linalg;
pub mod oo;
pub mod partition;
pub mod pipeline;
pub mod rdm;
pub mod vqse;
pub mod wick;

pub use error::{Error, Result};
pub use partition::{OrbitalPartition, Space};

/// Bohr radius in ångström.
pub const BOHR_IN_ANGSTROM: f64 = 0.52917721092;

/// Complex amplitude type used for wavefunctions and density matrices.
pub type Complex = num_complex::Complex64;
