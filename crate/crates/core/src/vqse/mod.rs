//! Virtual quantum subspace expansion.
//!
//! The reference `|Ψ⟩` lives in the active space. A pool of operators
//! `O_j` (identity, singles `a†_i a_p`, doubles `a†_μ a_q a†_ν a_r`) spans a
//! subspace reaching into the virtuals; `H_ij = ⟨Ψ|O_i† H O_j|Ψ⟩` and
//! `S_ij = ⟨Ψ|O_i† O_j|Ψ⟩` are reduced to active RDM elements by the wick
//! engine and `HC = SCE` is solved after canonical orthogonalisation.

mod assemble;
mod gevp;
mod pool;

use serde::{Deserialize, Serialize};

pub use assemble::{
    assemble_subspace, assemble_subspace_with, dump_patterns, AssemblyOptions, SubspacePair,
};
pub use gevp::{
    canonical_orthogonalize, solve_gevp, solve_gevp_matrices, GevpSolution, Orthogonalizer,
    DEFAULT_EPSILON, NOISY_EPSILON,
};
pub use pool::{build_pool, unpruned_pool_size, ExpansionOperator, PoolOptions};

pub use crate::pipeline::vqse_energy_curve;

use nalgebra::DMatrix;

use crate::Complex;

/// Per-geometry summary of one subspace solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqseReport {
    pub pool_size: usize,
    pub epsilon: f64,
    pub retained: usize,
    pub discarded: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub h_asymmetry: Option<f64>,
    pub s_asymmetry: Option<f64>,
    /// `[re, im]` rows; only when requested, the cc-pVDZ matrices are large.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<Vec<[f64; 2]>>>,
}

fn rows(m: &DMatrix<Complex>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

impl VqseReport {
    pub fn new(
        pair: &SubspacePair,
        solution: &GevpSolution,
        epsilon: f64,
        with_matrices: bool,
    ) -> Self {
        VqseReport {
            pool_size: pair.pool.len(),
            epsilon,
            retained: solution.retained,
            discarded: solution.discarded.clone(),
            eigenvalues: solution.eigenvalues.clone(),
            h_asymmetry: pair.h_asymmetry,
            s_asymmetry: pair.s_asymmetry,
            h: with_matrices.then(|| rows(&pair.h)),
            s: with_matrices.then(|| rows(&pair.s)),
        }
    }
}
