//! FCIDUMP export from a diatomic RHF calculation, and a summary of an
//! imported file.

use std::path::Path;

use serde::Serialize;
use vqse_core::fci::{build_hamiltonian_action, ground_state};
use vqse_core::integrals::*;
use vqse_core::OrbitalPartition;

use crate::CliError;

fn core_err(e: vqse_core::Error) -> CliError {
    CliError::Numerical(e.to_string())
}

/// MO integrals of `a`–`b` at `bond` Å. With `frozen_core > 0` the lowest
/// orbitals are folded into the scalar and one-body terms and dropped.
pub fn export(
    atoms: [&str; 2],
    bond: f64,
    basis: &str,
    charge: i32,
    frozen_core: usize,
) -> Result<(MolecularIntegrals, usize), CliError> {
    let g = Geometry::diatomic(atoms[0], atoms[1], bond)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let ao = compute_ao_integrals(
        &g,
        &BasisSet::named(basis).map_err(|e| CliError::Config(e.to_string()))?,
    )
    .map_err(core_err)?;
    let n_el = g.total_charge() - charge as f64;
    if n_el < 0.0 {
        return Err(CliError::Config("negative electron count".into()));
    }
    let n_el = n_el.round() as usize;
    let scf = run_rhf(&ao, n_el, &ScfOptions::default()).map_err(core_err)?;
    let mo = transform_to_mo(&ao, &scf.mo_coefficients).map_err(core_err)?;
    if frozen_core == 0 {
        return Ok((mo, n_el));
    }
    if 2 * frozen_core > n_el || frozen_core >= mo.n_spatial {
        return Err(CliError::Config(format!(
            "cannot freeze {frozen_core} orbitals"
        )));
    }
    let p = OrbitalPartition::from_counts(frozen_core, mo.n_spatial - frozen_core, 0);
    let (dressed, _) = dress_core(&mo, &p).map_err(core_err)?;
    Ok((dressed, n_el - 2 * frozen_core))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImportSummary {
    pub norb: usize,
    pub nelec: usize,
    pub ms2: i32,
    pub scalar_energy: f64,
    /// Closed-shell determinant energy of the lowest orbitals, when
    /// `nelec` is even and `ms2 = 0`.
    pub closed_shell_energy: Option<f64>,
    pub fci_energy: f64,
}

pub fn import(path: &Path) -> Result<ImportSummary, CliError> {
    let (ints, nelec, ms2) =
        read_fcidump(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let h = build_hamiltonian_action(&ints).map_err(core_err)?;
    let gs = ground_state(&h, nelec, Some(ms2)).map_err(core_err)?;
    Ok(ImportSummary {
        norb: ints.n_spatial,
        nelec,
        ms2,
        scalar_energy: ints.scalar_energy(),
        closed_shell_energy: (nelec % 2 == 0 && ms2 == 0)
            .then(|| ints.closed_shell_energy(nelec / 2)),
        fci_energy: gs.energy,
    })
}
