//! Per-geometry driver: RHF, active-space reference, VQSE, orbital
//! relaxation and the full-space FCI baseline.

use serde::{Deserialize, Serialize};

#[cfg(feature = "rayon")]
use rayon::prelude::*;

use crate::fci::{build_hamiltonian_action, ground_state};
use crate::integrals::{
    compute_ao_integrals, dress_core, run_rhf, transform_to_mo, BasisSet, Geometry,
    MolecularIntegrals, ScfOptions,
};
use crate::oo::{
    givens_sweep, joint_optimize, relax_then_resolve, solve_active_space, JointOptions,
    RelaxationReport, SweepOptions,
};
use crate::rdm::RdmSet;
use crate::vqse::{
    assemble_subspace, build_pool, solve_gevp, PoolOptions, VqseReport, DEFAULT_EPSILON,
};
use crate::{Error, OrbitalPartition, Result};

/// Orbital partition by counts over the energy-ordered RHF orbitals, or by
/// explicit index lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PartitionSpec {
    Counts {
        #[serde(default)]
        core: usize,
        active: usize,
        /// `None`: every remaining orbital.
        #[serde(default)]
        virtuals: Option<usize>,
        /// Active orbitals (by position within the active space) excited
        /// into the virtuals.
        #[serde(default)]
        active_excited: Option<Vec<usize>>,
    },
    Explicit {
        core: Vec<usize>,
        active: Vec<usize>,
        virtuals: Vec<usize>,
    },
}

impl PartitionSpec {
    pub fn resolve(&self, n_spatial: usize) -> Result<OrbitalPartition> {
        let p = match self {
            PartitionSpec::Counts {
                core,
                active,
                virtuals,
                active_excited,
            } => {
                let v = virtuals.unwrap_or(n_spatial.saturating_sub(core + active));
                if core + active + v > n_spatial {
                    return Err(Error::Partition(format!(
                        "{core} core + {active} active + {v} virtual orbitals exceed {n_spatial}"
                    )));
                }
                let p = OrbitalPartition::from_counts(*core, *active, v);
                match active_excited {
                    Some(sub) => {
                        let global = sub
                            .iter()
                            .map(|&a| {
                                p.active.get(a).copied().ok_or_else(|| {
                                    Error::Partition(format!(
                                        "active_excited index {a} out of range"
                                    ))
                                })
                            })
                            .collect::<Result<Vec<_>>>()?;
                        p.with_active_excited(global)?
                    }
                    None => p,
                }
            }
            PartitionSpec::Explicit {
                core,
                active,
                virtuals,
            } => OrbitalPartition::new(core.clone(), active.clone(), virtuals.clone())?,
        };
        if p.n_spatial() > n_spatial
            || p.core
                .iter()
                .chain(&p.active)
                .chain(&p.virtuals)
                .any(|&x| x >= n_spatial)
        {
            return Err(Error::Partition(format!(
                "partition does not fit {n_spatial} orbitals"
            )));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RdmMode {
    /// Exact 3- and 4-RDMs of the reference.
    Exact,
    /// 3- and 4-RDMs rebuilt from cumulants up to the given rank (≤ 2).
    Cumulant { truncation: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OoMode {
    None,
    Sweep,
    Joint,
    Iterate { cycles: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MethodOptions {
    pub basis: String,
    /// Molecular charge.
    pub charge: i32,
    pub partition: PartitionSpec,
    pub vqse: bool,
    pub pool: PoolOptions,
    pub rdm_mode: RdmMode,
    pub epsilon: f64,
    /// Finite-shot noise on the reference RDMs.
    pub shots: Option<f64>,
    pub seed: u64,
    pub oo: OoMode,
    pub sweep: SweepOptions,
    pub joint: JointOptions,
    pub full_fci: bool,
    /// Include H and S in the report.
    pub with_matrices: bool,
}

impl Default for MethodOptions {
    fn default() -> Self {
        MethodOptions {
            basis: "sto-3g".into(),
            charge: 0,
            partition: PartitionSpec::Counts {
                core: 0,
                active: 2,
                virtuals: None,
                active_excited: None,
            },
            vqse: false,
            pool: PoolOptions::default(),
            rdm_mode: RdmMode::Exact,
            epsilon: DEFAULT_EPSILON,
            shots: None,
            seed: 0,
            oo: OoMode::None,
            sweep: SweepOptions::default(),
            joint: JointOptions::default(),
            full_fci: true,
            with_matrices: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub bond_angstrom: f64,
    pub n_spatial: usize,
    pub scf_energy: f64,
    /// Active-space FCI energy in the RHF orbitals.
    pub e_ref: f64,
    pub e_vqse: Option<f64>,
    pub e_oo: Option<f64>,
    pub e_fci_full: Option<f64>,
    pub vqse: Option<VqseReport>,
    pub relaxation: Option<RelaxationReport>,
    /// Relaxed energy per cycle in iterate mode.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cycle_energies: Vec<f64>,
}

/// Everything at one geometry.
pub fn run_point(
    geometry: &Geometry,
    bond_angstrom: f64,
    options: &MethodOptions,
) -> Result<PointResult> {
    let basis = BasisSet::named(&options.basis)?;
    let ao = compute_ao_integrals(geometry, &basis)?;
    let n_el_f = geometry.total_charge() - options.charge as f64;
    if n_el_f < 0.0 {
        return Err(Error::Domain("negative electron count".into()));
    }
    let n_el = n_el_f.round() as usize;
    let scf = run_rhf(&ao, n_el, &ScfOptions::default())?;
    let mo = transform_to_mo(&ao, &scf.mo_coefficients)?;
    let full_partition = options.partition.resolve(mo.n_spatial)?;
    // orbitals outside the partition are dropped
    let mo_r = restrict(&mo, &full_partition);
    let partition = compact(&full_partition);
    let max_rank = if options.vqse { 4 } else { 2 };
    let reference = solve_active_space(&mo_r, &partition, n_el, 2)?;

    let mut out = PointResult {
        bond_angstrom,
        n_spatial: mo.n_spatial,
        scf_energy: scf.scf_energy,
        e_ref: reference.ground_state.energy,
        e_vqse: None,
        e_oo: None,
        e_fci_full: None,
        vqse: None,
        relaxation: None,
        cycle_energies: Vec::new(),
    };

    if options.vqse {
        let psi = &reference.ground_state.wavefunction;
        let mut rdms = match options.rdm_mode {
            RdmMode::Exact => RdmSet::exact(psi, max_rank)?,
            RdmMode::Cumulant { truncation } => RdmSet::cumulant(psi, max_rank, truncation)?,
        };
        if let Some(shots) = options.shots {
            rdms = rdms.with_shot_noise(shots, options.seed)?;
        }
        let (dressed, reduced) = dress_core(&mo_r, &partition)?;
        let pool = build_pool(&reduced, &options.pool)?;
        let pair = assemble_subspace(&pool, &dressed, &rdms, &reduced)?;
        let sol = solve_gevp(&pair, options.epsilon)?;
        out.e_vqse = Some(sol.ground_energy());
        out.vqse = Some(VqseReport::new(
            &pair,
            &sol,
            options.epsilon,
            options.with_matrices,
        ));
    }

    match options.oo {
        OoMode::None => {}
        OoMode::Sweep => {
            let (_, rep) = givens_sweep(
                &mo_r,
                &reference.full_rdm1,
                &reference.full_rdm2,
                &partition,
                &options.sweep,
            )?;
            out.e_oo = Some(rep.final_energy);
            out.relaxation = Some(rep);
        }
        OoMode::Joint => {
            let (_, rep) = joint_optimize(
                &mo_r,
                &reference.full_rdm1,
                &reference.full_rdm2,
                &partition,
                &[],
                &options.joint,
            )?;
            out.e_oo = Some(rep.final_energy);
            out.relaxation = Some(rep);
        }
        OoMode::Iterate { cycles } => {
            let rep = relax_then_resolve(&mo_r, &partition, n_el, cycles, &options.sweep)?;
            out.e_oo = rep.cycle_energies.last().copied();
            out.cycle_energies = rep.cycle_energies.clone();
            out.relaxation = rep.sweeps.last().cloned();
        }
    }

    if options.full_fci {
        let h = build_hamiltonian_action(&mo)?;
        out.e_fci_full = Some(ground_state(&h, n_el, Some((n_el % 2) as i32))?.energy);
    }
    Ok(out)
}

fn restrict(mo: &MolecularIntegrals, p: &OrbitalPartition) -> MolecularIntegrals {
    let mut kept: Vec<usize> = p
        .core
        .iter()
        .chain(&p.active)
        .chain(&p.virtuals)
        .copied()
        .collect();
    kept.sort_unstable();
    mo.subset(&kept)
}

/// The partition renumbered onto [`restrict`]'s orbitals.
fn compact(p: &OrbitalPartition) -> OrbitalPartition {
    let mut kept: Vec<usize> = p
        .core
        .iter()
        .chain(&p.active)
        .chain(&p.virtuals)
        .copied()
        .collect();
    kept.sort_unstable();
    let idx = |x: &usize| kept.iter().position(|k| k == x).expect("kept");
    OrbitalPartition {
        core: p.core.iter().map(idx).collect(),
        active: p.active.iter().map(idx).collect(),
        virtuals: p.virtuals.iter().map(idx).collect(),
        active_excited: p
            .active_excited
            .as_ref()
            .map(|s| s.iter().map(idx).collect()),
    }
}

/// One scan point: the result, or the failure message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub bond_angstrom: f64,
    pub result: std::result::Result<PointResult, String>,
}

/// Diatomic scan. Points are independent (parallel with `rayon`); a
/// failing point is recorded and the scan continues. The noise seed of
/// point `k` is `seed + k`.
pub fn vqse_energy_curve(
    atoms: (&str, &str),
    bonds_angstrom: &[f64],
    options: &MethodOptions,
) -> Vec<CurvePoint> {
    let run = |(k, &r): (usize, &f64)| {
        let mut opts = options.clone();
        opts.seed = options.seed.wrapping_add(k as u64);
        let result = Geometry::diatomic(atoms.0, atoms.1, r)
            .and_then(|g| run_point(&g, r, &opts))
            .map_err(|e| e.to_string());
        CurvePoint {
            bond_angstrom: r,
            result,
        }
    };
    crate::if_rayon!(
        bonds_angstrom.par_iter().enumerate().map(run).collect(),
        bonds_angstrom.iter().enumerate().map(run).collect()
    )
}
