use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[cfg(feature = "rayon")]
use rayon::prelude::*;

use crate::fci::{build_hamiltonian_action, ground_state, GroundState};
use crate::integrals::{dress_core, MolecularIntegrals};
use crate::rdm::{composite_full_rdms, Rdm, RdmSet};
use crate::{Error, OrbitalPartition, Result};

use super::rotation::{givens_matrix, wrap_angle, GivensAngle, RotationParameters, SpatialRdms};
use super::trig::{sample_angles, TrigPolynomial};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelaxationReport {
    pub initial_energy: f64,
    pub final_energy: f64,
    /// Energy before the first sweep, then after each sweep (sweep mode), or
    /// initial and final (joint mode).
    pub energy_trace: Vec<f64>,
    /// Applied rotations in order.
    pub angles: Vec<GivensAngle>,
    pub sweeps: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub budget_exhausted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepOptions {
    pub max_sweeps: usize,
    /// Stop once every angle of a sweep is below this (radians).
    pub angle_tolerance: f64,
    /// Or once a whole sweep lowers the energy by less than this.
    pub energy_tolerance: f64,
    /// Also rotate active orbitals among themselves (redundant for an
    /// exact active-space ground state).
    pub active_active: bool,
    /// Minimise each angle within the basin of `θ = 0` instead of
    /// globally. The global step can swap an active orbital with a
    /// virtual one of another symmetry, after which the iterated loop
    /// settles in a different, higher active space.
    pub local_angles: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            max_sweeps: 100,
            angle_tolerance: 1e-7,
            energy_tolerance: 1e-13,
            active_active: false,
            local_angles: false,
        }
    }
}

/// Non-redundant pairs: active `i` ascending, then partner core ascending,
/// virtual ascending and, optionally, later active orbitals.
pub fn rotation_pairs(partition: &OrbitalPartition, active_active: bool) -> Vec<(usize, usize)> {
    let mut active = partition.active.clone();
    active.sort_unstable();
    let mut core = partition.core.clone();
    core.sort_unstable();
    let mut virt = partition.virtuals.clone();
    virt.sort_unstable();
    let mut out = Vec::new();
    for (k, &i) in active.iter().enumerate() {
        for &b in core.iter().chain(&virt) {
            out.push((i, b));
        }
        if active_active {
            for &b in &active[k + 1..] {
                out.push((i, b));
            }
        }
    }
    out
}

fn energy_at(ints: &MolecularIntegrals, rdms: &SpatialRdms, i: usize, b: usize, theta: f64) -> f64 {
    let g = givens_matrix(ints.n_spatial, i, b, theta);
    let rotated = ints.rotated(&g).expect("square rotation");
    rdms.energy(&rotated).expect("matching dimensions")
}

/// Cyclic single-angle minimisation. Each angle is fitted exactly by a
/// 9-sample trigonometric polynomial and set to its global minimum, so the
/// energy never rises.
pub fn givens_sweep(
    ints: &MolecularIntegrals,
    rdm1: &Rdm,
    rdm2: &Rdm,
    partition: &OrbitalPartition,
    options: &SweepOptions,
) -> Result<(RotationParameters, RelaxationReport)> {
    partition.check_covers(ints.n_spatial)?;
    let rdms = SpatialRdms::from_spin(rdm1, rdm2)?;
    let pairs = rotation_pairs(partition, options.active_active);
    let mut cur = ints.clone();
    let mut energy = rdms.energy(&cur)?;
    let initial = energy;
    let mut trace = vec![energy];
    let mut applied = Vec::new();
    let mut evaluations = 1;
    let mut converged = pairs.is_empty();
    let mut sweeps = 0;
    while !converged && sweeps < options.max_sweeps {
        sweeps += 1;
        let start = energy;
        let mut largest: f64 = 0.0;
        for &(i, b) in &pairs {
            let angles = sample_angles();
            let eval = |&t: &f64| energy_at(&cur, &rdms, i, b, t);
            let samples: Vec<f64> = crate::if_rayon!(
                angles.par_iter().map(eval).collect(),
                angles.iter().map(eval).collect()
            );
            evaluations += 9;
            let poly = TrigPolynomial::fit(&samples.try_into().expect("nine samples"));
            let (theta, _) = if options.local_angles {
                poly.minimize_local()
            } else {
                poly.minimize()
            };
            if theta == 0.0 {
                continue;
            }
            let g = givens_matrix(cur.n_spatial, i, b, theta);
            let next = cur.rotated(&g)?;
            let e = rdms.energy(&next)?;
            evaluations += 1;
            if e < energy {
                cur = next;
                energy = e;
                largest = largest.max(theta.abs());
                applied.push(GivensAngle { i, b, theta });
            }
        }
        trace.push(energy);
        converged = largest < options.angle_tolerance || start - energy < options.energy_tolerance;
    }
    let report = RelaxationReport {
        initial_energy: initial,
        final_energy: energy,
        energy_trace: trace,
        angles: applied.clone(),
        sweeps,
        evaluations,
        converged,
        budget_exhausted: false,
    };
    Ok((RotationParameters::Givens(applied), report))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JointOptions {
    /// Maximum number of energy evaluations.
    pub budget: usize,
    pub initial_step: f64,
    pub active_active: bool,
}

impl Default for JointOptions {
    fn default() -> Self {
        JointOptions {
            budget: 5000,
            initial_step: 0.05,
            active_active: false,
        }
    }
}

struct JointProblem<'a> {
    ints: &'a MolecularIntegrals,
    rdms: &'a SpatialRdms,
    base: DMatrix<f64>,
    pairs: Vec<(usize, usize)>,
    budget: usize,
    evaluations: AtomicUsize,
    best: Mutex<(f64, Vec<f64>)>,
}

impl JointProblem<'_> {
    fn unitary(&self, angles: &[f64]) -> DMatrix<f64> {
        let n = self.ints.n_spatial;
        let mut u = self.base.clone();
        for (&(i, b), &t) in self.pairs.iter().zip(angles) {
            u *= givens_matrix(n, i, b, t);
        }
        u
    }

    fn energy(&self, angles: &[f64]) -> Result<f64> {
        self.rdms.energy(&self.ints.rotated(&self.unitary(angles))?)
    }
}

impl CostFunction for JointProblem<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        if self.evaluations.fetch_add(1, Ordering::SeqCst) >= self.budget {
            return Err(argmin::core::Error::msg("evaluation budget exhausted"));
        }
        let e = self.energy(p).map_err(argmin::core::Error::new)?;
        let mut best = self.best.lock().expect("not poisoned");
        if e < best.0 {
            *best = (e, p.clone());
        }
        Ok(e)
    }
}

/// Derivative-free simplex minimisation over all pair angles at once,
/// starting from the rotation `initial`.
pub fn joint_optimize(
    ints: &MolecularIntegrals,
    rdm1: &Rdm,
    rdm2: &Rdm,
    partition: &OrbitalPartition,
    initial: &[GivensAngle],
    options: &JointOptions,
) -> Result<(RotationParameters, RelaxationReport)> {
    partition.check_covers(ints.n_spatial)?;
    let rdms = SpatialRdms::from_spin(rdm1, rdm2)?;
    let base = RotationParameters::Givens(initial.to_vec()).to_unitary(ints.n_spatial)?;
    let pairs = rotation_pairs(partition, options.active_active);
    let problem = JointProblem {
        ints,
        rdms: &rdms,
        base,
        pairs: pairs.clone(),
        budget: options.budget,
        evaluations: AtomicUsize::new(0),
        best: Mutex::new((f64::INFINITY, vec![0.0; pairs.len()])),
    };
    let start = problem.energy(&vec![0.0; pairs.len()])?;
    *problem.best.lock().expect("not poisoned") = (start, vec![0.0; pairs.len()]);

    let mut exhausted = false;
    if options.budget > 0 && !pairs.is_empty() {
        let x0 = vec![0.0; pairs.len()];
        let mut simplex = vec![x0.clone()];
        for k in 0..pairs.len() {
            let mut v = x0.clone();
            v[k] += options.initial_step;
            simplex.push(v);
        }
        let solver = NelderMead::new(simplex)
            .with_sd_tolerance(1e-15)
            .map_err(|e| Error::Domain(e.to_string()))?;
        let run = Executor::new(&problem, solver)
            .configure(|s| s.max_iters(options.budget as u64))
            .run();
        exhausted = run.is_err() || problem.evaluations.load(Ordering::SeqCst) >= options.budget;
    } else if options.budget == 0 {
        exhausted = !pairs.is_empty();
    }
    let (final_energy, best) = problem.best.lock().expect("not poisoned").clone();
    let mut angles = initial.to_vec();
    angles.extend(
        pairs
            .iter()
            .zip(&best)
            .filter(|(_, &t)| t != 0.0)
            .map(|(&(i, b), &t)| GivensAngle {
                i,
                b,
                theta: wrap_angle(t),
            }),
    );
    let evaluations = problem
        .evaluations
        .load(Ordering::SeqCst)
        .min(options.budget)
        + 1;
    let report = RelaxationReport {
        initial_energy: start,
        final_energy,
        energy_trace: vec![start, final_energy],
        angles: angles.clone(),
        sweeps: 0,
        evaluations,
        converged: !exhausted,
        budget_exhausted: exhausted,
    };
    Ok((RotationParameters::Givens(angles), report))
}

impl CostFunction for &JointProblem<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        (**self).cost(p)
    }
}

/// Active-space ground state in the given orbitals and its full-space
/// 1- and 2-RDMs (core doubly occupied).
#[derive(Debug, Clone)]
pub struct ActiveSolution {
    pub ground_state: GroundState,
    /// Active-space 1- and 2-RDM over local active spin orbitals.
    pub active_rdms: RdmSet,
    pub full_rdm1: Rdm,
    pub full_rdm2: Rdm,
}

pub fn solve_active_space(
    mo: &MolecularIntegrals,
    partition: &OrbitalPartition,
    n_electrons: usize,
    max_rank: usize,
) -> Result<ActiveSolution> {
    let n_core = 2 * partition.core.len();
    if n_electrons < n_core || n_electrons - n_core > partition.n_active_spin() {
        return Err(Error::Domain(format!(
            "{n_electrons} electrons do not fit {} core and {} active orbitals",
            partition.core.len(),
            partition.active.len()
        )));
    }
    let n_act = n_electrons - n_core;
    let (dressed, _) = dress_core(mo, partition)?;
    let active_ints = {
        let (reduced, _) = partition.without_core();
        dressed.subset(&reduced.active)
    };
    let h = build_hamiltonian_action(&active_ints)?;
    let gs = ground_state(&h, n_act, Some((n_act % 2) as i32))?;
    let rdms = RdmSet::exact(&gs.wavefunction, max_rank.max(2))?;
    let (full_rdm1, full_rdm2) = composite_full_rdms(rdms.get(1)?, rdms.get(2)?, partition)?;
    Ok(ActiveSolution {
        ground_state: gs,
        active_rdms: rdms,
        full_rdm1,
        full_rdm2,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationReport {
    /// Active-space energy in the orbitals at the start of each cycle.
    pub active_energies: Vec<f64>,
    /// Relaxed energy at the end of each cycle.
    pub cycle_energies: Vec<f64>,
    pub rotation: RotationParameters,
    pub sweeps: Vec<RelaxationReport>,
}

/// Alternates the active-space solve with a Givens sweep of the orbitals.
pub fn relax_then_resolve(
    mo: &MolecularIntegrals,
    partition: &OrbitalPartition,
    n_electrons: usize,
    cycles: usize,
    options: &SweepOptions,
) -> Result<IterationReport> {
    if cycles == 0 {
        return Err(Error::Domain("at least one cycle is needed".into()));
    }
    let mut cur = mo.clone();
    let mut all = Vec::new();
    let mut report = IterationReport {
        active_energies: Vec::new(),
        cycle_energies: Vec::new(),
        rotation: RotationParameters::identity(),
        sweeps: Vec::new(),
    };
    for _ in 0..cycles {
        let sol = solve_active_space(&cur, partition, n_electrons, 2)?;
        report.active_energies.push(sol.ground_state.energy);
        let (rot, sweep) = givens_sweep(&cur, &sol.full_rdm1, &sol.full_rdm2, partition, options)?;
        let u = rot.to_unitary(cur.n_spatial)?;
        cur = cur.rotated(&u)?;
        if let RotationParameters::Givens(list) = rot {
            all.extend(list);
        }
        report.cycle_energies.push(sweep.final_energy);
        report.sweeps.push(sweep);
    }
    report.rotation = RotationParameters::Givens(all);
    Ok(report)
}
