//! Reduced density matrices, Grassmann wedge products and cumulants.
//!
//! Convention: `D^{u1…uk}_{p1…pk} = ⟨a†_{uk} … a†_{u1} a_{p1} … a_{pk}⟩`,
//! so `Σ_P D^P_P = N!/(N−k)!`. Tensors store only sorted index tuples;
//! [`Rdm::get`] accepts any order and applies the antisymmetry sign.

mod composite;
mod compute;
mod cumulant;
mod noise;
mod tensor;
mod wedge;

use std::collections::BTreeMap;

pub use composite::{composite_full_rdms, embed_rdm};
pub use compute::compute_rdm;
pub use cumulant::{cumulant_3rdm, cumulant_4rdm, CumulantSet};
pub use noise::inject_shot_noise;
pub use tensor::{binomial, combinations, rank_sorted, sort_with_sign, Rdm, MAX_RANK};
pub use wedge::{wedge, wedge_power};

use crate::fci::Wavefunction;
use crate::integrals::MolecularIntegrals;
use crate::{Error, Result};

/// Density matrices of one state, keyed by rank.
#[derive(Debug, Clone)]
pub struct RdmSet {
    pub n: usize,
    pub n_electrons: usize,
    rdms: BTreeMap<usize, Rdm>,
}

impl RdmSet {
    pub fn new(n: usize, n_electrons: usize) -> Self {
        RdmSet {
            n,
            n_electrons,
            rdms: BTreeMap::new(),
        }
    }

    /// Exact density matrices of ranks `1..=max_rank`.
    pub fn exact(psi: &Wavefunction, max_rank: usize) -> Result<Self> {
        let mut set = RdmSet::new(psi.n_spin_orbitals, psi.n_electrons);
        for k in 1..=max_rank {
            set.insert(compute_rdm(psi, k)?)?;
        }
        Ok(set)
    }

    /// Exact 1- and 2-RDM; ranks `3..=max_rank` rebuilt from cumulants
    /// `Δ_l` with `l ≤ truncation` (the truncation may be at most 2 here,
    /// since only the 1- and 2-RDM are taken as measured).
    pub fn cumulant(psi: &Wavefunction, max_rank: usize, truncation: usize) -> Result<Self> {
        let mut set = RdmSet::exact(psi, max_rank.min(2))?;
        if max_rank > 2 {
            let d1 = set.get(1)?;
            let d2 = set.get(2)?;
            let cum = CumulantSet::from_rdms(&[d1, d2])?;
            let mut extra = Vec::new();
            for k in 3..=max_rank {
                extra.push(cum.reconstruct(k, truncation)?);
            }
            for r in extra {
                set.insert(r)?;
            }
        }
        Ok(set)
    }

    pub fn insert(&mut self, rdm: Rdm) -> Result<()> {
        if rdm.n != self.n {
            return Err(Error::Shape(format!(
                "rank-{} tensor over {} spin orbitals in a set over {}",
                rdm.k, rdm.n, self.n
            )));
        }
        self.rdms.insert(rdm.k, rdm);
        Ok(())
    }

    pub fn get(&self, k: usize) -> Result<&Rdm> {
        self.rdms.get(&k).ok_or(Error::MissingRdm(k))
    }

    pub fn ranks(&self) -> impl Iterator<Item = usize> + '_ {
        self.rdms.keys().copied()
    }

    /// Applies [`inject_shot_noise`] to every rank, with seed `seed + k`.
    pub fn with_shot_noise(&self, shots: f64, seed: u64) -> Result<Self> {
        let mut out = RdmSet::new(self.n, self.n_electrons);
        for (k, r) in &self.rdms {
            out.insert(inject_shot_noise(r, shots, seed.wrapping_add(*k as u64))?)?;
        }
        Ok(out)
    }
}

/// `c + Σ h_ij ⟨a†_i a_j⟩ + ½ Σ h_ijkl ⟨a†_i a†_j a_k a_l⟩` from spin-orbital
/// 1- and 2-RDMs over all orbitals of `ints`.
pub fn rdm_energy(ints: &MolecularIntegrals, rdm1: &Rdm, rdm2: &Rdm) -> Result<f64> {
    let n = ints.n_spin_orbitals();
    if rdm1.n != n || rdm2.n != n || rdm1.k != 1 || rdm2.k != 2 {
        return Err(Error::Shape(format!(
            "energy over {n} spin orbitals needs matching 1- and 2-RDM"
        )));
    }
    let mut e = ints.scalar_energy();
    for i in 0..n {
        for j in 0..n {
            let h = ints.h1_so(i, j);
            if h != 0.0 {
                e += h * rdm1.get(&[i], &[j]).re;
            }
        }
    }
    let mut two = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for k in 0..n {
                for l in 0..n {
                    if k == l {
                        continue;
                    }
                    let h = ints.h2_so(i, j, k, l);
                    if h != 0.0 {
                        two += h * rdm2.get(&[j, i], &[k, l]).re;
                    }
                }
            }
        }
    }
    Ok(e + 0.5 * two)
}
