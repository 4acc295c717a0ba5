//! Core / active / virtual division of the spatial orbitals.
//!
//! Spatial orbital `p` maps to spin orbitals `2p` (alpha) and `2p + 1`
//! (beta). Active density matrices are indexed by *local* active spin
//! orbitals: the `a`-th active spatial orbital gives local indices `2a` and
//! `2a + 1`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    Core,
    Active,
    Virtual,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitalPartition {
    pub core: Vec<usize>,
    pub active: Vec<usize>,
    pub virtuals: Vec<usize>,
    /// Optional subset of `active` that is excited into the virtuals. `None`
    /// means the whole active space.
    #[serde(default)]
    pub active_excited: Option<Vec<usize>>,
}

impl OrbitalPartition {
    pub fn new(core: Vec<usize>, active: Vec<usize>, virtuals: Vec<usize>) -> Result<Self> {
        let p = OrbitalPartition {
            core,
            active,
            virtuals,
            active_excited: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// Consecutive blocks: `n_core` core orbitals, then `n_active`, then
    /// `n_virtual`.
    pub fn from_counts(n_core: usize, n_active: usize, n_virtual: usize) -> Self {
        OrbitalPartition {
            core: (0..n_core).collect(),
            active: (n_core..n_core + n_active).collect(),
            virtuals: (n_core + n_active..n_core + n_active + n_virtual).collect(),
            active_excited: None,
        }
    }

    pub fn with_active_excited(mut self, subset: Vec<usize>) -> Result<Self> {
        self.active_excited = Some(subset);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for &p in self.core.iter().chain(&self.active).chain(&self.virtuals) {
            if !seen.insert(p) {
                return Err(Error::Partition(format!("orbital {p} listed twice")));
            }
        }
        for w in [&self.core, &self.active, &self.virtuals] {
            if w.windows(2).any(|x| x[0] >= x[1]) {
                return Err(Error::Partition(
                    "orbital lists must be strictly increasing".into(),
                ));
            }
        }
        if let Some(sub) = &self.active_excited {
            if let Some(p) = sub.iter().find(|p| !self.active.contains(p)) {
                return Err(Error::Partition(format!(
                    "excited subset orbital {p} is not active"
                )));
            }
        }
        Ok(())
    }

    /// Total number of spatial orbitals covered (largest index + 1).
    pub fn n_spatial(&self) -> usize {
        self.core
            .iter()
            .chain(&self.active)
            .chain(&self.virtuals)
            .max()
            .map_or(0, |m| m + 1)
    }

    pub fn check_covers(&self, n_spatial: usize) -> Result<()> {
        self.validate()?;
        let count = self.core.len() + self.active.len() + self.virtuals.len();
        if count != n_spatial || self.n_spatial() != n_spatial {
            return Err(Error::Partition(format!(
                "partition covers {count} orbitals, integrals have {n_spatial}"
            )));
        }
        Ok(())
    }

    pub fn space_of_spatial(&self, p: usize) -> Option<Space> {
        if self.core.contains(&p) {
            Some(Space::Core)
        } else if self.active.contains(&p) {
            Some(Space::Active)
        } else if self.virtuals.contains(&p) {
            Some(Space::Virtual)
        } else {
            None
        }
    }

    pub fn space_of(&self, spin_orbital: usize) -> Option<Space> {
        self.space_of_spatial(spin_orbital / 2)
    }

    pub fn n_active_spin(&self) -> usize {
        2 * self.active.len()
    }

    pub fn core_spin_orbitals(&self) -> Vec<usize> {
        spin_orbitals(&self.core)
    }

    pub fn active_spin_orbitals(&self) -> Vec<usize> {
        spin_orbitals(&self.active)
    }

    pub fn virtual_spin_orbitals(&self) -> Vec<usize> {
        spin_orbitals(&self.virtuals)
    }

    /// Active spin orbitals that may be excited into the virtuals.
    pub fn excited_spin_orbitals(&self) -> Vec<usize> {
        match &self.active_excited {
            Some(sub) => spin_orbitals(sub),
            None => self.active_spin_orbitals(),
        }
    }

    /// Local active index of a full-space spin orbital.
    pub fn active_local(&self, spin_orbital: usize) -> Option<usize> {
        self.active
            .iter()
            .position(|&p| p == spin_orbital / 2)
            .map(|a| 2 * a + spin_orbital % 2)
    }

    /// Full-space spin orbital of a local active index.
    pub fn active_global(&self, local: usize) -> usize {
        2 * self.active[local / 2] + local % 2
    }

    /// Partition after deleting the core orbitals and renumbering the rest in
    /// ascending order. Returns the new partition and the old index of each
    /// retained spatial orbital.
    pub fn without_core(&self) -> (OrbitalPartition, Vec<usize>) {
        let mut kept: Vec<usize> = self.active.iter().chain(&self.virtuals).copied().collect();
        kept.sort_unstable();
        let new_index = |p: usize| kept.iter().position(|&q| q == p).unwrap();
        let part = OrbitalPartition {
            core: Vec::new(),
            active: self.active.iter().map(|&p| new_index(p)).collect(),
            virtuals: self.virtuals.iter().map(|&p| new_index(p)).collect(),
            active_excited: self
                .active_excited
                .as_ref()
                .map(|s| s.iter().map(|&p| new_index(p)).collect()),
        };
        (part, kept)
    }
}

pub fn spin_orbitals(spatial: &[usize]) -> Vec<usize> {
    spatial.iter().flat_map(|&p| [2 * p, 2 * p + 1]).collect()
}
