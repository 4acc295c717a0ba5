//! Molecular integrals for s/p Gaussian basis sets, restricted Hartree–Fock,
//! the AO→MO transformation, core dressing and the FCIDUMP format.
//!
//! Two-electron integrals are stored in chemist notation `(pq|rs)` over
//! spatial orbitals. The spin-orbital coefficients of
//! `H = Σ h_ij a†_i a_j + ½ Σ h_ijkl a†_i a†_j a_k a_l` are
//! `h_ij = δ(σi,σj) h(i/2, j/2)` and
//! `h_ijkl = δ(σi,σl) δ(σj,σk) (i/2 l/2 | j/2 k/2)`.

mod basis;
mod boys;
mod fcidump;
mod gaussian;
mod scf;
mod transform;

pub use basis::{AngularMomentum, BasisSet, Shell};
pub use boys::boys_function;
pub use fcidump::{
    read_fcidump, read_fcidump_str, write_fcidump, write_fcidump_string, FcidumpHeader,
};
pub use gaussian::{compute_ao_integrals, AoIntegrals};
pub use scf::{run_rhf, ScfOptions, ScfResult};
pub use transform::{dress_core, transform_integrals, transform_to_mo};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, BOHR_IN_ANGSTROM};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub symbol: String,
    pub charge: f64,
    /// Position in bohr.
    pub position: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub atoms: Vec<Atom>,
}

impl Geometry {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Domain("geometry has no atoms".into()));
        }
        for a in &atoms {
            if !(a.charge > 0.0) {
                return Err(Error::Domain(format!(
                    "atom {} has non-positive charge",
                    a.symbol
                )));
            }
            if a.position.iter().any(|x| !x.is_finite()) {
                return Err(Error::Domain(format!(
                    "atom {} has a non-finite position",
                    a.symbol
                )));
            }
        }
        Ok(Geometry { atoms })
    }

    /// Homonuclear or heteronuclear diatomic along z; bond length in ångström.
    pub fn diatomic(a: &str, b: &str, bond_angstrom: f64) -> Result<Self> {
        let z = bond_angstrom / BOHR_IN_ANGSTROM;
        Geometry::new(vec![
            Atom {
                symbol: a.to_string(),
                charge: nuclear_charge(a)?,
                position: [0.0, 0.0, 0.0],
            },
            Atom {
                symbol: b.to_string(),
                charge: nuclear_charge(b)?,
                position: [0.0, 0.0, z],
            },
        ])
    }

    pub fn translated(&self, shift: [f64; 3]) -> Geometry {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                position: [
                    a.position[0] + shift[0],
                    a.position[1] + shift[1],
                    a.position[2] + shift[2],
                ],
                ..a.clone()
            })
            .collect();
        Geometry { atoms }
    }

    pub fn nuclear_repulsion(&self) -> f64 {
        let mut e = 0.0;
        for (i, a) in self.atoms.iter().enumerate() {
            for b in &self.atoms[..i] {
                let d2: f64 = (0..3)
                    .map(|k| (a.position[k] - b.position[k]).powi(2))
                    .sum();
                e += a.charge * b.charge / d2.sqrt();
            }
        }
        e
    }

    pub fn total_charge(&self) -> f64 {
        self.atoms.iter().map(|a| a.charge).sum()
    }
}

pub fn nuclear_charge(symbol: &str) -> Result<f64> {
    const TABLE: [&str; 10] = ["H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne"];
    TABLE
        .iter()
        .position(|s| s.eq_ignore_ascii_case(symbol))
        .map(|z| (z + 1) as f64)
        .ok_or_else(|| Error::Domain(format!("unknown element {symbol}")))
}

/// Dense four-index tensor `(pq|rs)`, row-major in `p, q, r, s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eri {
    n: usize,
    data: Vec<f64>,
}

impl Eri {
    pub fn zeros(n: usize) -> Self {
        Eri {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    pub fn from_vec(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n * n * n {
            return Err(Error::Shape(format!(
                "eri needs {} values, got {}",
                n.pow(4),
                data.len()
            )));
        }
        Ok(Eri { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn offset(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        ((p * self.n + q) * self.n + r) * self.n + s
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.data[self.offset(p, q, r, s)]
    }

    pub fn set(&mut self, p: usize, q: usize, r: usize, s: usize, v: f64) {
        let o = self.offset(p, q, r, s);
        self.data[o] = v;
    }

    /// Sets all eight permutationally equivalent elements.
    pub fn set_sym(&mut self, p: usize, q: usize, r: usize, s: usize, v: f64) {
        for (a, b, c, d) in [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ] {
            self.set(a, b, c, d, v);
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Largest violation of the 8-fold permutational symmetry.
    pub fn symmetry_error(&self) -> f64 {
        let n = self.n;
        let mut err: f64 = 0.0;
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let v = self.get(p, q, r, s);
                        err = err
                            .max((v - self.get(q, p, r, s)).abs())
                            .max((v - self.get(p, q, s, r)).abs())
                            .max((v - self.get(r, s, p, q)).abs());
                    }
                }
            }
        }
        err
    }
}

/// One- and two-electron integrals over an orthonormal orbital basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularIntegrals {
    pub n_spatial: usize,
    /// Nuclear repulsion energy.
    pub e_nuc: f64,
    /// Electronic energy of frozen core orbitals folded into the one-body
    /// term (zero unless produced by [`dress_core`]).
    pub core_energy_shift: f64,
    pub h1: DMatrix<f64>,
    pub eri: Eri,
}

impl MolecularIntegrals {
    pub fn new(e_nuc: f64, h1: DMatrix<f64>, eri: Eri) -> Result<Self> {
        let n = h1.nrows();
        if h1.ncols() != n || eri.dim() != n {
            return Err(Error::Shape(format!(
                "h1 is {}x{}, eri has dimension {}",
                h1.nrows(),
                h1.ncols(),
                eri.dim()
            )));
        }
        Ok(MolecularIntegrals {
            n_spatial: n,
            e_nuc,
            core_energy_shift: 0.0,
            h1,
            eri,
        })
    }

    pub fn zeros(n: usize) -> Self {
        MolecularIntegrals {
            n_spatial: n,
            e_nuc: 0.0,
            core_energy_shift: 0.0,
            h1: DMatrix::zeros(n, n),
            eri: Eri::zeros(n),
        }
    }

    pub fn n_spin_orbitals(&self) -> usize {
        2 * self.n_spatial
    }

    /// Scalar part of the Hamiltonian.
    pub fn scalar_energy(&self) -> f64 {
        self.e_nuc + self.core_energy_shift
    }

    #[inline]
    pub fn h1_so(&self, i: usize, j: usize) -> f64 {
        if (i ^ j) & 1 == 1 {
            0.0
        } else {
            self.h1[(i / 2, j / 2)]
        }
    }

    /// Spin-orbital two-body coefficient `h_ijkl` of `½ Σ h_ijkl a†_i a†_j a_k a_l`.
    #[inline]
    pub fn h2_so(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        if (i ^ l) & 1 == 1 || (j ^ k) & 1 == 1 {
            0.0
        } else {
            self.eri.get(i / 2, l / 2, j / 2, k / 2)
        }
    }

    pub fn symmetry_error(&self) -> f64 {
        let h = (&self.h1 - self.h1.transpose()).amax();
        h.max(self.eri.symmetry_error())
    }

    /// Energy of the closed-shell determinant occupying the first `n_occ`
    /// spatial orbitals.
    pub fn closed_shell_energy(&self, n_occ: usize) -> f64 {
        let mut e = self.scalar_energy();
        for i in 0..n_occ {
            e += 2.0 * self.h1[(i, i)];
            for j in 0..n_occ {
                e += 2.0 * self.eri.get(i, i, j, j) - self.eri.get(i, j, j, i);
            }
        }
        e
    }

    /// Energy functional of spin-summed spatial density matrices
    /// `γ_pq = Σσ ⟨a†_pσ a_qσ⟩` and `Γ_pqrs = Σστ ⟨a†_pσ a†_rτ a_sτ a_qσ⟩`.
    pub fn energy_from_spatial_rdms(&self, gamma: &DMatrix<f64>, big_gamma: &Eri) -> f64 {
        let n = self.n_spatial;
        let mut e = self.scalar_energy();
        for p in 0..n {
            for q in 0..n {
                e += self.h1[(p, q)] * gamma[(p, q)];
            }
        }
        let two: f64 = self
            .eri
            .as_slice()
            .iter()
            .zip(big_gamma.as_slice())
            .map(|(a, b)| a * b)
            .sum();
        e + 0.5 * two
    }
}
