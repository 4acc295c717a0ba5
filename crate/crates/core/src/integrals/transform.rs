//! Orbital transformations and frozen-core dressing.

use nalgebra::DMatrix;

use super::{AoIntegrals, Eri, MolecularIntegrals};
use crate::partition::OrbitalPartition;
use crate::{Error, Result};

/// Four sequential quarter transformations, `O(n⁵)`:
/// `(pq|rs) = Σ C_μp C_νq C_λr C_σs (μν|λσ)`.
fn quarter_transform(eri: &Eri, c: &DMatrix<f64>) -> Eri {
    let n = c.nrows();
    let m = c.ncols();
    // step k contracts the leading index and rotates it to the back:
    // t[b, c, d, p] = Σ_a x[a, b, c, d] C[a, p]
    let mut cur: Vec<f64> = eri.as_slice().to_vec();
    let mut dims = [n, n, n, n];
    for _ in 0..4 {
        let [d0, d1, d2, d3] = dims;
        let rest = d1 * d2 * d3;
        let mut next = vec![0.0; rest * m];
        for a in 0..d0 {
            let src = &cur[a * rest..(a + 1) * rest];
            for p in 0..m {
                let cap = c[(a, p)];
                if cap == 0.0 {
                    continue;
                }
                for (r, &x) in src.iter().enumerate() {
                    next[r * m + p] += cap * x;
                }
            }
        }
        cur = next;
        dims = [d1, d2, d3, m];
    }
    Eri::from_vec(m, cur).expect("dimensions are consistent")
}

/// Transforms one- and two-electron integrals to the basis given by the
/// columns of `c`.
pub fn transform_integrals(
    h1: &DMatrix<f64>,
    eri: &Eri,
    c: &DMatrix<f64>,
) -> Result<(DMatrix<f64>, Eri)> {
    if c.nrows() != h1.nrows() || h1.nrows() != h1.ncols() || eri.dim() != h1.nrows() {
        return Err(Error::Shape(format!(
            "coefficients {}x{} do not match integrals of dimension {}",
            c.nrows(),
            c.ncols(),
            h1.nrows()
        )));
    }
    let h = c.transpose() * h1 * c;
    let h = 0.5 * (&h + h.transpose());
    Ok((h, quarter_transform(eri, c)))
}

pub fn transform_to_mo(
    ao: &AoIntegrals,
    mo_coefficients: &DMatrix<f64>,
) -> Result<MolecularIntegrals> {
    if !mo_coefficients.is_square() {
        return Err(Error::Shape("MO coefficient matrix must be square".into()));
    }
    let (h1, eri) = transform_integrals(&ao.core_hamiltonian(), &ao.eri, mo_coefficients)?;
    MolecularIntegrals::new(ao.e_nuc, h1, eri)
}

impl MolecularIntegrals {
    /// Integrals over the rotated orbitals `φ'_p = Σ_q φ_q U_qp`.
    pub fn rotated(&self, u: &DMatrix<f64>) -> Result<MolecularIntegrals> {
        let (h1, eri) = transform_integrals(&self.h1, &self.eri, u)?;
        Ok(MolecularIntegrals {
            n_spatial: u.ncols(),
            e_nuc: self.e_nuc,
            core_energy_shift: self.core_energy_shift,
            h1,
            eri,
        })
    }

    /// Restriction to a subset of orbitals (no dressing).
    pub fn subset(&self, orbitals: &[usize]) -> MolecularIntegrals {
        let m = orbitals.len();
        let h1 = DMatrix::from_fn(m, m, |i, j| self.h1[(orbitals[i], orbitals[j])]);
        let mut eri = Eri::zeros(m);
        for (p, &op) in orbitals.iter().enumerate() {
            for (q, &oq) in orbitals.iter().enumerate() {
                for (r, &or) in orbitals.iter().enumerate() {
                    for (s, &os) in orbitals.iter().enumerate() {
                        eri.set(p, q, r, s, self.eri.get(op, oq, or, os));
                    }
                }
            }
        }
        MolecularIntegrals {
            n_spatial: m,
            e_nuc: self.e_nuc,
            core_energy_shift: self.core_energy_shift,
            h1,
            eri,
        }
    }
}

/// Folds doubly occupied core orbitals into an effective one-body operator
/// over the remaining orbitals plus a scalar.
///
/// The result covers `active ∪ virtual` renumbered in ascending order (the
/// returned partition uses the new numbering and has an empty core). Its
/// `core_energy_shift` holds the core electronic energy, so that
/// `⟨Φ_core ⊗ Ψ|H|Φ_core ⊗ Ψ⟩ = scalar_energy() + ⟨Ψ|H_dressed|Ψ⟩`
/// where `scalar_energy() = e_nuc + core_energy_shift`.
pub fn dress_core(
    mo: &MolecularIntegrals,
    partition: &OrbitalPartition,
) -> Result<(MolecularIntegrals, OrbitalPartition)> {
    partition.check_covers(mo.n_spatial)?;
    let (reduced, kept) = partition.without_core();
    let core = &partition.core;
    let mut out = mo.subset(&kept);
    let mut e_core = 0.0;
    for &c in core {
        e_core += 2.0 * mo.h1[(c, c)];
        for &d in core {
            e_core += 2.0 * mo.eri.get(c, c, d, d) - mo.eri.get(c, d, d, c);
        }
    }
    for (p, &op) in kept.iter().enumerate() {
        for (q, &oq) in kept.iter().enumerate() {
            let v: f64 = core
                .iter()
                .map(|&c| 2.0 * mo.eri.get(op, oq, c, c) - mo.eri.get(op, c, c, oq))
                .sum();
            out.h1[(p, q)] += v;
        }
    }
    out.core_energy_shift = mo.core_energy_shift + e_core;
    Ok((out, reduced))
}
