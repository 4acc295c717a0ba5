use nalgebra::DMatrix;
#[cfg(feature = "rayon")]
use rayon::prelude::*;

use crate::integrals::MolecularIntegrals;
use crate::{Complex, Error, Result};

use super::determinant::{apply_unchecked, Determinant, Ladder, MAX_SPIN_ORBITALS};
use super::wavefunction::Wavefunction;

/// Matrix-free action of
/// `H = c + Σ h_ij a†_i a_j + ½ Σ h_ijkl a†_i a†_j a_k a_l`.
///
/// Read-only after construction, so one instance can be shared between
/// threads.
#[derive(Debug, Clone)]
pub struct HamiltonianAction {
    n_spin_orbitals: usize,
    scalar: f64,
    h1: Vec<f64>,
    ints: MolecularIntegrals,
}

pub fn build_hamiltonian_action(ints: &MolecularIntegrals) -> Result<HamiltonianAction> {
    HamiltonianAction::new(ints)
}

impl HamiltonianAction {
    pub fn new(ints: &MolecularIntegrals) -> Result<Self> {
        let n = ints.n_spin_orbitals();
        if n > MAX_SPIN_ORBITALS {
            return Err(Error::Domain(format!(
                "{n} spin orbitals exceed the {MAX_SPIN_ORBITALS}-bit determinant"
            )));
        }
        let sym = ints.symmetry_error();
        if !sym.is_finite() || sym > 1e-8 {
            return Err(Error::Domain(format!(
                "integrals violate permutational symmetry by {sym:e}"
            )));
        }
        let mut h1 = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                h1[i * n + j] = ints.h1_so(i, j);
            }
        }
        Ok(HamiltonianAction {
            n_spin_orbitals: n,
            scalar: ints.scalar_energy(),
            h1,
            ints: ints.clone(),
        })
    }

    pub fn n_spin_orbitals(&self) -> usize {
        self.n_spin_orbitals
    }

    pub fn integrals(&self) -> &MolecularIntegrals {
        &self.ints
    }

    /// `H|det⟩` as an unsorted list of (determinant, coefficient) with
    /// repeated determinants possible.
    fn connections(&self, det: Determinant, out: &mut Vec<(Determinant, f64)>) {
        let n = self.n_spin_orbitals;
        let occ: Vec<usize> = det.occupied().collect();
        let empty: Vec<usize> = (0..n).filter(|&i| !det.is_occupied(i)).collect();

        let mut diag = self.scalar;
        for &j in &occ {
            diag += self.h1[j * n + j];
            for &i in &empty {
                let h = self.h1[i * n + j];
                if h != 0.0 {
                    if let Some((s, d)) =
                        apply_unchecked(&[Ladder::create(i), Ladder::annihilate(j)], det)
                    {
                        out.push((d, s * h));
                    }
                }
            }
        }

        // Pair form: for k < l occupied and i < j, the four orderings of
        // ½ h a†a†aa collapse to (h_ijkl − h_ijlk) a†_i a†_j a_k a_l.
        for (b, &l) in occ.iter().enumerate() {
            for &k in &occ[..b] {
                // diagonal: i, j = k, l
                diag += self.ints.h2_so(k, l, l, k) - self.ints.h2_so(k, l, k, l);
                let Some((s_kl, removed)) =
                    apply_unchecked(&[Ladder::annihilate(k), Ladder::annihilate(l)], det)
                else {
                    continue;
                };
                for j in 0..n {
                    if removed.is_occupied(j) {
                        continue;
                    }
                    for i in 0..j {
                        if removed.is_occupied(i) || (i == k && j == l) {
                            continue;
                        }
                        let h = self.ints.h2_so(i, j, k, l) - self.ints.h2_so(i, j, l, k);
                        if h == 0.0 {
                            continue;
                        }
                        if let Some((s, d)) =
                            apply_unchecked(&[Ladder::create(i), Ladder::create(j)], removed)
                        {
                            out.push((d, s * s_kl * h));
                        }
                    }
                }
            }
        }
        out.push((det, diag));
    }

    /// Nonzero matrix elements `⟨d'|H|det⟩`, sorted by `d'` and merged.
    pub fn column(&self, det: Determinant) -> Vec<(Determinant, f64)> {
        let mut raw = Vec::new();
        self.connections(det, &mut raw);
        raw.sort_by_key(|e| e.0);
        let mut merged: Vec<(Determinant, f64)> = Vec::with_capacity(raw.len());
        for (d, v) in raw {
            match merged.last_mut() {
                Some(last) if last.0 == d => last.1 += v,
                _ => merged.push((d, v)),
            }
        }
        merged
    }

    pub fn diagonal(&self, det: Determinant) -> f64 {
        self.column(det)
            .into_iter()
            .find(|e| e.0 == det)
            .map_or(0.0, |e| e.1)
    }

    pub fn apply(&self, psi: &Wavefunction) -> Result<Wavefunction> {
        if psi.n_spin_orbitals != self.n_spin_orbitals {
            return Err(Error::Shape(format!(
                "state has {} spin orbitals, Hamiltonian {}",
                psi.n_spin_orbitals, self.n_spin_orbitals
            )));
        }
        let mut out = Wavefunction::zero(self.n_spin_orbitals, psi.n_electrons)?;
        let mut buf = Vec::new();
        for (d, c) in psi.iter() {
            buf.clear();
            self.connections(d, &mut buf);
            for &(nd, v) in &buf {
                out.add(nd, c * v)?;
            }
        }
        Ok(out)
    }

    /// `⟨bra|H|ket⟩`.
    pub fn expectation(&self, bra: &Wavefunction, ket: &Wavefunction) -> Result<Complex> {
        Ok(bra.inner(&self.apply(ket)?))
    }

    /// Sparse columns over a sorted determinant list, as (row, value) pairs.
    pub fn sector_columns(&self, dets: &[Determinant]) -> Vec<Vec<(usize, f64)>> {
        let col = |d: &Determinant| -> Vec<(usize, f64)> {
            self.column(*d)
                .into_iter()
                .filter_map(|(nd, v)| dets.binary_search(&nd).ok().map(|r| (r, v)))
                .collect()
        };
        crate::if_rayon!(
            dets.par_iter().map(col).collect(),
            dets.iter().map(col).collect()
        )
    }

    /// Dense matrix over a sorted determinant list.
    pub fn sector_matrix(&self, dets: &[Determinant]) -> DMatrix<f64> {
        let n = dets.len();
        let mut m = DMatrix::zeros(n, n);
        for (j, col) in self.sector_columns(dets).into_iter().enumerate() {
            for (i, v) in col {
                m[(i, j)] = v;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::Eri;

    #[test]
    fn one_orbital_closed_form() {
        let mut h1 = DMatrix::zeros(1, 1);
        h1[(0, 0)] = -1.0;
        let mut eri = Eri::zeros(1);
        eri.set_sym(0, 0, 0, 0, 0.5);
        let ints = MolecularIntegrals::new(0.25, h1, eri).unwrap();
        let h = HamiltonianAction::new(&ints).unwrap();
        assert!((h.diagonal(Determinant(0b11)) - (-2.0 + 0.5 + 0.25)).abs() < 1e-15);
    }

    #[test]
    fn zero_integrals_give_zero_action() {
        let ints = MolecularIntegrals::zeros(3);
        let h = HamiltonianAction::new(&ints).unwrap();
        let psi = Wavefunction::from_determinant(6, Determinant(0b100101)).unwrap();
        let out = h.apply(&psi).unwrap();
        assert!(out.iter().all(|(_, c)| c.norm() == 0.0));
    }
}
