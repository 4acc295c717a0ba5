#[cfg(feature = "rayon")]
use rayon::prelude::*;

use crate::fci::{Determinant, Wavefunction};
use crate::{Complex, Result};

use super::tensor::{combinations, Rdm};

/// `A_P |Ψ⟩` for `A_P = a_{p1} … a_{pk}` as a determinant-sorted list.
fn annihilated(psi: &Wavefunction, p: &[usize]) -> Vec<(Determinant, Complex)> {
    let mut out: Vec<(Determinant, Complex)> = psi
        .iter()
        .filter_map(|(d, c)| {
            let mut sign = 1.0;
            let mut cur = d;
            for &i in p.iter().rev() {
                let (s, nd) = cur.annihilate(i)?;
                sign *= s;
                cur = nd;
            }
            Some((cur, c * sign))
        })
        .collect();
    // Distinct source determinants give distinct images, so no merging.
    out.sort_by_key(|e| e.0);
    out
}

fn overlap(a: &[(Determinant, Complex)], b: &[(Determinant, Complex)]) -> Complex {
    let (mut i, mut j) = (0, 0);
    let mut acc = Complex::default();
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += a[i].1.conj() * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// k-particle reduced density matrix `D^U_P = ⟨A_U Ψ | A_P Ψ⟩`.
///
/// For `k > N` the result is an explicit zero tensor with
/// [`Rdm::vanishes`] set.
pub fn compute_rdm(psi: &Wavefunction, k: usize) -> Result<Rdm> {
    let n = psi.n_spin_orbitals;
    let mut out = Rdm::zeros(k, n)?;
    out.n_electrons = Some(psi.n_electrons);
    if k > psi.n_electrons {
        out.vanishes = true;
        return Ok(out);
    }
    let combos = combinations(n, k);
    let images: Vec<Vec<(Determinant, Complex)>> =
        combos.iter().map(|p| annihilated(psi, p)).collect();
    let dim = combos.len();
    let row = |r: usize| -> Vec<Complex> {
        let a = &images[r];
        (0..dim)
            .map(|c| {
                if a.is_empty() {
                    Complex::default()
                } else {
                    overlap(a, &images[c])
                }
            })
            .collect()
    };
    let rows: Vec<Vec<Complex>> = crate::if_rayon!(
        (0..dim).into_par_iter().map(row).collect(),
        (0..dim).map(row).collect()
    );
    for (r, vals) in rows.into_iter().enumerate() {
        for (c, v) in vals.into_iter().enumerate() {
            *out.at_mut(r, c) = v;
        }
    }
    Ok(out)
}
