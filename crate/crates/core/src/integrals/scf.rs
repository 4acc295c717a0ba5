//! Closed-shell restricted Hartree–Fock.

use nalgebra::{DMatrix, DVector};

use super::AoIntegrals;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct ScfOptions {
    pub max_iter: usize,
    /// Convergence threshold on `max |FPS − SPF|`.
    pub threshold: f64,
    /// Density damping factor applied during the first `damped_iterations`.
    pub damping: f64,
    pub damped_iterations: usize,
}

impl Default for ScfOptions {
    fn default() -> Self {
        ScfOptions {
            max_iter: 200,
            threshold: 1e-9,
            damping: 0.5,
            damped_iterations: 5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScfResult {
    /// AO→MO coefficients, one MO per column.
    pub mo_coefficients: DMatrix<f64>,
    pub orbital_energies: DVector<f64>,
    pub scf_energy: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Final `max |FPS − SPF|`.
    pub gradient_norm: f64,
}

fn fock(ao: &AoIntegrals, h: &DMatrix<f64>, density: &DMatrix<f64>) -> DMatrix<f64> {
    let n = ao.n_basis();
    let mut f = h.clone();
    for m in 0..n {
        for v in 0..=m {
            let mut g = 0.0;
            for l in 0..n {
                for s in 0..n {
                    let p = density[(l, s)];
                    if p != 0.0 {
                        g += p * (ao.eri.get(m, v, l, s) - 0.5 * ao.eri.get(m, s, l, v));
                    }
                }
            }
            f[(m, v)] += g;
            if m != v {
                f[(v, m)] += g;
            }
        }
    }
    f
}

/// Symmetric orthogonalizer `S^{-1/2}`.
fn orthogonalizer(s: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = crate::linalg::eigh_real(s);
    let min = eig.eigenvalues.min();
    if min < 1e-10 {
        return Err(Error::Domain(format!(
            "AO overlap is numerically singular (smallest eigenvalue {min:e})"
        )));
    }
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| 1.0 / x.sqrt()));
    Ok(&eig.eigenvectors * d * eig.eigenvectors.transpose())
}

/// Diagonalizes `F` in the orthogonalized basis and returns MO energies and
/// coefficients ordered by energy.
///
/// Degenerate blocks (energies within 1e-8) are rebuilt deterministically:
/// AO unit vectors, in ascending AO index, are projected onto the block and
/// Gram–Schmidt orthonormalized in the overlap metric. Each MO's dominant
/// coefficient (the first within 1e-8 of the largest) is made positive.
fn solve_roothaan(
    f: &DMatrix<f64>,
    x: &DMatrix<f64>,
    s: &DMatrix<f64>,
) -> (DVector<f64>, DMatrix<f64>) {
    let fp = x.transpose() * f * x;
    let eig = crate::linalg::eigh_real(&fp);
    let c = x * &eig.eigenvectors;
    let n = c.ncols();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let mut coeffs = DMatrix::zeros(c.nrows(), n);
    let mut energies = DVector::zeros(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eig.eigenvalues[order[end]] - eig.eigenvalues[order[end - 1]] < 1e-8 {
            end += 1;
        }
        let block: Vec<DVector<f64>> = order[start..end]
            .iter()
            .map(|&k| c.column(k).clone_owned())
            .collect();
        let cols = if block.len() == 1 {
            block
        } else {
            canonical_block(&block, s)
        };
        for (k, mut col) in cols.into_iter().enumerate() {
            // first component within 1e-8 of the largest, so symmetry ties
            // do not depend on round-off
            let big = col.amax();
            let dom = col.iter().position(|x| x.abs() >= big - 1e-8).unwrap_or(0);
            if col[dom] < 0.0 {
                col = -col;
            }
            coeffs.set_column(start + k, &col);
            energies[start + k] = eig.eigenvalues[order[start + k]];
        }
        start = end;
    }
    (energies, coeffs)
}

fn canonical_block(block: &[DVector<f64>], s: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let d = block.len();
    let nao = s.nrows();
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(d);
    for k in 0..nao {
        if out.len() == d {
            break;
        }
        // projection of AO k onto the block: Σ_b v_b (v_bᵀ S e_k)
        let se = s.column(k);
        let mut v = DVector::zeros(nao);
        for b in block {
            v += b * b.dot(&se);
        }
        for o in &out {
            let ov = o.dot(&(s * &v));
            v -= o * ov;
        }
        let norm = v.dot(&(s * &v)).sqrt();
        if norm > 1e-6 {
            out.push(v / norm);
        }
    }
    out
}

fn density(c: &DMatrix<f64>, n_occ: usize) -> DMatrix<f64> {
    let occ = c.columns(0, n_occ);
    2.0 * &occ * occ.transpose()
}

pub fn run_rhf(ao: &AoIntegrals, n_electrons: usize, options: &ScfOptions) -> Result<ScfResult> {
    let n = ao.n_basis();
    if n_electrons % 2 != 0 || n_electrons > 2 * n {
        return Err(Error::Domain(format!(
            "closed-shell RHF needs an even electron count ≤ {}, got {n_electrons}",
            2 * n
        )));
    }
    let n_occ = n_electrons / 2;
    let h = ao.core_hamiltonian();
    let s = &ao.overlap;
    let x = orthogonalizer(s)?;

    let (_, mut coeffs) = solve_roothaan(&h, &x, s);
    let mut p = density(&coeffs, n_occ);
    let mut energy = f64::NAN;
    for iter in 1..=options.max_iter {
        let f = fock(ao, &h, &p);
        energy = 0.5 * p.component_mul(&(&h + &f)).sum() + ao.e_nuc;
        let comm = &f * &p * s - s * &p * &f;
        let err = comm.amax();
        let (energies, c_new) = solve_roothaan(&f, &x, s);
        coeffs = c_new;
        if err < options.threshold {
            return Ok(ScfResult {
                mo_coefficients: coeffs,
                orbital_energies: energies,
                scf_energy: energy,
                converged: true,
                iterations: iter,
                gradient_norm: err,
            });
        }
        let p_new = density(&coeffs, n_occ);
        p = if iter <= options.damped_iterations {
            options.damping * &p + (1.0 - options.damping) * p_new
        } else {
            p_new
        };
    }
    Err(Error::ScfNotConverged {
        iterations: options.max_iter,
        last_energy: energy,
    })
}
