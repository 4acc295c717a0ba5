use nalgebra::{DMatrix, DVector};

use crate::{Complex, Error, Result};

use super::determinant::enumerate_sector;
use super::hamiltonian::HamiltonianAction;
use super::wavefunction::Wavefunction;

/// Eigenvalues closer than this are treated as degenerate.
const DEGENERACY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct GroundStateOptions {
    /// Largest sector handled by dense diagonalisation.
    pub dense_limit: usize,
    /// Davidson residual-norm convergence threshold.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for GroundStateOptions {
    fn default() -> Self {
        GroundStateOptions {
            dense_limit: 2000,
            tolerance: 1e-10,
            max_iterations: 500,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub wavefunction: Wavefunction,
    /// `E_1 − E_0` within the sector (`None` for a one-dimensional sector).
    pub gap: Option<f64>,
    pub residual_norm: f64,
    pub dimension: usize,
}

impl GroundState {
    pub fn is_degenerate(&self) -> bool {
        self.gap.is_some_and(|g| g < DEGENERACY_TOL)
    }
}

pub fn ground_state(
    h: &HamiltonianAction,
    n_electrons: usize,
    ms2: Option<i32>,
) -> Result<GroundState> {
    ground_state_with(h, n_electrons, ms2, &GroundStateOptions::default())
}

pub fn ground_state_with(
    h: &HamiltonianAction,
    n_electrons: usize,
    ms2: Option<i32>,
    opts: &GroundStateOptions,
) -> Result<GroundState> {
    let n = h.n_spin_orbitals();
    let dets = enumerate_sector(n, n_electrons, ms2)?;
    if dets.is_empty() {
        return Err(Error::Domain(format!(
            "empty sector: {n_electrons} electrons, 2Sz = {ms2:?}, {n} spin orbitals"
        )));
    }
    let columns = h.sector_columns(&dets);
    let matvec = |x: &DVector<f64>| -> DVector<f64> {
        let mut y = DVector::zeros(x.len());
        for (j, col) in columns.iter().enumerate() {
            let xj = x[j];
            if xj != 0.0 {
                for &(i, v) in col {
                    y[i] += v * xj;
                }
            }
        }
        y
    };

    let (energy, mut vec, gap) = if dets.len() <= opts.dense_limit {
        let mut m = DMatrix::zeros(dets.len(), dets.len());
        for (j, col) in columns.iter().enumerate() {
            for &(i, v) in col {
                m[(i, j)] = v;
            }
        }
        dense_lowest(m)
    } else {
        let diag: Vec<f64> = columns
            .iter()
            .enumerate()
            .map(|(j, col)| col.iter().find(|e| e.0 == j).map_or(0.0, |e| e.1))
            .collect();
        davidson(&matvec, &diag, opts)?
    };

    fix_phase(&mut vec);
    let r = matvec(&vec) - &vec * energy;
    let wavefunction = Wavefunction::from_amplitudes(
        n,
        n_electrons,
        dets.iter()
            .zip(vec.iter())
            .filter(|(_, c)| **c != 0.0)
            .map(|(d, c)| (*d, Complex::new(*c, 0.0))),
    )?;
    Ok(GroundState {
        energy,
        wavefunction,
        gap,
        residual_norm: r.norm(),
        dimension: dets.len(),
    })
}

fn dense_lowest(m: DMatrix<f64>) -> (f64, DVector<f64>, Option<f64>) {
    let dim = m.nrows();
    let eig = crate::linalg::eigh_real(&m);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .total_cmp(&eig.eigenvalues[b])
            .then(a.cmp(&b))
    });
    let e0 = eig.eigenvalues[order[0]];
    let gap = (dim > 1).then(|| eig.eigenvalues[order[1]] - e0);

    // Degenerate ground level: project the lowest-index determinant with a
    // nonzero component onto the eigenspace, so the choice does not depend
    // on the eigensolver's internal basis.
    let block: Vec<usize> = order
        .iter()
        .copied()
        .take_while(|&k| eig.eigenvalues[k] - e0 < DEGENERACY_TOL)
        .collect();
    if block.len() == 1 {
        return (e0, eig.eigenvectors.column(order[0]).into_owned(), gap);
    }
    for row in 0..dim {
        let mut v = DVector::zeros(dim);
        for &k in &block {
            let col = eig.eigenvectors.column(k);
            v += col * col[row];
        }
        let norm = v.norm();
        if norm > 1e-6 {
            return (e0, v / norm, gap);
        }
    }
    (e0, eig.eigenvectors.column(order[0]).into_owned(), gap)
}

/// Largest-modulus component made positive (first one on ties).
fn fix_phase(v: &mut DVector<f64>) {
    let max = v.amax();
    if let Some(k) = v.iter().position(|x| x.abs() >= max * (1.0 - 1e-10)) {
        if v[k] < 0.0 {
            v.neg_mut();
        }
    }
}

/// Two-root Davidson iteration with a diagonal preconditioner.
fn davidson(
    matvec: &dyn Fn(&DVector<f64>) -> DVector<f64>,
    diag: &[f64],
    opts: &GroundStateOptions,
) -> Result<(f64, DVector<f64>, Option<f64>)> {
    let dim = diag.len();
    let n_roots = 2.min(dim);
    let max_space = 40.max(4 * n_roots).min(dim);

    // Start from the determinants with the lowest diagonal entries.
    let mut idx: Vec<usize> = (0..dim).collect();
    idx.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]).then(a.cmp(&b)));
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut images: Vec<DVector<f64>> = Vec::new();
    for &k in idx.iter().take(n_roots) {
        let mut v = DVector::zeros(dim);
        v[k] = 1.0;
        images.push(matvec(&v));
        basis.push(v);
    }

    for _ in 0..opts.max_iterations {
        let m = basis.len();
        let mut small = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let x = basis[i].dot(&images[j]);
                small[(i, j)] = x;
                small[(j, i)] = x;
            }
        }
        let eig = crate::linalg::eigh_real(&small);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

        let ritz = |r: usize| -> (f64, DVector<f64>, DVector<f64>) {
            let y = eig.eigenvectors.column(order[r]);
            let mut x = DVector::zeros(dim);
            let mut hx = DVector::zeros(dim);
            for k in 0..m {
                x += &basis[k] * y[k];
                hx += &images[k] * y[k];
            }
            (eig.eigenvalues[order[r]], x, hx)
        };

        let (e0, x0, hx0) = ritz(0);
        let res0 = &hx0 - &x0 * e0;
        if res0.norm() < opts.tolerance {
            let gap = (n_roots > 1).then(|| eig.eigenvalues[order[1]] - e0);
            let nrm = x0.norm();
            return Ok((e0, x0 / nrm, gap));
        }

        let mut new_dirs = Vec::new();
        for r in 0..n_roots.min(m) {
            let (e, x, hx) = ritz(r);
            let res = &hx - &x * e;
            if r > 0 && res.norm() < opts.tolerance {
                continue;
            }
            let mut t = res;
            for (k, t) in t.iter_mut().enumerate() {
                let d = diag[k] - e;
                *t /= if d.abs() < 1e-8 {
                    1e-8f64.copysign(d)
                } else {
                    d
                };
            }
            new_dirs.push(t);
        }

        if basis.len() + new_dirs.len() > max_space {
            // Collapse onto the current Ritz vectors.
            let mut nb = Vec::new();
            let mut ni = Vec::new();
            for r in 0..n_roots.min(m) {
                let (_, x, hx) = ritz(r);
                nb.push(x);
                ni.push(hx);
            }
            basis = nb;
            images = ni;
            orthonormalize_images(&mut basis, &mut images);
        }

        for mut t in new_dirs {
            let n0 = t.norm();
            if n0 == 0.0 || !n0.is_finite() {
                continue;
            }
            t /= n0;
            for _ in 0..2 {
                for b in &basis {
                    let p = b.dot(&t);
                    t -= b * p;
                }
            }
            let nt = t.norm();
            if nt > 1e-6 {
                t /= nt;
                images.push(matvec(&t));
                basis.push(t);
            }
        }
        if basis.len() == m {
            return Err(Error::Domain("Davidson subspace stopped growing".into()));
        }
    }
    Err(Error::Domain(format!(
        "Davidson did not converge in {} iterations",
        opts.max_iterations
    )))
}

/// Gram–Schmidt on `basis`, applying the same combinations to `images`.
fn orthonormalize_images(basis: &mut [DVector<f64>], images: &mut [DVector<f64>]) {
    for i in 0..basis.len() {
        for j in 0..i {
            let p = basis[j].dot(&basis[i]);
            let (bj, ij) = (basis[j].clone(), images[j].clone());
            basis[i] -= bj * p;
            images[i] -= ij * p;
        }
        let n = basis[i].norm();
        basis[i] /= n;
        images[i] /= n;
    }
}
