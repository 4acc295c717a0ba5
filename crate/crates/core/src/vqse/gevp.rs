use nalgebra::DMatrix;

use crate::linalg::eigh_hermitian;
use crate::{Complex, Error, Result};

use super::SubspacePair;

/// Relative metric threshold for exact density matrices.
pub const DEFAULT_EPSILON: f64 = 1e-8;
/// Suggested relative threshold under shot noise.
pub const NOISY_EPSILON: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Orthogonalizer {
    /// `V_r Λ_r^{-1/2}`, one column per retained metric eigenvector.
    pub x: DMatrix<Complex>,
    /// Metric eigenvalues kept, ascending.
    pub retained: Vec<f64>,
    /// Metric eigenvalues discarded, ascending.
    pub discarded: Vec<f64>,
}

/// Hermitian eigendecomposition with eigenvalues ascending and each
/// eigenvector's largest component real positive.
fn eigh(m: &DMatrix<Complex>) -> (Vec<f64>, DMatrix<Complex>) {
    let mut e = eigh_hermitian(m);
    for mut col in e.eigenvectors.column_iter_mut() {
        fix_phase(col.as_mut_slice());
    }
    (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
}

fn fix_phase(v: &mut [Complex]) {
    let mut best = 0;
    for (k, x) in v.iter().enumerate() {
        if x.norm() > v[best].norm() + 1e-12 {
            best = k;
        }
    }
    if v.is_empty() || v[best].norm() == 0.0 {
        return;
    }
    let phase = v[best].conj() / v[best].norm();
    for x in v.iter_mut() {
        *x *= phase;
    }
}

/// Keeps metric eigenpairs with `λ > ε·λ_max`.
pub fn canonical_orthogonalize(s: &DMatrix<Complex>, epsilon: f64) -> Result<Orthogonalizer> {
    if s.nrows() != s.ncols() || s.nrows() == 0 {
        return Err(Error::Shape(format!(
            "metric is {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    let (lambda, v) = eigh(s);
    let largest = *lambda.last().unwrap();
    let threshold = epsilon * largest;
    if !(largest > 0.0) {
        return Err(Error::DegenerateMetric { threshold, largest });
    }
    let keep: Vec<usize> = (0..lambda.len())
        .filter(|&k| lambda[k] > threshold)
        .collect();
    if keep.is_empty() {
        return Err(Error::DegenerateMetric { threshold, largest });
    }
    let mut x = DMatrix::<Complex>::zeros(s.nrows(), keep.len());
    for (c, &k) in keep.iter().enumerate() {
        x.set_column(
            c,
            &(v.column(k) * Complex::new(lambda[k].sqrt().recip(), 0.0)),
        );
    }
    Ok(Orthogonalizer {
        x,
        retained: keep.iter().map(|&k| lambda[k]).collect(),
        discarded: (0..lambda.len())
            .filter(|k| !keep.contains(k))
            .map(|k| lambda[k])
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GevpSolution {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns in the pool basis, `C† S C = I`.
    pub eigenvectors: DMatrix<Complex>,
    pub retained: usize,
    pub discarded: Vec<f64>,
}

impl GevpSolution {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }
}

pub fn solve_gevp(pair: &SubspacePair, epsilon: f64) -> Result<GevpSolution> {
    solve_gevp_matrices(&pair.h, &pair.s, epsilon)
}

/// `HC = SCE` through `X† H X`.
pub fn solve_gevp_matrices(
    h: &DMatrix<Complex>,
    s: &DMatrix<Complex>,
    epsilon: f64,
) -> Result<GevpSolution> {
    if h.shape() != s.shape() {
        return Err(Error::Shape(format!(
            "H is {:?}, S is {:?}",
            h.shape(),
            s.shape()
        )));
    }
    let orth = canonical_orthogonalize(s, epsilon)?;
    let xh = orth.x.adjoint();
    let reduced = &xh * h * &orth.x;
    let reduced = (&reduced + reduced.adjoint()) * Complex::new(0.5, 0.0);
    let (e, c) = eigh(&reduced);
    Ok(GevpSolution {
        eigenvalues: e,
        eigenvectors: &orth.x * c,
        retained: orth.retained.len(),
        discarded: orth.discarded,
    })
}
