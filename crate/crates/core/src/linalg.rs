//! Dense symmetric / Hermitian eigendecomposition.
//!
//! Backed by faer: nalgebra's tridiagonalisation returns NaN on some very
//! sparse metrics (a 665×665 subspace overlap with 99% exact zeros). The
//! nalgebra routine is kept only as a fallback if faer fails to converge.

use nalgebra::{DMatrix, DVector};

use crate::Complex;

/// Eigenvalues ascending, eigenvectors as matching columns.
#[derive(Debug, Clone)]
pub struct Eigh<T: nalgebra::Scalar> {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<T>,
}

pub fn eigh_real(m: &DMatrix<f64>) -> Eigh<f64> {
    let n = m.nrows();
    let a = faer::Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    match a.self_adjoint_eigen(faer::Side::Lower) {
        Ok(e) => Eigh {
            eigenvalues: DVector::from_fn(n, |k, _| e.S()[k]),
            eigenvectors: DMatrix::from_fn(n, n, |i, k| e.U()[(i, k)]),
        },
        Err(_) => sorted(nalgebra::SymmetricEigen::new(m.clone())),
    }
}

pub fn eigh_hermitian(m: &DMatrix<Complex>) -> Eigh<Complex> {
    let n = m.nrows();
    let a = faer::Mat::<faer::c64>::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
    match a.self_adjoint_eigen(faer::Side::Lower) {
        Ok(e) => Eigh {
            eigenvalues: DVector::from_fn(n, |k, _| e.S()[k].re),
            eigenvectors: DMatrix::from_fn(n, n, |i, k| e.U()[(i, k)]),
        },
        Err(_) => sorted(nalgebra::SymmetricEigen::new(m.clone())),
    }
}

fn sorted<T: nalgebra::ComplexField<RealField = f64>>(
    e: nalgebra::SymmetricEigen<T, nalgebra::Dyn>,
) -> Eigh<T> {
    let n = e.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        e.eigenvalues[a]
            .total_cmp(&e.eigenvalues[b])
            .then(a.cmp(&b))
    });
    Eigh {
        eigenvalues: DVector::from_fn(n, |k, _| e.eigenvalues[order[k]]),
        eigenvectors: DMatrix::from_fn(n, n, |i, k| e.eigenvectors[(i, order[k])].clone()),
    }
}
