use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::integrals::{transform_integrals, Eri, MolecularIntegrals};
use crate::rdm::Rdm;
use crate::{Error, Result};

/// Rotation of spatial orbitals `i` and `b` by `theta` (radians).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GivensAngle {
    pub i: usize,
    pub b: usize,
    pub theta: f64,
}

/// Real orbital rotation, either as an antisymmetric generator `t` with
/// `U = exp(t)` or as an ordered product of Givens rotations
/// `U = G_1 G_2 … G_k`. The same rotation acts on both spin channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RotationParameters {
    Generator(Vec<Vec<f64>>),
    Givens(Vec<GivensAngle>),
}

/// `G` with `G_ii = G_bb = cos θ`, `G_ib = sin θ`, `G_bi = −sin θ`.
pub fn givens_matrix(n: usize, i: usize, b: usize, theta: f64) -> DMatrix<f64> {
    let mut g = DMatrix::identity(n, n);
    let (s, c) = theta.sin_cos();
    g[(i, i)] = c;
    g[(b, b)] = c;
    g[(i, b)] = s;
    g[(b, i)] = -s;
    g
}

/// Maps an angle to `(−π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut t = theta.rem_euclid(two_pi);
    if t > std::f64::consts::PI {
        t -= two_pi;
    }
    t
}

impl RotationParameters {
    pub fn identity() -> Self {
        RotationParameters::Givens(Vec::new())
    }

    pub fn to_unitary(&self, n: usize) -> Result<DMatrix<f64>> {
        match self {
            RotationParameters::Generator(t) => {
                if t.len() != n || t.iter().any(|row| row.len() != n) {
                    return Err(Error::Shape(format!("generator is not {n}x{n}")));
                }
                let m = DMatrix::from_fn(n, n, |p, q| t[p][q]);
                let err = (&m + m.transpose()).amax();
                if err > 1e-12 {
                    return Err(Error::Domain(format!(
                        "generator not antisymmetric ({err:.1e})"
                    )));
                }
                Ok(m.exp())
            }
            RotationParameters::Givens(list) => {
                let mut u = DMatrix::identity(n, n);
                for g in list {
                    if g.i >= n || g.b >= n || g.i == g.b {
                        return Err(Error::Domain(format!("bad Givens pair ({}, {})", g.i, g.b)));
                    }
                    u *= givens_matrix(n, g.i, g.b, g.theta);
                }
                Ok(u)
            }
        }
    }
}

pub fn check_unitary(u: &DMatrix<f64>) -> Result<()> {
    if !u.is_square() {
        return Err(Error::Shape(format!(
            "rotation is {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    let err = (u.transpose() * u - DMatrix::identity(u.nrows(), u.ncols())).norm();
    if err > 1e-8 {
        return Err(Error::NotUnitary(err));
    }
    Ok(())
}

/// Spin-summed `γ_pq = Σσ ⟨a†_pσ a_qσ⟩` and
/// `Γ_pqrs = Σστ ⟨a†_pσ a†_rτ a_sτ a_qσ⟩` (real parts).
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialRdms {
    pub gamma: DMatrix<f64>,
    pub big_gamma: Eri,
}

impl SpatialRdms {
    pub fn from_spin(rdm1: &Rdm, rdm2: &Rdm) -> Result<Self> {
        if rdm1.k != 1 || rdm2.k != 2 || rdm1.n != rdm2.n || rdm1.n % 2 != 0 {
            return Err(Error::Shape(
                "need a 1- and 2-RDM over the same spin orbitals".into(),
            ));
        }
        let n = rdm1.n / 2;
        let gamma = DMatrix::from_fn(n, n, |p, q| {
            (0..2)
                .map(|s| rdm1.get(&[2 * p + s], &[2 * q + s]).re)
                .sum()
        });
        let mut big_gamma = Eri::zeros(n);
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let mut v = 0.0;
                        for a in 0..2 {
                            for b in 0..2 {
                                // ⟨a†_i a†_j a_k a_l⟩ = D2^{j,i}_{k,l}
                                v += rdm2
                                    .get(&[2 * r + b, 2 * p + a], &[2 * s + b, 2 * q + a])
                                    .re;
                            }
                        }
                        big_gamma.set(p, q, r, s, v);
                    }
                }
            }
        }
        Ok(SpatialRdms { gamma, big_gamma })
    }

    pub fn n_spatial(&self) -> usize {
        self.gamma.nrows()
    }

    /// Densities of the state rotated by `U` (orbital `p` → `Σ_q U_qp φ_q`),
    /// expressed in the original orbitals.
    pub fn rotated(&self, u: &DMatrix<f64>) -> Result<SpatialRdms> {
        let (gamma, big_gamma) = transform_integrals(&self.gamma, &self.big_gamma, &u.transpose())?;
        Ok(SpatialRdms { gamma, big_gamma })
    }

    pub fn energy(&self, ints: &MolecularIntegrals) -> Result<f64> {
        if ints.n_spatial != self.n_spatial() {
            return Err(Error::Shape(format!(
                "integrals over {} orbitals, densities over {}",
                ints.n_spatial,
                self.n_spatial()
            )));
        }
        Ok(ints.energy_from_spatial_rdms(&self.gamma, &self.big_gamma))
    }
}

/// Energy of the fixed densities in the orbitals rotated by `U`, computed
/// by transforming the integrals.
pub fn energy_of_unitary(
    u: &DMatrix<f64>,
    ints: &MolecularIntegrals,
    rdms: &SpatialRdms,
) -> Result<f64> {
    check_unitary(u)?;
    rdms.energy(&ints.rotated(u)?)
}

/// Same energy with the densities rotated instead of the integrals.
pub fn energy_of_unitary_rdm_path(
    u: &DMatrix<f64>,
    ints: &MolecularIntegrals,
    rdms: &SpatialRdms,
) -> Result<f64> {
    check_unitary(u)?;
    rdms.rotated(u)?.energy(ints)
}

/// `E(U)` for full-space spin-orbital 1- and 2-RDMs (see
/// `rdm::composite_full_rdms`).
pub fn energy_of_rotation(
    rotation: &RotationParameters,
    ints: &MolecularIntegrals,
    rdm1: &Rdm,
    rdm2: &Rdm,
) -> Result<f64> {
    let u = rotation.to_unitary(ints.n_spatial)?;
    energy_of_unitary(&u, ints, &SpatialRdms::from_spin(rdm1, rdm2)?)
}
