use crate::{Error, Result};

use super::tensor::Rdm;
use super::wedge::{wedge, wedge_power};

fn factorial(k: usize) -> f64 {
    (1..=k).product::<usize>() as f64
}

/// Cumulants `Δ_1 … Δ_m` of a hierarchy of density matrices.
///
/// Internally the density matrices are normalised as `d_k = D_k / k!`, the
/// convention in which a determinant satisfies `d_k = d_1^{∧k}` under the
/// `(1/k!)²` wedge. With that normalisation
///
/// ```text
/// d2 = Δ1² + Δ2
/// d3 = Δ1³ + 3 Δ2∧Δ1 + Δ3
/// d4 = Δ1⁴ + 6 Δ2∧Δ1² + 3 Δ2∧Δ2 + 4 Δ3∧Δ1 + Δ4
/// ```
#[derive(Debug, Clone)]
pub struct CumulantSet {
    /// `deltas[l - 1]` is `Δ_l`.
    pub deltas: Vec<Rdm>,
}

impl CumulantSet {
    /// Cumulants from exact `D_1 … D_m` (`m ≤ 4`), passed in rank order.
    pub fn from_rdms(rdms: &[&Rdm]) -> Result<Self> {
        if rdms.is_empty() || rdms.len() > 4 {
            return Err(Error::Domain(format!(
                "cumulants need 1 to 4 density matrices, got {}",
                rdms.len()
            )));
        }
        for (i, r) in rdms.iter().enumerate() {
            if r.k != i + 1 || r.n != rdms[0].n {
                return Err(Error::Shape(format!(
                    "expected rank {} over {} spin orbitals, got rank {} over {}",
                    i + 1,
                    rdms[0].n,
                    r.k,
                    r.n
                )));
            }
        }
        let d = |k: usize| rdms[k - 1].scale(1.0 / factorial(k));
        let mut deltas = vec![d(1)];
        if rdms.len() >= 2 {
            let d1 = &deltas[0];
            let delta2 = d(2).add_scaled(&wedge(d1, d1)?, -1.0)?;
            deltas.push(delta2);
        }
        if rdms.len() >= 3 {
            let rest = partial_reconstruction(&deltas, 3, 2)?;
            deltas.push(d(3).add_scaled(&rest, -1.0)?);
        }
        if rdms.len() >= 4 {
            let rest = partial_reconstruction(&deltas, 4, 3)?;
            deltas.push(d(4).add_scaled(&rest, -1.0)?);
        }
        Ok(CumulantSet { deltas })
    }

    /// `D_k` rebuilt from the cumulants with `Δ_l = 0` for `l > truncation`.
    /// Ranks beyond those stored are treated as zero as well.
    pub fn reconstruct(&self, k: usize, truncation: usize) -> Result<Rdm> {
        if !(1..=4).contains(&k) {
            return Err(Error::Domain(format!(
                "reconstruction of rank {k} not supported"
            )));
        }
        let keep = truncation.min(self.deltas.len());
        let mut out = partial_reconstruction(&self.deltas[..keep], k, keep)?;
        out = out.scale(factorial(k));
        out.n_electrons = self.deltas[0].n_electrons;
        out.vanishes = false;
        Ok(out)
    }
}

/// Normalised `d_k` from `Δ_1 … Δ_max` (terms with higher cumulants are
/// dropped).
fn partial_reconstruction(deltas: &[Rdm], k: usize, max: usize) -> Result<Rdm> {
    let max = max.min(deltas.len());
    let dl = |l: usize| &deltas[l - 1];
    let mut acc = wedge_power(dl(1), k)?;
    let mut add = |t: Rdm, c: f64| -> Result<()> {
        acc = acc.add_scaled(&t, c)?;
        Ok(())
    };
    match k {
        1 => {}
        2 => {
            if max >= 2 {
                add(dl(2).clone(), 1.0)?;
            }
        }
        3 => {
            if max >= 2 {
                add(wedge(dl(2), dl(1))?, 3.0)?;
            }
            if max >= 3 {
                add(dl(3).clone(), 1.0)?;
            }
        }
        4 => {
            if max >= 2 {
                add(wedge(&wedge(dl(2), dl(1))?, dl(1))?, 6.0)?;
                add(wedge(dl(2), dl(2))?, 3.0)?;
            }
            if max >= 3 {
                add(wedge(dl(3), dl(1))?, 4.0)?;
            }
            if max >= 4 {
                add(dl(4).clone(), 1.0)?;
            }
        }
        _ => unreachable!(),
    }
    Ok(acc)
}

/// 4-RDM from the 1- and 2-RDM with `Δ_3 = Δ_4 = 0`.
pub fn cumulant_4rdm(rdm1: &Rdm, rdm2: &Rdm) -> Result<Rdm> {
    CumulantSet::from_rdms(&[rdm1, rdm2])?.reconstruct(4, 2)
}

/// 3-RDM from the 1- and 2-RDM with `Δ_3 = 0`.
pub fn cumulant_3rdm(rdm1: &Rdm, rdm2: &Rdm) -> Result<Rdm> {
    CumulantSet::from_rdms(&[rdm1, rdm2])?.reconstruct(3, 2)
}
