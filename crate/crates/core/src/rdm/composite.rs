use crate::partition::OrbitalPartition;
use crate::{Complex, Error, Result};

use super::tensor::{combinations, Rdm};
use super::wedge::wedge;

/// Copies `rdm` into a larger index space, relabelling index `i` as
/// `map[i]`.
pub fn embed_rdm(rdm: &Rdm, map: &[usize], n: usize) -> Result<Rdm> {
    if map.len() != rdm.n || map.iter().any(|&i| i >= n) {
        return Err(Error::Shape(format!(
            "map of length {} into {n} for a tensor over {}",
            map.len(),
            rdm.n
        )));
    }
    let mut out = Rdm::zeros(rdm.k, n)?;
    out.n_electrons = rdm.n_electrons;
    out.vanishes = rdm.vanishes;
    let combos = combinations(rdm.n, rdm.k);
    for (r, u) in combos.iter().enumerate() {
        let gu: Vec<usize> = u.iter().map(|&i| map[i]).collect();
        for (c, p) in combos.iter().enumerate() {
            let v = rdm.at(r, c);
            if v != Complex::default() {
                let gp: Vec<usize> = p.iter().map(|&i| map[i]).collect();
                out.add(&gu, &gp, v);
            }
        }
    }
    Ok(out)
}

/// Full-space 1- and 2-RDM of `Φ_core ⊗ Ψ_A ⊗ vac` from the active-space
/// density matrices (indexed by local active spin orbitals).
///
/// With `γ_C` the core projector and `d2 = D2 / 2`,
/// `d2_full = γ_C∧γ_C + 2 γ_C∧γ_A + d2_A`.
pub fn composite_full_rdms(
    rdm1: &Rdm,
    rdm2: &Rdm,
    partition: &OrbitalPartition,
) -> Result<(Rdm, Rdm)> {
    partition.validate()?;
    let n_act = partition.n_active_spin();
    if rdm1.k != 1 || rdm2.k != 2 || rdm1.n != n_act || rdm2.n != n_act {
        return Err(Error::Shape(format!(
            "need active 1- and 2-RDM over {n_act} spin orbitals, got ranks {} and {} over {} and {}",
            rdm1.k, rdm2.k, rdm1.n, rdm2.n
        )));
    }
    let n = 2 * partition.n_spatial();
    let map: Vec<usize> = (0..n_act).map(|l| partition.active_global(l)).collect();
    let g_act = embed_rdm(rdm1, &map, n)?;
    let d2_act = embed_rdm(rdm2, &map, n)?.scale(0.5);

    let core = partition.core_spin_orbitals();
    let mut g_core = Rdm::zeros(1, n)?;
    for &c in &core {
        g_core.add(&[c], &[c], Complex::new(1.0, 0.0));
    }

    let full_1 = g_core.add_scaled(&g_act, 1.0)?;
    let cc = wedge(&g_core, &g_core)?;
    let ca = wedge(&g_core, &g_act)?;
    let mut full_2 = cc
        .add_scaled(&ca, 2.0)?
        .add_scaled(&d2_act, 1.0)?
        .scale(2.0);

    let n_el = rdm1.n_electrons.map(|x| x + core.len());
    let mut full_1 = full_1;
    full_1.n_electrons = n_el;
    full_1.vanishes = n_el == Some(0);
    full_2.n_electrons = n_el;
    full_2.vanishes = n_el.is_some_and(|x| x < 2);
    Ok((full_1, full_2))
}
