mod common;

use common::*;
use rand::Rng;
use vqse_core::fci::*;
use vqse_core::integrals::{dress_core, MolecularIntegrals};
use vqse_core::OrbitalPartition;

/// The Hamiltonian spelled out term by term as ladder strings.
fn explicit_operator(ints: &MolecularIntegrals) -> SecondQuantizedOperator {
    let n = ints.n_spin_orbitals();
    let mut op = SecondQuantizedOperator::single(ints.scalar_energy(), vec![]);
    for i in 0..n {
        for j in 0..n {
            let h = ints.h1_so(i, j);
            if h != 0.0 {
                op.push(h, vec![Ladder::create(i), Ladder::annihilate(j)]);
            }
            for k in 0..n {
                for l in 0..n {
                    let g = ints.h2_so(i, j, k, l);
                    if g != 0.0 {
                        op.push(
                            0.5 * g,
                            vec![
                                Ladder::create(i),
                                Ladder::create(j),
                                Ladder::annihilate(k),
                                Ladder::annihilate(l),
                            ],
                        );
                    }
                }
            }
        }
    }
    op
}

fn basis_state(n: usize, d: Determinant) -> Wavefunction {
    Wavefunction::from_determinant(n, d).unwrap()
}

#[test]
fn action_matches_explicit_strings() {
    let ints = random_integrals(3, 11);
    let h = build_hamiltonian_action(&ints).unwrap();
    let op = explicit_operator(&ints);
    for ne in 0..=6 {
        let dets = enumerate_sector(6, ne, None).unwrap();
        let dense = h.sector_matrix(&dets);
        for (i, &di) in dets.iter().enumerate() {
            for (j, &dj) in dets.iter().enumerate() {
                let e =
                    full_space_expectation(&basis_state(6, di), &op, &basis_state(6, dj)).unwrap();
                assert!((e.re - dense[(i, j)]).abs() < 1e-12, "N={ne} ({i},{j})");
                assert!(e.im.abs() < 1e-15);
            }
        }
    }
}

#[test]
fn dense_matrix_is_hermitian() {
    for (n, seed) in [(2usize, 1u64), (3, 2), (4, 3)] {
        let ints = random_integrals(n, seed);
        let h = build_hamiltonian_action(&ints).unwrap();
        for ne in 0..=2 * n {
            let m = h.sector_matrix(&enumerate_sector(2 * n, ne, None).unwrap());
            assert!((&m - m.transpose()).amax() < 1e-12);
        }
    }
}

#[test]
fn action_is_hermitian_on_random_pairs() {
    let ints = random_integrals(4, 5);
    let h = build_hamiltonian_action(&ints).unwrap();
    for seed in 0..10 {
        let a = random_state(8, 3, None, 100 + seed);
        let b = random_state(8, 3, None, 200 + seed);
        let ab = h.expectation(&a, &b).unwrap();
        let ba = h.expectation(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-10);
    }
}

#[test]
fn action_conserves_particle_number_and_spin() {
    let ints = random_integrals(4, 9);
    let h = build_hamiltonian_action(&ints).unwrap();
    let psi = random_state(8, 4, Some(0), 3);
    let out = h.apply(&psi).unwrap();
    assert_eq!(out.n_electrons, 4);
    assert!(out
        .iter()
        .all(|(d, _)| d.n_electrons() == 4 && d.ms2() == 0));
}

#[test]
fn fci_matches_pyscf_for_bundled_fcidumps() {
    let refs = reference();
    for basis in ["sto3g", "631g", "ccpvdz"] {
        let key = match basis {
            "sto3g" => "sto-3g",
            "631g" => "6-31g",
            _ => "cc-pvdz",
        };
        let ints = fcidump(basis);
        let h = build_hamiltonian_action(&ints).unwrap();
        let gs = ground_state(&h, 2, Some(0)).unwrap();
        let e_ref = refs["energies"][key]["fci"].as_f64().unwrap();
        let e_rhf = refs["energies"][key]["rhf"].as_f64().unwrap();
        assert!(
            (gs.energy - e_ref).abs() < 1e-8,
            "{basis}: {} vs {e_ref}",
            gs.energy
        );
        assert!(gs.residual_norm < 1e-9);
        assert!(gs.energy <= e_rhf);
        assert!((gs.wavefunction.norm() - 1.0).abs() < 1e-10);
        // Hartree–Fock determinant energy from the same action
        let hf = basis_state(ints.n_spin_orbitals(), Determinant(0b11));
        let e_hf = h.expectation(&hf, &hf).unwrap().re;
        assert!((e_hf - e_rhf).abs() < 1e-8, "{basis}: {e_hf} vs {e_rhf}");
    }
}

#[test]
fn sto3g_fci_energy() {
    let h = build_hamiltonian_action(&fcidump("sto3g")).unwrap();
    let gs = ground_state(&h, 2, None).unwrap();
    assert!((gs.energy + 1.137).abs() < 5e-4);
}

#[test]
fn independent_particles() {
    let n = 4;
    let mut ints = MolecularIntegrals::zeros(n);
    let eps = [0.3, -0.7, 0.1, -0.2];
    for (p, e) in eps.iter().enumerate() {
        ints.h1[(p, p)] = *e;
    }
    let h = build_hamiltonian_action(&ints).unwrap();
    let mut so: Vec<f64> = eps.iter().flat_map(|e| [*e, *e]).collect();
    so.sort_by(f64::total_cmp);
    for ne in 1..=5 {
        let gs = ground_state(&h, ne, None).unwrap();
        let expect: f64 = so[..ne].iter().sum();
        assert!((gs.energy - expect).abs() < 1e-12);
    }
}

#[test]
fn one_dimensional_sector() {
    let ints = random_integrals(1, 4);
    let h = build_hamiltonian_action(&ints).unwrap();
    let gs = ground_state(&h, 2, None).unwrap();
    assert_eq!(gs.dimension, 1);
    assert!(gs.gap.is_none());
    assert!((gs.energy - h.diagonal(Determinant(0b11))).abs() < 1e-14);
}

#[test]
fn empty_sector_is_an_error() {
    let h = build_hamiltonian_action(&random_integrals(2, 1)).unwrap();
    assert!(ground_state(&h, 1, Some(3)).is_err());
    assert!(ground_state(&h, 5, None).is_err());
}

#[test]
fn davidson_agrees_with_dense() {
    let ints = random_integrals(5, 21);
    let h = build_hamiltonian_action(&ints).unwrap();
    let dense = ground_state(&h, 4, Some(0)).unwrap();
    let opts = GroundStateOptions {
        dense_limit: 0,
        ..Default::default()
    };
    let dav = ground_state_with(&h, 4, Some(0), &opts).unwrap();
    assert!((dense.energy - dav.energy).abs() < 1e-10);
    assert!(dav.residual_norm < 1e-9);
    let overlap = dense.wavefunction.inner(&dav.wavefunction);
    assert!((overlap.norm() - 1.0).abs() < 1e-9);
    assert!(overlap.re > 0.0, "phase convention differs");
}

#[test]
fn degenerate_ground_state_is_reproducible() {
    // Zero integrals: every determinant is a ground state.
    let h = build_hamiltonian_action(&MolecularIntegrals::zeros(3)).unwrap();
    let a = ground_state(&h, 2, None).unwrap();
    let b = ground_state(&h, 2, None).unwrap();
    assert!(a.is_degenerate());
    assert_eq!(a.wavefunction, b.wavefunction);
    let first = enumerate_sector(6, 2, None).unwrap()[0];
    assert!((a.wavefunction.amplitude(first).re - 1.0).abs() < 1e-12);
}

#[test]
fn dressing_reproduces_full_space_energy() {
    // 3 spatial orbitals, orbital 1 is core, {0, 2} active.
    let ints = random_integrals(3, 77);
    let part = OrbitalPartition::new(vec![1], vec![0, 2], vec![]).unwrap();
    let (dressed, _) = dress_core(&ints, &part).unwrap();
    let h_full = build_hamiltonian_action(&ints).unwrap();
    let h_act = build_hamiltonian_action(&dressed).unwrap();
    let mut r = rng(3);
    for trial in 0..20 {
        let ne = r.random_range(0..=4usize);
        let psi = random_state(4, ne, None, 1000 + trial);
        let full = psi.embed(6, &[0, 1, 4, 5], &[2, 3]).unwrap();
        let e_full = h_full.expectation(&full, &full).unwrap();
        let e_act = h_act.expectation(&psi, &psi).unwrap();
        assert!((e_full - e_act).norm() < 1e-10, "trial {trial}");
    }
}

#[test]
fn dressing_limits() {
    let ints = random_integrals(3, 8);
    let (same, _) = dress_core(&ints, &OrbitalPartition::from_counts(0, 3, 0)).unwrap();
    assert_eq!(same.h1, ints.h1);
    assert_eq!(same.scalar_energy(), ints.e_nuc);
    let (none, _) = dress_core(&ints, &OrbitalPartition::from_counts(3, 0, 0)).unwrap();
    assert_eq!(none.n_spatial, 0);
    assert!((none.scalar_energy() - ints.closed_shell_energy(3)).abs() < 1e-12);
}

#[test]
fn ground_state_phase_convention() {
    let h = build_hamiltonian_action(&fcidump("631g")).unwrap();
    let gs = ground_state(&h, 2, Some(0)).unwrap();
    let (_, big) = gs
        .wavefunction
        .iter()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .unwrap();
    assert!(big.re > 0.0 && big.im == 0.0);
}
