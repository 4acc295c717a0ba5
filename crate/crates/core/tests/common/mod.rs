#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vqse_core::fci::{enumerate_sector, Wavefunction};
use vqse_core::integrals::{read_fcidump, Eri, MolecularIntegrals};
use vqse_core::Complex;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn data_path(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn fcidump(basis: &str) -> MolecularIntegrals {
    read_fcidump(data_path(&format!("h2_{basis}.fcidump")))
        .unwrap()
        .0
}

pub fn reference() -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(data_path("pyscf_reference.json")).unwrap())
        .unwrap()
}

/// Random real integrals with the full 8-fold symmetry.
pub fn random_integrals(n: usize, seed: u64) -> MolecularIntegrals {
    let mut r = rng(seed);
    let h1 = DMatrix::from_fn(n, n, |_, _| r.random_range(-1.0..1.0));
    let h1 = 0.5 * (&h1 + h1.transpose());
    let mut eri = Eri::zeros(n);
    for p in 0..n {
        for q in 0..=p {
            for s in 0..n {
                for t in 0..=s {
                    eri.set_sym(p, q, s, t, r.random_range(-0.5..0.5));
                }
            }
        }
    }
    MolecularIntegrals::new(r.random_range(0.0..1.0), h1, eri).unwrap()
}

/// Random normalized complex state over a whole sector.
pub fn random_state(n_so: usize, n_el: usize, ms2: Option<i32>, seed: u64) -> Wavefunction {
    let mut r = rng(seed);
    let dets = enumerate_sector(n_so, n_el, ms2).unwrap();
    let mut w = Wavefunction::from_amplitudes(
        n_so,
        n_el,
        dets.into_iter().map(|d| {
            (
                d,
                Complex::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)),
            )
        }),
    )
    .unwrap();
    w.normalize().unwrap();
    w
}
