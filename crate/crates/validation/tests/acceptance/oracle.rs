//! Independent references: full Fock-space expectation values and a
//! hand transcription of the double-double contraction.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vqse_core::fci::*;
use vqse_core::partition::spin_orbitals;
use vqse_core::rdm::RdmSet;
use vqse_core::wick::LabeledString;
use vqse_core::{Complex, OrbitalPartition};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_state(n_so: usize, n_el: usize, seed: u64) -> Wavefunction {
    let mut r = rng(seed);
    let dets = enumerate_sector(n_so, n_el, None).unwrap();
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

pub struct Instance {
    pub partition: OrbitalPartition,
    pub rdms: RdmSet,
    pub embedded: Wavefunction,
    pub n_so: usize,
}

/// Random active state next to an empty virtual space.
pub fn instance(partition: OrbitalPartition, n_el: usize, seed: u64) -> Instance {
    let n_so = 2 * partition.n_spatial();
    let psi = random_state(partition.n_active_spin(), n_el, seed);
    let embedded = psi
        .embed(n_so, &spin_orbitals(&partition.active), &[])
        .unwrap();
    let rdms = RdmSet::exact(&psi, n_el.min(4)).unwrap();
    Instance {
        partition,
        rdms,
        embedded,
        n_so,
    }
}

pub fn expectation(inst: &Instance, s: &LabeledString) -> Complex {
    let op = SecondQuantizedOperator::single(1.0, s.ladders());
    s.coefficient * full_space_expectation(&inst.embedded, &op, &inst.embedded).unwrap()
}

/// Length ≤ 12; half the strings have as many creators as annihilators.
pub fn random_string(inst: &Instance, r: &mut impl Rng) -> LabeledString {
    let balanced = r.random::<bool>();
    let len = if balanced {
        2 * r.random_range(0..=6)
    } else {
        r.random_range(0..=12)
    };
    let mut daggers: Vec<bool> = (0..len)
        .map(|k| if balanced { k % 2 == 0 } else { r.random() })
        .collect();
    for k in (1..daggers.len()).rev() {
        daggers.swap(k, r.random_range(0..=k));
    }
    let ladders: Vec<Ladder> = daggers
        .iter()
        .map(|&d| Ladder {
            index: r.random_range(0..inst.n_so),
            dagger: d,
        })
        .collect();
    let c = Complex::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
    LabeledString::from_ladders(c, &ladders, &inst.partition).unwrap()
}

/// Indices of `⟨a_ξ a†_s a_η a†_r · a†_i a†_j a_k a_l · a†_μ a_p a†_ν a_q⟩`.
#[derive(Debug, Clone, Copy)]
pub struct Tuple {
    xi: usize,
    s: usize,
    eta: usize,
    r: usize,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    mu: usize,
    p: usize,
    nu: usize,
    q: usize,
}

impl Tuple {
    pub fn ladders(&self) -> Vec<Ladder> {
        vec![
            Ladder::annihilate(self.xi),
            Ladder::create(self.s),
            Ladder::annihilate(self.eta),
            Ladder::create(self.r),
            Ladder::create(self.i),
            Ladder::create(self.j),
            Ladder::annihilate(self.k),
            Ladder::annihilate(self.l),
            Ladder::create(self.mu),
            Ladder::annihilate(self.p),
            Ladder::create(self.nu),
            Ladder::annihilate(self.q),
        ]
    }
}

fn kd(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

fn pair_delta(a: usize, b: usize, m: usize, n: usize) -> f64 {
    kd(a, n) * kd(b, m) - kd(a, m) * kd(b, n)
}

/// The published closed form, term by term. Greek indices are virtual, so
/// RDM elements carrying one are zero.
pub fn closed_form(t: &Tuple, rdms: &RdmSet, p: &OrbitalPartition) -> Complex {
    let local = |g: usize| p.active_local(g);
    let expect = |cre: &[usize], ann: &[usize]| -> Complex {
        let upper: Option<Vec<usize>> = cre.iter().rev().map(|&g| local(g)).collect();
        let lower: Option<Vec<usize>> = ann.iter().map(|&g| local(g)).collect();
        match (upper, lower) {
            (Some(u), Some(l)) if u.len() <= rdms.n_electrons => {
                rdms.get(u.len()).unwrap().get(&u, &l)
            }
            _ => Complex::default(),
        }
    };
    let mut m =
        pair_delta(t.xi, t.eta, t.mu, t.nu) * expect(&[t.s, t.r, t.i, t.j], &[t.k, t.l, t.p, t.q]);
    for (x, xbar, sx) in [(t.i, t.j, 0), (t.j, t.i, 1)] {
        for (y, ybar, sy) in [(t.l, t.k, 0), (t.k, t.l, 1)] {
            let sign = if (sx + sy) % 2 == 0 { 1.0 } else { -1.0 };
            let f = kd(t.xi, x) * pair_delta(y, t.eta, t.mu, t.nu)
                - kd(t.eta, x) * pair_delta(y, t.xi, t.mu, t.nu);
            if f != 0.0 {
                m += sign * f * expect(&[t.s, t.r, xbar], &[ybar, t.p, t.q]);
            }
        }
    }
    m += pair_delta(t.xi, t.eta, t.i, t.j)
        * pair_delta(t.k, t.l, t.mu, t.nu)
        * expect(&[t.s, t.r], &[t.p, t.q]);
    m
}

pub fn random_tuple(inst: &Instance, r: &mut impl Rng) -> Tuple {
    let act = inst.partition.active_spin_orbitals();
    let vir = inst.partition.virtual_spin_orbitals();
    let pair = |r: &mut dyn rand::RngCore, set: &[usize]| {
        let a = r.random_range(0..set.len());
        let b = (a + r.random_range(1..set.len())) % set.len();
        (set[a], set[b])
    };
    let (s, rr) = pair(r, &act);
    let (p, q) = pair(r, &act);
    let (xi, eta) = pair(r, &vir[..2]);
    let (mu, nu) = pair(r, &vir[..2]);
    let mut mid = || {
        if r.random::<bool>() {
            vir[r.random_range(0..2)]
        } else {
            act[r.random_range(0..act.len())]
        }
    };
    Tuple {
        xi,
        s,
        eta,
        r: rr,
        i: mid(),
        j: mid(),
        k: mid(),
        l: mid(),
        mu,
        p,
        nu,
        q,
    }
}
