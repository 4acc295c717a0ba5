use nalgebra::DMatrix;

#[cfg(feature = "rayon")]
use rayon::prelude::*;

use crate::integrals::MolecularIntegrals;
use crate::rdm::RdmSet;
use crate::wick::{RdmView, SymOp, SymbolicContraction};
use crate::{Complex, Error, OrbitalPartition, Result, Space};

use super::ExpansionOperator;

/// `H_ij = ⟨Ψ|O_i† H O_j|Ψ⟩` and `S_ij = ⟨Ψ|O_i† O_j|Ψ⟩` over a pool.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspacePair {
    pub h: DMatrix<Complex>,
    pub s: DMatrix<Complex>,
    pub pool: Vec<ExpansionOperator>,
    /// `‖H − H†‖_F` and `‖S − S†‖_F` before symmetrisation; `None` if only
    /// the upper triangle was assembled.
    pub h_asymmetry: Option<f64>,
    pub s_asymmetry: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AssemblyOptions {
    /// Assemble every element instead of the upper triangle, so the
    /// asymmetry can be measured.
    pub both_triangles: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Identity,
    SingleActive,
    SingleVirtual,
    Double,
}

const KINDS: [Kind; 4] = [
    Kind::Identity,
    Kind::SingleActive,
    Kind::SingleVirtual,
    Kind::Double,
];

fn kind_of(op: &ExpansionOperator, partition: &OrbitalPartition) -> Kind {
    match *op {
        ExpansionOperator::Identity => Kind::Identity,
        ExpansionOperator::Single { i, .. } => {
            if partition.space_of(i) == Some(Space::Virtual) {
                Kind::SingleVirtual
            } else {
                Kind::SingleActive
            }
        }
        ExpansionOperator::Double { .. } => Kind::Double,
    }
}

fn indices(op: &ExpansionOperator) -> [Option<usize>; 4] {
    match *op {
        ExpansionOperator::Identity => [None; 4],
        ExpansionOperator::Single { i, p } => [Some(i), Some(p), None, None],
        ExpansionOperator::Double { mu, q, nu, r } => [Some(mu), Some(q), Some(nu), Some(r)],
    }
}

/// Operator pattern of a pool kind on variables `base..base + 4`, or of its
/// adjoint.
fn pool_pattern(kind: Kind, base: u8, adjoint: bool) -> Vec<SymOp> {
    let ops = match kind {
        Kind::Identity => vec![],
        Kind::SingleActive => vec![
            SymOp::new(base, true, false),
            SymOp::new(base + 1, false, false),
        ],
        Kind::SingleVirtual => vec![
            SymOp::new(base, true, true),
            SymOp::new(base + 1, false, false),
        ],
        Kind::Double => vec![
            SymOp::new(base, true, true),
            SymOp::new(base + 1, false, false),
            SymOp::new(base + 2, true, true),
            SymOp::new(base + 3, false, false),
        ],
    };
    if adjoint {
        ops.into_iter()
            .rev()
            .map(|o| SymOp::new(o.var, !o.dagger, o.virt))
            .collect()
    } else {
        ops
    }
}

const H_BASE: u8 = 4;
const R_BASE: u8 = 8;

/// Hamiltonian slot patterns: overlap, 4 one-body, 16 two-body labellings.
fn h_patterns() -> Vec<Vec<SymOp>> {
    let mut out = vec![vec![]];
    for m in 0..4u8 {
        out.push(vec![
            SymOp::new(H_BASE, true, m & 1 != 0),
            SymOp::new(H_BASE + 1, false, m & 2 != 0),
        ]);
    }
    for m in 0..16u8 {
        out.push(vec![
            SymOp::new(H_BASE, true, m & 1 != 0),
            SymOp::new(H_BASE + 1, true, m & 2 != 0),
            SymOp::new(H_BASE + 2, false, m & 4 != 0),
            SymOp::new(H_BASE + 3, false, m & 8 != 0),
        ]);
    }
    out
}

/// Compiled contractions for one (left kind, right kind) combination:
/// index 0 is the overlap, 1..5 one-body, 5..21 two-body.
struct PatternSet {
    patterns: Vec<Option<SymbolicContraction>>,
}

struct Cache {
    sets: Vec<PatternSet>,
    max_rank: usize,
}

impl Cache {
    fn build(n_electrons: usize) -> Result<Cache> {
        let hs = h_patterns();
        let mut sets = Vec::with_capacity(16);
        let mut max_rank = 0;
        for &kl in &KINDS {
            for &kr in &KINDS {
                let mut patterns = Vec::with_capacity(hs.len());
                for h in &hs {
                    let mut ops = pool_pattern(kl, 0, true);
                    ops.extend_from_slice(h);
                    ops.extend(pool_pattern(kr, R_BASE, false));
                    let c = SymbolicContraction::compile(&ops, Some(n_electrons))?;
                    if c.n_terms() == 0 {
                        patterns.push(None);
                    } else {
                        max_rank = max_rank.max(c.max_rank());
                        patterns.push(Some(c));
                    }
                }
                sets.push(PatternSet { patterns });
            }
        }
        Ok(Cache { sets, max_rank })
    }

    fn get(&self, kl: Kind, kr: Kind) -> &PatternSet {
        &self.sets[kl as usize * 4 + kr as usize]
    }
}

/// Symbolic contraction dump of every non-empty pattern, for inspection.
pub fn dump_patterns(n_electrons: usize) -> Result<String> {
    let cache = Cache::build(n_electrons)?;
    let mut out = String::new();
    for &kl in &KINDS {
        for &kr in &KINDS {
            for (k, c) in cache.get(kl, kr).patterns.iter().enumerate() {
                if let Some(c) = c {
                    out.push_str(&format!("# {kl:?}† · slot {k} · {kr:?}\n"));
                    out.push_str(&c.dump());
                }
            }
        }
    }
    Ok(out)
}

pub fn assemble_subspace(
    pool: &[ExpansionOperator],
    integrals: &MolecularIntegrals,
    rdms: &RdmSet,
    partition: &OrbitalPartition,
) -> Result<SubspacePair> {
    assemble_subspace_with(
        pool,
        integrals,
        rdms,
        partition,
        &AssemblyOptions::default(),
    )
}

/// Assembly over a core-free partition covering the integrals (apply
/// `dress_core` first). Each matrix element sums compiled contractions of
/// `O_i† · h-term · O_j` with the Hamiltonian indices as free variables.
pub fn assemble_subspace_with(
    pool: &[ExpansionOperator],
    integrals: &MolecularIntegrals,
    rdms: &RdmSet,
    partition: &OrbitalPartition,
    options: &AssemblyOptions,
) -> Result<SubspacePair> {
    if !partition.core.is_empty() {
        return Err(Error::Partition(
            "subspace assembly expects core-dressed integrals".into(),
        ));
    }
    partition.check_covers(integrals.n_spatial)?;
    for op in pool {
        op.validate(partition)?;
    }
    let cache = Cache::build(rdms.n_electrons)?;
    let view = RdmView::new(rdms, partition, cache.max_rank)?;
    let kinds: Vec<Kind> = pool.iter().map(|o| kind_of(o, partition)).collect();
    let n = pool.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| {
            let start = if options.both_triangles { 0 } else { i };
            (start..n).map(move |j| (i, j))
        })
        .collect();
    let scalar = integrals.scalar_energy();
    let element = |&(i, j): &(usize, usize)| -> (Complex, Complex) {
        let set = cache.get(kinds[i], kinds[j]);
        let mut fixed = [None; 12];
        fixed[..4].copy_from_slice(&indices(&pool[i]));
        fixed[R_BASE as usize..].copy_from_slice(&indices(&pool[j]));
        let s = match &set.patterns[0] {
            Some(c) => c.evaluate(&fixed, &view, |_| 1.0),
            None => Complex::default(),
        };
        let mut h = s * scalar;
        for (k, c) in set.patterns.iter().enumerate().skip(1) {
            let Some(c) = c else { continue };
            h += if k < 5 {
                c.evaluate(&fixed, &view, |v| integrals.h1_so(v[4], v[5]))
            } else {
                c.evaluate(&fixed, &view, |v| {
                    0.5 * integrals.h2_so(v[4], v[5], v[6], v[7])
                })
            };
        }
        (h, s)
    };
    let values: Vec<(Complex, Complex)> = crate::if_rayon!(
        pairs.par_iter().map(element).collect(),
        pairs.iter().map(element).collect()
    );
    let mut h = DMatrix::<Complex>::zeros(n, n);
    let mut s = DMatrix::<Complex>::zeros(n, n);
    for (&(i, j), &(hv, sv)) in pairs.iter().zip(&values) {
        h[(i, j)] = hv;
        s[(i, j)] = sv;
        if !options.both_triangles {
            h[(j, i)] = hv.conj();
            s[(j, i)] = sv.conj();
        }
    }
    let (h, h_asym) = hermitize(h);
    let (s, s_asym) = hermitize(s);
    Ok(SubspacePair {
        h,
        s,
        pool: pool.to_vec(),
        h_asymmetry: options.both_triangles.then_some(h_asym),
        s_asymmetry: options.both_triangles.then_some(s_asym),
    })
}

fn hermitize(m: DMatrix<Complex>) -> (DMatrix<Complex>, f64) {
    let adj = m.adjoint();
    let asym = (&m - &adj).norm();
    ((m + adj) * Complex::new(0.5, 0.0), asym)
}
