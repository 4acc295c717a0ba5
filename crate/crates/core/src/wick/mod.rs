//! Expectation values of ladder-operator strings over `|Ψ_active⟩ ⊗ |vac⟩`.
//!
//! Virtual operators are contracted against the virtual vacuum (only
//! `⟨a_μ a†_ν⟩ = δ_μν` survives), the active remainder is normal ordered
//! and read off the active-space density matrices. Numeric strings go
//! through [`evaluate`]; index-abstracted patterns are compiled once with
//! [`SymbolicContraction`] and instantiated per index tuple.

mod engine;
mod symbolic;

use crate::fci::Ladder;
use crate::rdm::RdmSet;
use crate::{Complex, Error, OrbitalPartition, Result, Space};

use engine::{contract_virtual, normal_order, Numeric, Op, Term};

pub use symbolic::{RdmView, SymOp, SymbolicContraction, MAX_VARS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LabeledOp {
    pub index: usize,
    pub dagger: bool,
    pub space: Space,
}

/// `coefficient · o_1 o_2 … o_n` with every operator tagged active or
/// virtual.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledString {
    pub coefficient: Complex,
    pub ops: Vec<LabeledOp>,
}

impl LabeledString {
    pub fn new(coefficient: Complex, ops: Vec<LabeledOp>) -> Self {
        LabeledString { coefficient, ops }
    }

    /// Labels every operator from the partition.
    pub fn from_ladders(
        coefficient: Complex,
        ladders: &[Ladder],
        partition: &OrbitalPartition,
    ) -> Result<Self> {
        let ops = ladders
            .iter()
            .map(|l| {
                let space = partition.space_of(l.index).ok_or_else(|| {
                    Error::Label(format!("spin orbital {} outside the partition", l.index))
                })?;
                Ok(LabeledOp {
                    index: l.index,
                    dagger: l.dagger,
                    space,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let s = LabeledString { coefficient, ops };
        s.validate(partition)?;
        Ok(s)
    }

    pub fn ladders(&self) -> Vec<Ladder> {
        self.ops
            .iter()
            .map(|o| Ladder {
                index: o.index,
                dagger: o.dagger,
            })
            .collect()
    }

    /// Labels must agree with the partition and may not reference the core.
    pub fn validate(&self, partition: &OrbitalPartition) -> Result<()> {
        for o in &self.ops {
            let actual = partition.space_of(o.index);
            if o.space == Space::Core {
                return Err(Error::Label(format!(
                    "operator on core spin orbital {}",
                    o.index
                )));
            }
            if actual != Some(o.space) {
                return Err(Error::Label(format!(
                    "spin orbital {} labelled {:?} but the partition says {:?}",
                    o.index, o.space, actual
                )));
            }
        }
        Ok(())
    }
}

/// Active-only strings left after the virtual contraction, in their
/// original relative order, indices global.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionResult {
    pub terms: Vec<(Complex, Vec<Ladder>)>,
}

impl ContractionResult {
    /// `coeff * D[u…|p…]` per normal-ordered term, with global indices.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (c, ladders) in &self.terms {
            for t in normal_order(to_term(ladders), &Numeric) {
                let (upper, lower) = split(&t);
                let upper: Vec<String> = upper.iter().rev().map(|x| x.to_string()).collect();
                let lower: Vec<String> = lower.iter().map(|x| x.to_string()).collect();
                out.push_str(&format!(
                    "({:+}{:+}i) * D[{}|{}]\n",
                    c.re * t.coef,
                    c.im * t.coef,
                    upper.join(" "),
                    lower.join(" ")
                ));
            }
        }
        out
    }
}

fn to_term(ladders: &[Ladder]) -> Term<usize> {
    Term {
        coef: 1.0,
        deltas: Vec::new(),
        ops: ladders
            .iter()
            .map(|l| Op {
                idx: l.index,
                dagger: l.dagger,
                virt: false,
            })
            .collect(),
    }
}

fn split(t: &Term<usize>) -> (Vec<usize>, Vec<usize>) {
    let c = t.ops.iter().filter(|o| o.dagger).map(|o| o.idx).collect();
    let a = t.ops.iter().filter(|o| !o.dagger).map(|o| o.idx).collect();
    (c, a)
}

pub fn contract_virtuals(
    string: &LabeledString,
    partition: &OrbitalPartition,
) -> Result<ContractionResult> {
    string.validate(partition)?;
    let ops: Vec<Op<usize>> = string
        .ops
        .iter()
        .map(|o| Op {
            idx: o.index,
            dagger: o.dagger,
            virt: o.space == Space::Virtual,
        })
        .collect();
    let terms = contract_virtual(&ops, &Numeric)
        .into_iter()
        .map(|t| {
            let ladders = t
                .ops
                .iter()
                .map(|o| Ladder {
                    index: o.idx,
                    dagger: o.dagger,
                })
                .collect();
            (string.coefficient * t.coef, ladders)
        })
        .collect();
    Ok(ContractionResult { terms })
}

/// `⟨Ψ ⊗ vac| string |Ψ ⊗ vac⟩` from the active density matrices.
pub fn evaluate(
    string: &LabeledString,
    rdms: &RdmSet,
    partition: &OrbitalPartition,
) -> Result<Complex> {
    let contracted = contract_virtuals(string, partition)?;
    let mut ordered = Vec::new();
    for (c, ladders) in &contracted.terms {
        for t in normal_order(to_term(ladders), &Numeric) {
            ordered.push((*c * t.coef, t));
        }
    }
    let max_rank = ordered
        .iter()
        .map(|(_, t)| t.ops.len() / 2)
        .max()
        .unwrap_or(0)
        .min(rdms.n_electrons);
    let view = RdmView::new(rdms, partition, max_rank)?;
    let mut total = Complex::default();
    for (c, t) in ordered {
        let (cre, ann) = split(&t);
        total += c * view.expectation(&cre, &ann)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fci::Wavefunction;

    fn op(index: usize, dagger: bool, space: Space) -> LabeledOp {
        LabeledOp {
            index,
            dagger,
            space,
        }
    }

    #[test]
    fn vacuum_pair() {
        let p = OrbitalPartition::from_counts(0, 1, 2);
        let s = LabeledString::new(
            Complex::new(1.0, 0.0),
            vec![op(2, false, Space::Virtual), op(2, true, Space::Virtual)],
        );
        let r = contract_virtuals(&s, &p).unwrap();
        assert_eq!(r.terms.len(), 1);
        assert!(r.terms[0].1.is_empty());
        let s = LabeledString::new(
            Complex::new(1.0, 0.0),
            vec![op(2, true, Space::Virtual), op(2, false, Space::Virtual)],
        );
        assert!(contract_virtuals(&s, &p).unwrap().terms.is_empty());
    }

    #[test]
    fn label_errors() {
        let p = OrbitalPartition::from_counts(1, 1, 1);
        let core = LabeledString::new(Complex::new(1.0, 0.0), vec![op(0, true, Space::Core)]);
        assert!(matches!(contract_virtuals(&core, &p), Err(Error::Label(_))));
        let wrong = LabeledString::new(Complex::new(1.0, 0.0), vec![op(2, true, Space::Virtual)]);
        assert!(matches!(
            contract_virtuals(&wrong, &p),
            Err(Error::Label(_))
        ));
    }

    #[test]
    fn active_passthrough_and_missing_rank() {
        let p = OrbitalPartition::from_counts(0, 2, 1);
        let psi = Wavefunction::from_determinant(
            4,
            crate::fci::Determinant::from_occupied(&[0, 1]).unwrap(),
        )
        .unwrap();
        let rdms = RdmSet::exact(&psi, 1).unwrap();
        let s = LabeledString::new(
            Complex::new(1.0, 0.0),
            vec![op(0, true, Space::Active), op(0, false, Space::Active)],
        );
        assert!((evaluate(&s, &rdms, &p).unwrap() - 1.0).norm() < 1e-14);
        let two = LabeledString::new(
            Complex::new(1.0, 0.0),
            vec![
                op(0, true, Space::Active),
                op(1, true, Space::Active),
                op(1, false, Space::Active),
                op(0, false, Space::Active),
            ],
        );
        assert!(matches!(
            evaluate(&two, &rdms, &p),
            Err(Error::MissingRdm(2))
        ));
    }

    #[test]
    fn symbolic_pair_pattern() {
        // a_x a†_y with both virtual: one term, δ(x,y), empty residual.
        let c = SymbolicContraction::compile(
            &[SymOp::new(0, false, true), SymOp::new(1, true, true)],
            None,
        )
        .unwrap();
        assert_eq!(c.n_terms(), 1);
        assert_eq!(c.dump().trim(), "+1 * δ(v0,v1) * D[|]");
    }
}
