//! Contraction and normal ordering shared by the numeric and the symbolic
//! front ends. The index type is abstract; a [`DeltaPolicy`] decides what a
//! Kronecker delta between two indices evaluates to.

/// Outcome of `δ_ab`.
pub(crate) enum Delta<I> {
    Zero,
    One,
    /// Unresolved: record the equality and keep going.
    Constraint(I, I),
}

pub(crate) trait DeltaPolicy<I> {
    fn delta(&self, a: I, b: I) -> Delta<I>;
}

/// Concrete spin-orbital indices.
pub(crate) struct Numeric;

impl DeltaPolicy<usize> for Numeric {
    #[inline]
    fn delta(&self, a: usize, b: usize) -> Delta<usize> {
        if a == b {
            Delta::One
        } else {
            Delta::Zero
        }
    }
}

/// Variables: distinct variables stay symbolic.
pub(crate) struct Symbolic;

impl DeltaPolicy<u8> for Symbolic {
    #[inline]
    fn delta(&self, a: u8, b: u8) -> Delta<u8> {
        if a == b {
            Delta::One
        } else {
            Delta::Constraint(a.min(b), a.max(b))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Op<I> {
    pub idx: I,
    pub dagger: bool,
    pub virt: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Term<I> {
    pub coef: f64,
    pub deltas: Vec<(I, I)>,
    pub ops: Vec<Op<I>>,
}

fn without_two<I: Copy>(ops: &[Op<I>], a: usize, b: usize) -> Vec<Op<I>> {
    ops.iter()
        .enumerate()
        .filter(|(k, _)| *k != a && *k != b)
        .map(|(_, o)| *o)
        .collect()
}

/// Removes all virtual operators against the virtual vacuum.
///
/// The leftmost virtual operator decides: a creator there meets the vacuum
/// bra and the term vanishes; an annihilator is anticommuted to the right,
/// leaving a delta with every later virtual creator (sign
/// `(−1)^{operators in between}`) and vanishing on the vacuum ket.
pub(crate) fn contract_virtual<I: Copy, P: DeltaPolicy<I>>(
    ops: &[Op<I>],
    policy: &P,
) -> Vec<Term<I>> {
    let n_create = ops.iter().filter(|o| o.virt && o.dagger).count();
    let n_annih = ops.iter().filter(|o| o.virt && !o.dagger).count();
    let mut out = Vec::new();
    if n_create == n_annih {
        rec_virtual(ops.to_vec(), 1.0, Vec::new(), policy, &mut out);
    }
    out
}

fn rec_virtual<I: Copy, P: DeltaPolicy<I>>(
    ops: Vec<Op<I>>,
    coef: f64,
    deltas: Vec<(I, I)>,
    policy: &P,
    out: &mut Vec<Term<I>>,
) {
    let Some(p) = ops.iter().position(|o| o.virt) else {
        out.push(Term { coef, deltas, ops });
        return;
    };
    if ops[p].dagger {
        return;
    }
    for q in p + 1..ops.len() {
        if !(ops[q].virt && ops[q].dagger) {
            continue;
        }
        let sign = if (q - p - 1) % 2 == 0 { coef } else { -coef };
        match policy.delta(ops[p].idx, ops[q].idx) {
            Delta::Zero => {}
            Delta::One => rec_virtual(without_two(&ops, p, q), sign, deltas.clone(), policy, out),
            Delta::Constraint(a, b) => {
                let mut d = deltas.clone();
                d.push((a, b));
                rec_virtual(without_two(&ops, p, q), sign, d, policy, out);
            }
        }
    }
}

/// Brings an operator string to normal order (creators left) using
/// `a_x a†_y = δ_xy − a†_y a_x`. Strings with unequal creator and
/// annihilator counts are dropped: their expectation value in a
/// fixed-particle-number state is zero.
pub(crate) fn normal_order<I: Copy, P: DeltaPolicy<I>>(term: Term<I>, policy: &P) -> Vec<Term<I>> {
    let creators = term.ops.iter().filter(|o| o.dagger).count();
    let mut out = Vec::new();
    if 2 * creators == term.ops.len() {
        rec_order(term, policy, &mut out);
    }
    out
}

fn rec_order<I: Copy, P: DeltaPolicy<I>>(term: Term<I>, policy: &P, out: &mut Vec<Term<I>>) {
    let Some(k) = term
        .ops
        .windows(2)
        .position(|w| !w[0].dagger && w[1].dagger)
    else {
        out.push(term);
        return;
    };
    match policy.delta(term.ops[k].idx, term.ops[k + 1].idx) {
        Delta::Zero => {}
        Delta::One => rec_order(
            Term {
                coef: term.coef,
                deltas: term.deltas.clone(),
                ops: without_two(&term.ops, k, k + 1),
            },
            policy,
            out,
        ),
        Delta::Constraint(a, b) => {
            let mut d = term.deltas.clone();
            d.push((a, b));
            rec_order(
                Term {
                    coef: term.coef,
                    deltas: d,
                    ops: without_two(&term.ops, k, k + 1),
                },
                policy,
                out,
            );
        }
    }
    let mut ops = term.ops;
    ops.swap(k, k + 1);
    rec_order(
        Term {
            coef: -term.coef,
            deltas: term.deltas,
            ops,
        },
        policy,
        out,
    );
}
