use std::fmt::Write as _;

use crate::rdm::{Rdm, RdmSet};
use crate::{Complex, Error, OrbitalPartition, Result};

use super::engine::{contract_virtual, normal_order, Op, Symbolic};

/// Largest number of variables in a symbolic pattern.
pub const MAX_VARS: usize = 16;

/// Operator on a variable index. `virt` marks variables ranging over the
/// virtual space; all others range over the active space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymOp {
    pub var: u8,
    pub dagger: bool,
    pub virt: bool,
}

impl SymOp {
    pub const fn new(var: u8, dagger: bool, virt: bool) -> Self {
        SymOp { var, dagger, virt }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct CompiledTerm {
    coef: f64,
    /// Equivalence class of every variable after the deltas are imposed.
    class_of: Vec<u8>,
    n_classes: usize,
    class_virtual: Vec<bool>,
    /// Classes holding at least one variable that occurs in the pattern;
    /// the others are placeholders and never summed over.
    class_used: Vec<bool>,
    /// Normal-ordered residual `a†_{c1} … a†_{cm} a_{d1} … a_{dm}`, by class.
    creators: Vec<u8>,
    annihilators: Vec<u8>,
}

/// Contraction of an index-abstracted operator string, compiled once and
/// instantiated for many concrete index tuples.
#[derive(Debug, Clone)]
pub struct SymbolicContraction {
    n_vars: usize,
    terms: Vec<CompiledTerm>,
}

fn find(parent: &mut [u8], x: u8) -> u8 {
    let mut r = x;
    while parent[r as usize] != r {
        r = parent[r as usize];
    }
    let mut x = x;
    while parent[x as usize] != r {
        let next = parent[x as usize];
        parent[x as usize] = r;
        x = next;
    }
    r
}

impl SymbolicContraction {
    /// Compiles `ops`. Terms whose residual rank exceeds `n_electrons`
    /// vanish on the reference and are dropped when it is given.
    pub fn compile(ops: &[SymOp], n_electrons: Option<usize>) -> Result<Self> {
        let n_vars = ops.iter().map(|o| o.var as usize + 1).max().unwrap_or(0);
        if n_vars > MAX_VARS {
            return Err(Error::Domain(format!(
                "pattern uses {n_vars} variables, max {MAX_VARS}"
            )));
        }
        let mut var_virtual: Vec<Option<bool>> = vec![None; n_vars];
        let mut used = vec![false; n_vars];
        for o in ops {
            used[o.var as usize] = true;
        }
        for o in ops {
            match var_virtual[o.var as usize] {
                Some(v) if v != o.virt => {
                    return Err(Error::Label(format!(
                        "variable {} labelled both active and virtual",
                        o.var
                    )))
                }
                _ => var_virtual[o.var as usize] = Some(o.virt),
            }
        }
        let raw: Vec<Op<u8>> = ops
            .iter()
            .map(|o| Op {
                idx: o.var,
                dagger: o.dagger,
                virt: o.virt,
            })
            .collect();

        let mut terms: Vec<CompiledTerm> = Vec::new();
        for t in contract_virtual(&raw, &Symbolic) {
            for t in normal_order(t, &Symbolic) {
                let rank = t.ops.iter().filter(|o| o.dagger).count();
                if n_electrons.is_some_and(|n| rank > n) {
                    continue;
                }
                let mut parent: Vec<u8> = (0..n_vars as u8).collect();
                for &(a, b) in &t.deltas {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra.max(rb) as usize] = ra.min(rb);
                    }
                }
                // Dense class numbering in order of first variable.
                let mut label = vec![u8::MAX; n_vars];
                let mut class_of = vec![0u8; n_vars];
                let mut class_virtual = Vec::new();
                let mut class_used = Vec::new();
                for v in 0..n_vars {
                    let r = find(&mut parent, v as u8) as usize;
                    if label[r] == u8::MAX {
                        label[r] = class_virtual.len() as u8;
                        class_virtual.push(var_virtual[r].unwrap_or(false));
                        class_used.push(false);
                    }
                    class_of[v] = label[r];
                    class_used[label[r] as usize] |= used[v];
                }
                let creators: Vec<u8> = t
                    .ops
                    .iter()
                    .filter(|o| o.dagger)
                    .map(|o| class_of[o.idx as usize])
                    .collect();
                let annihilators: Vec<u8> = t
                    .ops
                    .iter()
                    .filter(|o| !o.dagger)
                    .map(|o| class_of[o.idx as usize])
                    .collect();
                if has_repeat(&creators) || has_repeat(&annihilators) {
                    continue;
                }
                let term = CompiledTerm {
                    coef: t.coef,
                    class_of,
                    n_classes: class_virtual.len(),
                    class_virtual,
                    class_used,
                    creators,
                    annihilators,
                };
                match terms.iter_mut().find(|x| {
                    x.class_of == term.class_of
                        && x.creators == term.creators
                        && x.annihilators == term.annihilators
                }) {
                    Some(x) => x.coef += term.coef,
                    None => terms.push(term),
                }
            }
        }
        terms.retain(|t| t.coef != 0.0);
        Ok(SymbolicContraction { n_vars, terms })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn max_rank(&self) -> usize {
        self.terms
            .iter()
            .map(|t| t.creators.len())
            .max()
            .unwrap_or(0)
    }

    /// Text form, one `coeff * δ(..) * D[u…|p…]` line per term; `vN` names
    /// variable `N` by the smallest variable of its class.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for t in &self.terms {
            let rep = |c: u8| -> usize { t.class_of.iter().position(|&x| x == c).unwrap_or(0) };
            let _ = write!(s, "{:+} *", t.coef);
            for v in 0..self.n_vars {
                let r = rep(t.class_of[v]);
                if r != v {
                    let _ = write!(s, " δ(v{r},v{v}) *");
                }
            }
            let upper: Vec<String> = t
                .creators
                .iter()
                .rev()
                .map(|&c| format!("v{}", rep(c)))
                .collect();
            let lower: Vec<String> = t
                .annihilators
                .iter()
                .map(|&c| format!("v{}", rep(c)))
                .collect();
            let _ = writeln!(s, " D[{}|{}]", upper.join(" "), lower.join(" "));
        }
        s
    }

    /// Sum over all terms and all consistent index assignments of
    /// `coef · weight(values) · ⟨residual⟩`.
    ///
    /// `fixed[v]` pins variable `v` to a global spin orbital; unpinned
    /// variables that end up in a class without a pinned member are summed
    /// over the active (or virtual) spin orbitals of the view. Variables
    /// absent from the pattern are reported to `weight` as 0 when unpinned.
    pub fn evaluate<F>(&self, fixed: &[Option<usize>], view: &RdmView<'_>, mut weight: F) -> Complex
    where
        F: FnMut(&[usize]) -> f64,
    {
        debug_assert!(fixed.len() >= self.n_vars);
        let mut total = Complex::default();
        let mut class_val = [usize::MAX; MAX_VARS];
        let mut values = [0usize; MAX_VARS];
        let mut free: [usize; MAX_VARS] = [0; MAX_VARS];
        'terms: for t in &self.terms {
            class_val[..t.n_classes].fill(usize::MAX);
            for v in 0..self.n_vars {
                if let Some(x) = fixed[v] {
                    let c = t.class_of[v] as usize;
                    if class_val[c] == usize::MAX {
                        class_val[c] = x;
                    } else if class_val[c] != x {
                        continue 'terms;
                    }
                }
            }
            let mut n_free = 0;
            for c in 0..t.n_classes {
                if class_val[c] == usize::MAX {
                    if t.class_used[c] {
                        free[n_free] = c;
                        n_free += 1;
                    } else {
                        class_val[c] = 0;
                    }
                }
            }
            // Odometer over the free classes.
            let mut digit = [0usize; MAX_VARS];
            loop {
                let mut ok = true;
                for f in 0..n_free {
                    let c = free[f];
                    let range = if t.class_virtual[c] {
                        &view.virtuals
                    } else {
                        &view.active
                    };
                    if range.is_empty() {
                        ok = false;
                        break;
                    }
                    class_val[c] = range[digit[f]];
                }
                if !ok {
                    break;
                }
                for v in 0..self.n_vars {
                    values[v] = class_val[t.class_of[v] as usize];
                }
                let w = weight(&values[..self.n_vars]);
                if w != 0.0 {
                    let d = view.expectation_by(&t.creators, &t.annihilators, &class_val);
                    total += d * (t.coef * w);
                }
                // advance
                let mut f = 0;
                loop {
                    if f == n_free {
                        break;
                    }
                    let c = free[f];
                    let len = if t.class_virtual[c] {
                        view.virtuals.len()
                    } else {
                        view.active.len()
                    };
                    digit[f] += 1;
                    if digit[f] < len {
                        break;
                    }
                    digit[f] = 0;
                    f += 1;
                }
                if f == n_free {
                    break;
                }
            }
        }
        total
    }
}

fn has_repeat(x: &[u8]) -> bool {
    x.iter().enumerate().any(|(i, a)| x[..i].contains(a))
}

/// Read-only access to the reference density matrices by global spin
/// orbital.
#[derive(Debug, Clone)]
pub struct RdmView<'a> {
    /// Global active spin orbitals (ascending local index order).
    pub active: Vec<usize>,
    pub virtuals: Vec<usize>,
    local: Vec<usize>,
    n_electrons: usize,
    by_rank: Vec<Option<&'a Rdm>>,
}

impl<'a> RdmView<'a> {
    /// Fails with [`Error::MissingRdm`] if any rank `1..=max_rank` that does
    /// not vanish (`k ≤ N`) is absent from `rdms`.
    pub fn new(rdms: &'a RdmSet, partition: &OrbitalPartition, max_rank: usize) -> Result<Self> {
        let n_act = partition.n_active_spin();
        if rdms.n != n_act {
            return Err(Error::Shape(format!(
                "density matrices over {} spin orbitals, active space has {n_act}",
                rdms.n
            )));
        }
        let n_total = 2 * partition.n_spatial();
        let mut local = vec![usize::MAX; n_total];
        let active: Vec<usize> = (0..n_act).map(|l| partition.active_global(l)).collect();
        for (l, &g) in active.iter().enumerate() {
            local[g] = l;
        }
        let mut by_rank = vec![None; max_rank + 1];
        for (k, slot) in by_rank.iter_mut().enumerate().skip(1) {
            if k <= rdms.n_electrons {
                *slot = Some(rdms.get(k)?);
            }
        }
        Ok(RdmView {
            active,
            virtuals: partition.virtual_spin_orbitals(),
            local,
            n_electrons: rdms.n_electrons,
            by_rank,
        })
    }

    pub fn n_electrons(&self) -> usize {
        self.n_electrons
    }

    /// `⟨a†_{c1} … a†_{cm} a_{d1} … a_{dm}⟩` for global active indices.
    pub fn expectation(&self, creators: &[usize], annihilators: &[usize]) -> Result<Complex> {
        let m = creators.len();
        if m != annihilators.len() {
            return Ok(Complex::default());
        }
        if m == 0 {
            return Ok(Complex::new(1.0, 0.0));
        }
        if m > self.n_electrons {
            return Ok(Complex::default());
        }
        let to_local = |g: usize| -> Result<usize> {
            match self.local.get(g) {
                Some(&l) if l != usize::MAX => Ok(l),
                _ => Err(Error::Label(format!("spin orbital {g} is not active"))),
            }
        };
        let upper: Vec<usize> = creators
            .iter()
            .rev()
            .map(|&g| to_local(g))
            .collect::<Result<_>>()?;
        let lower: Vec<usize> = annihilators
            .iter()
            .map(|&g| to_local(g))
            .collect::<Result<_>>()?;
        let d = self
            .by_rank
            .get(m)
            .copied()
            .flatten()
            .ok_or(Error::MissingRdm(m))?;
        Ok(d.get(&upper, &lower))
    }

    #[inline]
    fn expectation_by(&self, creators: &[u8], annihilators: &[u8], class_val: &[usize]) -> Complex {
        let m = creators.len();
        if m == 0 {
            return Complex::new(1.0, 0.0);
        }
        let Some(Some(d)) = self.by_rank.get(m) else {
            // Ranks above N vanish; compile() drops them when N is known.
            return Complex::default();
        };
        let mut upper = [0usize; MAX_VARS];
        let mut lower = [0usize; MAX_VARS];
        for (i, &c) in creators.iter().rev().enumerate() {
            upper[i] = self.local[class_val[c as usize]];
        }
        for (i, &c) in annihilators.iter().enumerate() {
            lower[i] = self.local[class_val[c as usize]];
        }
        d.get(&upper[..m], &lower[..m])
    }
}
