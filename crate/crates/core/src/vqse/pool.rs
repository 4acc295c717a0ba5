use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::fci::Ladder;
use crate::partition::spin_orbitals;
use crate::{Error, OrbitalPartition, Result, Space};

/// One expansion operator `O_j`, indices are spin orbitals of the
/// (core-free) full space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExpansionOperator {
    Identity,
    /// `a†_i a_p`, `i` active or virtual, `p` active.
    Single {
        i: usize,
        p: usize,
    },
    /// `a†_μ a_q a†_ν a_r` with `μ < ν` virtual and `q`, `r` active.
    Double {
        mu: usize,
        q: usize,
        nu: usize,
        r: usize,
    },
}

impl ExpansionOperator {
    /// The operator as a ladder string, rightmost applied first.
    pub fn ladders(&self) -> Vec<Ladder> {
        match *self {
            ExpansionOperator::Identity => Vec::new(),
            ExpansionOperator::Single { i, p } => vec![Ladder::create(i), Ladder::annihilate(p)],
            ExpansionOperator::Double { mu, q, nu, r } => vec![
                Ladder::create(mu),
                Ladder::annihilate(q),
                Ladder::create(nu),
                Ladder::annihilate(r),
            ],
        }
    }

    /// Change of `2 S_z` caused by the operator.
    pub fn delta_ms2(&self) -> i32 {
        let s = |x: usize| if x % 2 == 0 { 1 } else { -1 };
        match *self {
            ExpansionOperator::Identity => 0,
            ExpansionOperator::Single { i, p } => s(i) - s(p),
            ExpansionOperator::Double { mu, q, nu, r } => s(mu) + s(nu) - s(q) - s(r),
        }
    }

    pub fn validate(&self, partition: &OrbitalPartition) -> Result<()> {
        let is = |x: usize, sp: Space| partition.space_of(x) == Some(sp);
        let ok = match *self {
            ExpansionOperator::Identity => true,
            ExpansionOperator::Single { i, p } => {
                (is(i, Space::Active) || is(i, Space::Virtual)) && is(p, Space::Active)
            }
            ExpansionOperator::Double { mu, q, nu, r } => {
                mu < nu
                    && is(mu, Space::Virtual)
                    && is(nu, Space::Virtual)
                    && is(q, Space::Active)
                    && is(r, Space::Active)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Label(format!("{self:?} does not fit the partition")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PoolOptions {
    pub include_identity: bool,
    pub singles: bool,
    pub doubles: bool,
    /// Active spatial orbitals allowed as `p`, `q`, `r`. `None` takes the
    /// partition's excited subset (or the whole active space).
    pub restrict_to: Option<Vec<usize>>,
    /// Drop operators that change `S_z`; their rows and columns vanish on
    /// an `S_z` eigenstate.
    pub prune_sz: bool,
}

impl Default for PoolOptions {
    fn default() -> Self {
        PoolOptions {
            include_identity: true,
            singles: true,
            doubles: true,
            restrict_to: None,
            prune_sz: true,
        }
    }
}

/// Deduplicated pool in canonical order: identity, singles by `(i, p)`,
/// doubles by `(μ, q, ν, r)`.
pub fn build_pool(
    partition: &OrbitalPartition,
    options: &PoolOptions,
) -> Result<Vec<ExpansionOperator>> {
    partition.validate()?;
    if partition.active.is_empty() {
        return Err(Error::Domain("empty active space".into()));
    }
    let excited = match &options.restrict_to {
        Some(sub) => {
            if let Some(&x) = sub.iter().find(|x| !partition.active.contains(x)) {
                return Err(Error::Partition(format!(
                    "restricted orbital {x} is not active"
                )));
            }
            spin_orbitals(sub)
        }
        None => partition.excited_spin_orbitals(),
    };
    let targets: Vec<usize> = {
        let mut t: Vec<usize> = partition
            .active_spin_orbitals()
            .into_iter()
            .chain(partition.virtual_spin_orbitals())
            .collect();
        t.sort_unstable();
        t
    };
    let virtuals = {
        let mut v = partition.virtual_spin_orbitals();
        v.sort_unstable();
        v
    };
    let mut pool = BTreeSet::new();
    if options.include_identity {
        pool.insert(ExpansionOperator::Identity);
    }
    if options.singles {
        for &i in &targets {
            for &p in &excited {
                pool.insert(ExpansionOperator::Single { i, p });
            }
        }
    }
    if options.doubles {
        for (a, &mu) in virtuals.iter().enumerate() {
            for &nu in &virtuals[a + 1..] {
                for &q in &excited {
                    for &r in &excited {
                        pool.insert(ExpansionOperator::Double { mu, q, nu, r });
                    }
                }
            }
        }
    }
    Ok(pool
        .into_iter()
        .filter(|op| {
            !options.prune_sz
                || (op.delta_ms2() == 0
                    && !matches!(op, ExpansionOperator::Double { q, r, .. } if q == r))
        })
        .collect())
}

/// `|I| + |𝒜∪𝒱|·|𝒜_v| + C(|𝒱|, 2)·|𝒜_v|²` in spin orbitals, before pruning.
pub fn unpruned_pool_size(
    n_active_virtual: usize,
    n_excited: usize,
    n_virtual: usize,
    identity: bool,
) -> usize {
    identity as usize
        + n_active_virtual * n_excited
        + n_virtual * n_virtual.saturating_sub(1) / 2 * n_excited * n_excited
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unpruned() -> PoolOptions {
        PoolOptions {
            prune_sz: false,
            ..Default::default()
        }
    }

    #[test]
    fn singles_only_one_orbital() {
        let p = OrbitalPartition::from_counts(0, 1, 0);
        let pool = build_pool(
            &p,
            &PoolOptions {
                doubles: false,
                ..unpruned()
            },
        )
        .unwrap();
        assert_eq!(pool.len(), 5);
        assert_eq!(pool[0], ExpansionOperator::Identity);
    }

    #[test]
    fn empty_restriction_leaves_identity() {
        let p = OrbitalPartition::from_counts(0, 2, 3);
        let pool = build_pool(
            &p,
            &PoolOptions {
                restrict_to: Some(vec![]),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(pool, vec![ExpansionOperator::Identity]);
    }

    #[test]
    fn closed_form_count() {
        for (na, nv) in [(1, 0), (2, 1), (2, 8), (3, 2)] {
            let p = OrbitalPartition::from_counts(0, na, nv);
            let pool = build_pool(&p, &unpruned()).unwrap();
            assert_eq!(
                pool.len(),
                unpruned_pool_size(2 * (na + nv), 2 * na, 2 * nv, true)
            );
            for op in &pool {
                op.validate(&p).unwrap();
            }
        }
    }

    #[test]
    fn pruning_keeps_sz_conserving() {
        let p = OrbitalPartition::from_counts(0, 2, 2);
        let all = build_pool(&p, &unpruned()).unwrap();
        let kept = build_pool(&p, &PoolOptions::default()).unwrap();
        assert!(kept.len() < all.len());
        assert!(kept.iter().all(|o| o.delta_ms2() == 0));
        assert!(kept.iter().all(|o| all.contains(o)));
    }

    #[test]
    fn errors() {
        let p = OrbitalPartition::from_counts(0, 0, 2);
        assert!(matches!(
            build_pool(&p, &PoolOptions::default()),
            Err(Error::Domain(_))
        ));
        let p = OrbitalPartition::from_counts(0, 2, 2);
        let bad = PoolOptions {
            restrict_to: Some(vec![3]),
            ..Default::default()
        };
        assert!(build_pool(&p, &bad).is_err());
    }
}
