use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest spin-orbital count a determinant bitmask can hold.
pub const MAX_SPIN_ORBITALS: usize = 64;

/// Occupation bitmask: bit `i` set means spin orbital `i` is occupied.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct Determinant(pub u64);

impl Determinant {
    pub const VACUUM: Determinant = Determinant(0);

    pub fn from_occupied(occ: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &i in occ {
            check_index(i, MAX_SPIN_ORBITALS)?;
            if bits >> i & 1 == 1 {
                return Err(Error::Domain(format!("spin orbital {i} listed twice")));
            }
            bits |= 1 << i;
        }
        Ok(Determinant(bits))
    }

    #[inline]
    pub fn is_occupied(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn n_electrons(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Twice the S_z quantum number: alpha (even) minus beta (odd) count.
    pub fn ms2(self) -> i32 {
        let alpha = (self.0 & 0x5555_5555_5555_5555).count_ones() as i32;
        alpha - (self.0 & 0xAAAA_AAAA_AAAA_AAAA).count_ones() as i32
    }

    pub fn occupied(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Parity of the number of occupied spin orbitals below `i`.
    #[inline]
    fn parity_below(self, i: usize) -> f64 {
        let mask = (1u64 << i) - 1;
        if (self.0 & mask).count_ones() & 1 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    /// `a_i |self⟩`, or `None` when orbital `i` is empty.
    #[inline]
    pub fn annihilate(self, i: usize) -> Option<(f64, Determinant)> {
        if !self.is_occupied(i) {
            return None;
        }
        Some((self.parity_below(i), Determinant(self.0 & !(1 << i))))
    }

    /// `a†_i |self⟩`, or `None` when orbital `i` is already occupied.
    #[inline]
    pub fn create(self, i: usize) -> Option<(f64, Determinant)> {
        if self.is_occupied(i) {
            return None;
        }
        Some((self.parity_below(i), Determinant(self.0 | (1 << i))))
    }

    /// Binary string, most significant spin orbital first.
    pub fn to_bit_string(self, n_spin_orbitals: usize) -> String {
        (0..n_spin_orbitals)
            .rev()
            .map(|i| if self.is_occupied(i) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for Determinant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:b}", self.0)
    }
}

/// A single creation (`dagger`) or annihilation operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ladder {
    pub index: usize,
    pub dagger: bool,
}

impl Ladder {
    pub const fn create(index: usize) -> Self {
        Ladder {
            index,
            dagger: true,
        }
    }

    pub const fn annihilate(index: usize) -> Self {
        Ladder {
            index,
            dagger: false,
        }
    }

    pub const fn adjoint(self) -> Self {
        Ladder {
            index: self.index,
            dagger: !self.dagger,
        }
    }
}

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dagger {
            write!(f, "a+{}", self.index)
        } else {
            write!(f, "a{}", self.index)
        }
    }
}

/// Hermitian adjoint of a product: reversed order, daggers flipped.
pub fn adjoint_string(string: &[Ladder]) -> Vec<Ladder> {
    string.iter().rev().map(|l| l.adjoint()).collect()
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i >= n {
        Err(Error::Domain(format!(
            "spin orbital {i} out of range for {n} spin orbitals"
        )))
    } else {
        Ok(())
    }
}

/// Applies `string` (rightmost operator first) to `det`. Returns sign 0 when
/// the string annihilates the determinant.
pub fn apply_ladder_string(
    string: &[Ladder],
    det: Determinant,
    n_spin_orbitals: usize,
) -> Result<(i8, Determinant)> {
    for l in string {
        check_index(l.index, n_spin_orbitals.min(MAX_SPIN_ORBITALS))?;
    }
    Ok(match apply_unchecked(string, det) {
        Some((s, d)) => (if s > 0.0 { 1 } else { -1 }, d),
        None => (0, det),
    })
}

/// Same as [`apply_ladder_string`] without index validation.
#[inline]
pub(crate) fn apply_unchecked(string: &[Ladder], det: Determinant) -> Option<(f64, Determinant)> {
    let mut sign = 1.0;
    let mut d = det;
    for l in string.iter().rev() {
        let (s, next) = if l.dagger {
            d.create(l.index)?
        } else {
            d.annihilate(l.index)?
        };
        sign *= s;
        d = next;
    }
    Some((sign, d))
}

/// All determinants of `n_electrons` in `n_spin_orbitals`, optionally with a
/// fixed `2 S_z`, in ascending bitmask order.
pub fn enumerate_sector(
    n_spin_orbitals: usize,
    n_electrons: usize,
    ms2: Option<i32>,
) -> Result<Vec<Determinant>> {
    if n_spin_orbitals > MAX_SPIN_ORBITALS {
        return Err(Error::Domain(format!(
            "at most {MAX_SPIN_ORBITALS} spin orbitals supported, got {n_spin_orbitals}"
        )));
    }
    if n_electrons > n_spin_orbitals {
        return Err(Error::Domain(format!(
            "{n_electrons} electrons do not fit in {n_spin_orbitals} spin orbitals"
        )));
    }
    let mut out = Vec::new();
    if n_electrons == 0 {
        out.push(Determinant::VACUUM);
    } else {
        // Gosper's hack walks fixed-popcount words in increasing order.
        let limit: u128 = 1u128 << n_spin_orbitals;
        let mut v: u128 = (1u128 << n_electrons) - 1;
        while v < limit {
            out.push(Determinant(v as u64));
            let c = v & v.wrapping_neg();
            let r = v + c;
            v = (((r ^ v) >> 2) / c) | r;
        }
    }
    if let Some(m) = ms2 {
        out.retain(|d| d.ms2() == m);
    }
    Ok(out)
}
