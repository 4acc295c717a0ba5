use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::{Complex, Error, Result};

use super::determinant::{apply_unchecked, Determinant, Ladder, MAX_SPIN_ORBITALS};

/// Linear combination of ladder-operator products with real coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SecondQuantizedOperator {
    pub terms: Vec<(f64, Vec<Ladder>)>,
}

impl SecondQuantizedOperator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        SecondQuantizedOperator {
            terms: vec![(1.0, Vec::new())],
        }
    }

    pub fn single(coefficient: f64, string: Vec<Ladder>) -> Self {
        SecondQuantizedOperator {
            terms: vec![(coefficient, string)],
        }
    }

    pub fn push(&mut self, coefficient: f64, string: Vec<Ladder>) {
        self.terms.push((coefficient, string));
    }

    pub fn adjoint(&self) -> Self {
        SecondQuantizedOperator {
            terms: self
                .terms
                .iter()
                .map(|(c, s)| (*c, super::determinant::adjoint_string(s)))
                .collect(),
        }
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms
            .iter()
            .flat_map(|(_, s)| s.iter().map(|l| l.index))
            .max()
    }
}

/// Sparse state in a fixed particle-number sector.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    pub n_spin_orbitals: usize,
    pub n_electrons: usize,
    amplitudes: BTreeMap<Determinant, Complex>,
}

impl Wavefunction {
    pub fn zero(n_spin_orbitals: usize, n_electrons: usize) -> Result<Self> {
        if n_spin_orbitals > MAX_SPIN_ORBITALS || n_electrons > n_spin_orbitals {
            return Err(Error::Domain(format!(
                "{n_electrons} electrons in {n_spin_orbitals} spin orbitals"
            )));
        }
        Ok(Wavefunction {
            n_spin_orbitals,
            n_electrons,
            amplitudes: BTreeMap::new(),
        })
    }

    pub fn from_determinant(n_spin_orbitals: usize, det: Determinant) -> Result<Self> {
        let mut w = Self::zero(n_spin_orbitals, det.n_electrons())?;
        w.add(det, Complex::new(1.0, 0.0))?;
        Ok(w)
    }

    pub fn from_amplitudes(
        n_spin_orbitals: usize,
        n_electrons: usize,
        amps: impl IntoIterator<Item = (Determinant, Complex)>,
    ) -> Result<Self> {
        let mut w = Self::zero(n_spin_orbitals, n_electrons)?;
        for (d, c) in amps {
            w.add(d, c)?;
        }
        Ok(w)
    }

    /// Adds `c` to the amplitude of `det`.
    pub fn add(&mut self, det: Determinant, c: Complex) -> Result<()> {
        if det.n_electrons() != self.n_electrons {
            return Err(Error::Domain(format!(
                "determinant {det} has {} electrons, sector has {}",
                det.n_electrons(),
                self.n_electrons
            )));
        }
        if self.n_spin_orbitals < 64 && det.0 >> self.n_spin_orbitals != 0 {
            return Err(Error::Domain(format!(
                "determinant {det} exceeds {} spin orbitals",
                self.n_spin_orbitals
            )));
        }
        *self.amplitudes.entry(det).or_default() += c;
        Ok(())
    }

    pub fn amplitude(&self, det: Determinant) -> Complex {
        self.amplitudes.get(&det).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Determinant, Complex)> + '_ {
        self.amplitudes.iter().map(|(d, c)| (*d, *c))
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::Domain("cannot normalize the zero vector".into()));
        }
        for c in self.amplitudes.values_mut() {
            *c /= n;
        }
        Ok(())
    }

    /// Drops amplitudes with modulus at or below `tol`.
    pub fn prune(&mut self, tol: f64) {
        self.amplitudes.retain(|_, c| c.norm() > tol);
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Wavefunction) -> Complex {
        if self.n_electrons != other.n_electrons {
            return Complex::default();
        }
        let (small, large, flip) = if self.len() <= other.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex::default();
        for (d, c) in small.iter() {
            if let Some(o) = large.amplitudes.get(&d) {
                acc += if flip { o.conj() * c } else { c.conj() * o };
            }
        }
        acc
    }

    /// `coefficient · string |self⟩`, applied rightmost operator first.
    pub fn apply_string(&self, string: &[Ladder], coefficient: Complex) -> Result<Wavefunction> {
        let mut out = Wavefunction::zero(self.n_spin_orbitals, target_electrons(self, string)?)?;
        for (d, c) in self.iter() {
            if let Some((s, nd)) = apply_unchecked(string, d) {
                *out.amplitudes.entry(nd).or_default() += coefficient * c * s;
            }
        }
        Ok(out)
    }

    pub fn apply_operator(&self, op: &SecondQuantizedOperator) -> Result<Wavefunction> {
        let mut target = None;
        let mut out = BTreeMap::<Determinant, Complex>::new();
        for (coef, string) in &op.terms {
            let n = target_electrons(self, string)?;
            match target {
                None => target = Some(n),
                Some(t) if t != n => {
                    return Err(Error::Domain(
                        "operator terms change the particle number differently".into(),
                    ))
                }
                _ => {}
            }
            for (d, c) in self.iter() {
                if let Some((s, nd)) = apply_unchecked(string, d) {
                    *out.entry(nd).or_default() += c * (s * coef);
                }
            }
        }
        Ok(Wavefunction {
            n_spin_orbitals: self.n_spin_orbitals,
            n_electrons: target.unwrap_or(self.n_electrons),
            amplitudes: out,
        })
    }

    /// Places the state in a larger orbital space: local spin orbital `i`
    /// becomes `orbital_map[i]` (which must be increasing), then the
    /// `occupied` spin orbitals are filled by creation operators applied in
    /// descending index order on top, i.e. `a†_{c1} a†_{c2} … |Ψ⟩` with
    /// `c1 < c2 < …`.
    pub fn embed(
        &self,
        n_spin_orbitals: usize,
        orbital_map: &[usize],
        occupied: &[usize],
    ) -> Result<Wavefunction> {
        if orbital_map.len() != self.n_spin_orbitals {
            return Err(Error::Shape(format!(
                "orbital map has {} entries for {} spin orbitals",
                orbital_map.len(),
                self.n_spin_orbitals
            )));
        }
        if orbital_map.windows(2).any(|w| w[0] >= w[1])
            || orbital_map
                .iter()
                .chain(occupied)
                .any(|&i| i >= n_spin_orbitals)
        {
            return Err(Error::Domain(
                "embedding map must be increasing and in range".into(),
            ));
        }
        let mut sorted_occ = occupied.to_vec();
        sorted_occ.sort_unstable();
        let creators: Vec<Ladder> = sorted_occ.iter().map(|&i| Ladder::create(i)).collect();
        let mut out = Wavefunction::zero(n_spin_orbitals, self.n_electrons + occupied.len())?;
        for (d, c) in self.iter() {
            let mut bits = 0u64;
            for i in d.occupied() {
                bits |= 1 << orbital_map[i];
            }
            if let Some((s, nd)) = apply_unchecked(&creators, Determinant(bits)) {
                out.add(nd, c * s)?;
            } else {
                return Err(Error::Domain(
                    "embedded orbitals overlap the filled ones".into(),
                ));
            }
        }
        Ok(out)
    }

    /// Text dump: a `#` header, then one `bitmask re im` line per
    /// determinant with the bitmask written most significant orbital first.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "# n_spin_orbitals={} n_electrons={}\n",
            self.n_spin_orbitals, self.n_electrons
        );
        for (d, c) in self.iter() {
            let _ = writeln!(
                s,
                "{} {:.17e} {:.17e}",
                d.to_bit_string(self.n_spin_orbitals),
                c.re,
                c.im
            );
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Wavefunction> {
        let mut header: Option<(usize, usize)> = None;
        let mut amps = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut n = None;
                let mut ne = None;
                for kv in rest.split_whitespace() {
                    match kv.split_once('=') {
                        Some(("n_spin_orbitals", v)) => n = v.parse().ok(),
                        Some(("n_electrons", v)) => ne = v.parse().ok(),
                        _ => {}
                    }
                }
                if let (Some(n), Some(ne)) = (n, ne) {
                    header = Some((n, ne));
                }
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::parse(lineno + 1, "expected `bitmask re im`"));
            }
            let bits = u64::from_str_radix(f[0], 2)
                .map_err(|e| Error::parse(lineno + 1, e.to_string()))?;
            let re: f64 = f[1]
                .parse()
                .map_err(|_| Error::parse(lineno + 1, "bad real part"))?;
            let im: f64 = f[2]
                .parse()
                .map_err(|_| Error::parse(lineno + 1, "bad imaginary part"))?;
            amps.push((Determinant(bits), Complex::new(re, im)));
        }
        let (n, ne) = header.ok_or_else(|| Error::parse(1, "missing header"))?;
        Wavefunction::from_amplitudes(n, ne, amps)
    }
}

fn target_electrons(w: &Wavefunction, string: &[Ladder]) -> Result<usize> {
    let mut n = w.n_electrons as i64;
    for l in string {
        if l.index >= w.n_spin_orbitals {
            return Err(Error::Domain(format!(
                "spin orbital {} out of range for {} spin orbitals",
                l.index, w.n_spin_orbitals
            )));
        }
        n += if l.dagger { 1 } else { -1 };
    }
    if n < 0 || n as usize > w.n_spin_orbitals {
        // The result is identically zero; keep the sector label in range.
        return Ok(w.n_electrons.min(w.n_spin_orbitals));
    }
    Ok(n as usize)
}

/// `⟨bra| op |ket⟩` by explicit determinant action.
pub fn full_space_expectation(
    bra: &Wavefunction,
    op: &SecondQuantizedOperator,
    ket: &Wavefunction,
) -> Result<Complex> {
    if bra.n_spin_orbitals != ket.n_spin_orbitals {
        return Err(Error::Shape(format!(
            "bra has {} spin orbitals, ket has {}",
            bra.n_spin_orbitals, ket.n_spin_orbitals
        )));
    }
    let mut acc = Complex::default();
    for (coef, string) in &op.terms {
        let v = ket.apply_string(string, Complex::new(*coef, 0.0))?;
        acc += bra.inner(&v);
    }
    Ok(acc)
}
