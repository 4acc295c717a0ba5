use std::fmt::Write as _;

use crate::{Complex, Error, Result};

/// Largest rank handled by the stack-allocated index helpers.
pub const MAX_RANK: usize = 8;
const MAX_N: usize = 64;

const fn binomial_table() -> [[usize; MAX_RANK + 2]; MAX_N + 1] {
    let mut t = [[0usize; MAX_RANK + 2]; MAX_N + 1];
    let mut n = 0;
    while n <= MAX_N {
        t[n][0] = 1;
        let mut k = 1;
        while k < MAX_RANK + 2 {
            t[n][k] = if n == 0 {
                0
            } else {
                t[n - 1][k - 1] + t[n - 1][k]
            };
            k += 1;
        }
        n += 1;
    }
    t
}

static BINOM: [[usize; MAX_RANK + 2]; MAX_N + 1] = binomial_table();

#[inline]
pub fn binomial(n: usize, k: usize) -> usize {
    BINOM[n][k]
}

/// Sorts a short index list in place, returning the permutation sign, or
/// `None` if an index repeats.
#[inline]
pub fn sort_with_sign(idx: &mut [usize]) -> Option<f64> {
    let mut sign = 1.0;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    Some(sign)
}

/// Colexicographic rank of a strictly increasing tuple.
#[inline]
pub fn rank_sorted(idx: &[usize]) -> usize {
    idx.iter().enumerate().map(|(i, &c)| BINOM[c][i + 1]).sum()
}

/// All strictly increasing `k`-tuples of `0..n` in rank order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // colex successor: bump the lowest position that can move
        let mut i = 0;
        while i < k {
            let limit = if i + 1 < k { cur[i + 1] } else { n };
            if cur[i] + 1 < limit {
                cur[i] += 1;
                for (j, c) in cur.iter_mut().enumerate().take(i) {
                    *c = j;
                }
                break;
            }
            i += 1;
        }
        if i == k {
            return out;
        }
    }
}

/// Rank-`(k, k)` tensor antisymmetric in its upper and in its lower
/// indices, stored over sorted index tuples only.
///
/// Element `get(U, P)` of a density matrix is
/// `⟨a†_{u_k} … a†_{u_1} a_{p_1} … a_{p_k}⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rdm {
    pub k: usize,
    /// Number of spin orbitals.
    pub n: usize,
    /// Particle number of the state the tensor was built from, if any.
    pub n_electrons: Option<usize>,
    /// Set when the tensor is known to vanish identically (`k > N`).
    pub vanishes: bool,
    dim: usize,
    data: Vec<Complex>,
}

impl Rdm {
    pub fn zeros(k: usize, n: usize) -> Result<Self> {
        if n > MAX_N || k > MAX_RANK {
            return Err(Error::Domain(format!(
                "rank {k} over {n} spin orbitals exceeds the supported size"
            )));
        }
        let dim = binomial(n, k);
        Ok(Rdm {
            k,
            n,
            n_electrons: None,
            vanishes: false,
            dim,
            data: vec![Complex::default(); dim * dim],
        })
    }

    /// Number of sorted index tuples on each side.
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> Complex {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn at_mut(&mut self, row: usize, col: usize) -> &mut Complex {
        &mut self.data[row * self.dim + col]
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [Complex] {
        &mut self.data
    }

    /// Element with arbitrary index order; repeated indices give zero.
    #[inline]
    pub fn get(&self, upper: &[usize], lower: &[usize]) -> Complex {
        debug_assert!(upper.len() == self.k && lower.len() == self.k);
        let mut u = [0usize; MAX_RANK];
        let mut p = [0usize; MAX_RANK];
        u[..self.k].copy_from_slice(upper);
        p[..self.k].copy_from_slice(lower);
        let (Some(su), Some(sp)) = (
            sort_with_sign(&mut u[..self.k]),
            sort_with_sign(&mut p[..self.k]),
        ) else {
            return Complex::default();
        };
        self.at(rank_sorted(&u[..self.k]), rank_sorted(&p[..self.k])) * (su * sp)
    }

    /// Adds `v` to the element `(upper, lower)` with the antisymmetry sign.
    pub fn add(&mut self, upper: &[usize], lower: &[usize], v: Complex) {
        let mut u = upper.to_vec();
        let mut p = lower.to_vec();
        if let (Some(su), Some(sp)) = (sort_with_sign(&mut u), sort_with_sign(&mut p)) {
            let (r, c) = (rank_sorted(&u), rank_sorted(&p));
            *self.at_mut(r, c) += v * (su * sp);
        }
    }

    pub fn check_same_shape(&self, other: &Rdm) -> Result<()> {
        if self.k != other.k || self.n != other.n {
            return Err(Error::Shape(format!(
                "rank {} over {} vs rank {} over {}",
                self.k, self.n, other.k, other.n
            )));
        }
        Ok(())
    }

    pub fn scale(&self, s: f64) -> Rdm {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|x| *x *= s);
        out
    }

    /// `self + s · other`.
    pub fn add_scaled(&self, other: &Rdm, s: f64) -> Result<Rdm> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        out.vanishes = false;
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &Rdm) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Frobenius norm over sorted tuples.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `Σ_P D^P_P` over all (unsorted) index tuples, i.e. `k!` times the
    /// sorted-tuple trace. Equals `N!/(N−k)!` for a density matrix.
    pub fn trace(&self) -> Complex {
        let s: Complex = (0..self.dim).map(|i| self.at(i, i)).sum();
        s * (1..=self.k).product::<usize>() as f64
    }

    /// `max |D^U_P − conj(D^P_U)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut e: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                e = e.max((self.at(i, j) - self.at(j, i).conj()).norm());
            }
        }
        e
    }

    /// Contracts the last upper with the last lower index.
    pub fn partial_trace(&self) -> Result<Rdm> {
        if self.k == 0 {
            return Err(Error::Domain("cannot trace a rank-0 tensor".into()));
        }
        let k = self.k - 1;
        let mut out = Rdm::zeros(k, self.n)?;
        out.n_electrons = self.n_electrons;
        let combos = combinations(self.n, k);
        let mut u = vec![0; k + 1];
        let mut p = vec![0; k + 1];
        for (r, cu) in combos.iter().enumerate() {
            for (c, cp) in combos.iter().enumerate() {
                let mut acc = Complex::default();
                for x in 0..self.n {
                    u[..k].copy_from_slice(cu);
                    p[..k].copy_from_slice(cp);
                    u[k] = x;
                    p[k] = x;
                    acc += self.get(&u, &p);
                }
                *out.at_mut(r, c) = acc;
            }
        }
        Ok(out)
    }

    /// Sparse text form: a `#` header then `k  u1..uk  p1..pk  re im` for
    /// every nonzero element over sorted tuples.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "# n={} N={} k={}\n",
            self.n,
            self.n_electrons.map_or("-".to_string(), |x| x.to_string()),
            self.k
        );
        let combos = combinations(self.n, self.k);
        for (r, cu) in combos.iter().enumerate() {
            for (c, cp) in combos.iter().enumerate() {
                let v = self.at(r, c);
                if v.norm() == 0.0 {
                    continue;
                }
                let _ = write!(s, "{} ", self.k);
                for i in cu.iter().chain(cp) {
                    let _ = write!(s, " {i}");
                }
                let _ = writeln!(s, "  {:.17e} {:.17e}", v.re, v.im);
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Rdm> {
        let mut out: Option<Rdm> = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(h) = line.strip_prefix('#') {
                let (mut n, mut ne, mut k) = (None, None, None);
                for kv in h.split_whitespace() {
                    match kv.split_once('=') {
                        Some(("n", v)) => n = v.parse().ok(),
                        Some(("N", v)) => ne = v.parse().ok(),
                        Some(("k", v)) => k = v.parse().ok(),
                        _ => {}
                    }
                }
                let (Some(n), Some(k)) = (n, k) else {
                    return Err(Error::parse(lineno + 1, "header needs n= and k="));
                };
                let mut r = Rdm::zeros(k, n)?;
                r.n_electrons = ne;
                r.vanishes = ne.is_some_and(|ne| k > ne);
                out = Some(r);
                continue;
            }
            let r = out
                .as_mut()
                .ok_or_else(|| Error::parse(lineno + 1, "data before header"))?;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 2 * r.k + 3 {
                return Err(Error::parse(lineno + 1, "wrong field count"));
            }
            let num = |s: &str| -> Result<usize> {
                s.parse()
                    .map_err(|_| Error::parse(lineno + 1, format!("bad index {s}")))
            };
            if num(f[0])? != r.k {
                return Err(Error::parse(lineno + 1, "rank mismatch"));
            }
            let idx: Vec<usize> = f[1..=2 * r.k]
                .iter()
                .map(|s| num(s))
                .collect::<Result<_>>()?;
            if idx.iter().any(|&i| i >= r.n) {
                return Err(Error::parse(lineno + 1, "index out of range"));
            }
            let re: f64 = f[2 * r.k + 1]
                .parse()
                .map_err(|_| Error::parse(lineno + 1, "bad value"))?;
            let im: f64 = f[2 * r.k + 2]
                .parse()
                .map_err(|_| Error::parse(lineno + 1, "bad value"))?;
            r.add(&idx[..r.k], &idx[r.k..], Complex::new(re, im));
        }
        out.ok_or_else(|| Error::parse(1, "missing header"))
    }
}
