#[cfg(feature = "rayon")]
use rayon::prelude::*;

use crate::{Complex, Error, Result};

use super::tensor::{binomial, combinations, rank_sorted, Rdm, MAX_RANK};

/// Ways of splitting `m` sorted positions into a leading `a`-subset and its
/// complement, with the sign of the permutation that moves the subset to
/// the front.
fn splits(m: usize, a: usize) -> Vec<(Vec<usize>, Vec<usize>, f64)> {
    combinations(m, a)
        .into_iter()
        .map(|s| {
            let rest: Vec<usize> = (0..m).filter(|i| !s.contains(i)).collect();
            let shift: usize = s.iter().enumerate().map(|(i, &p)| p - i).sum();
            let sign = if shift % 2 == 0 { 1.0 } else { -1.0 };
            (s, rest, sign)
        })
        .collect()
}

/// Grassmann wedge product with the `(1/(a+b)!)²` antisymmetrizer.
///
/// For antisymmetric factors the permutation sum collapses to a sum over
/// index subsets weighted by `1/C(a+b, a)²`.
pub fn wedge(a: &Rdm, b: &Rdm) -> Result<Rdm> {
    if a.n != b.n {
        return Err(Error::Shape(format!(
            "wedge of tensors over {} and {} spin orbitals",
            a.n, b.n
        )));
    }
    let m = a.k + b.k;
    if m > MAX_RANK {
        return Err(Error::Domain(format!("wedge rank {m} too large")));
    }
    let n = a.n;
    let mut out = Rdm::zeros(m, n)?;
    out.n_electrons = if a.n_electrons == b.n_electrons {
        a.n_electrons
    } else {
        None
    };
    if a.vanishes || b.vanishes || out.dim() == 0 {
        return Ok(out);
    }
    let norm = 1.0 / (binomial(m, a.k) as f64).powi(2);
    let split = splits(m, a.k);
    let combos = combinations(n, m);
    let dim = combos.len();

    let row = |r: usize| -> Vec<Complex> {
        let u = &combos[r];
        // Pre-rank the upper halves once per row.
        let upper: Vec<(usize, usize, f64)> = split
            .iter()
            .map(|(s, rest, sign)| {
                let su: Vec<usize> = s.iter().map(|&i| u[i]).collect();
                let ru: Vec<usize> = rest.iter().map(|&i| u[i]).collect();
                (rank_sorted(&su), rank_sorted(&ru), *sign)
            })
            .collect();
        let mut vals = vec![Complex::default(); dim];
        let mut su = [0usize; MAX_RANK];
        let mut ru = [0usize; MAX_RANK];
        for (c, p) in combos.iter().enumerate() {
            let mut acc = Complex::default();
            for (s, rest, sign) in &split {
                for (x, &i) in s.iter().enumerate() {
                    su[x] = p[i];
                }
                for (x, &i) in rest.iter().enumerate() {
                    ru[x] = p[i];
                }
                let (ps, pr) = (rank_sorted(&su[..a.k]), rank_sorted(&ru[..b.k]));
                for &(us, ur, usign) in &upper {
                    acc += a.at(us, ps) * b.at(ur, pr) * (usign * sign);
                }
            }
            vals[c] = acc * norm;
        }
        vals
    };
    let rows: Vec<Vec<Complex>> = crate::if_rayon!(
        (0..dim).into_par_iter().map(row).collect(),
        (0..dim).map(row).collect()
    );
    let data = out.data_mut();
    for (r, vals) in rows.into_iter().enumerate() {
        data[r * dim..(r + 1) * dim].copy_from_slice(&vals);
    }
    Ok(out)
}

/// `x ∧ x ∧ … ∧ x` (`power` factors).
pub fn wedge_power(x: &Rdm, power: usize) -> Result<Rdm> {
    if power == 0 {
        let mut one = Rdm::zeros(0, x.n)?;
        *one.at_mut(0, 0) = Complex::new(1.0, 0.0);
        return Ok(one);
    }
    let mut acc = x.clone();
    for _ in 1..power {
        acc = wedge(&acc, x)?;
    }
    Ok(acc)
}
