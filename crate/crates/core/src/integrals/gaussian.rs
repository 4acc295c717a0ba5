//! McMurchie–Davidson integrals over contracted Cartesian Gaussians.

use nalgebra::DMatrix;

use super::basis::BasisSet;
use super::boys::{boys_table, MAX_ORDER};
use super::{Eri, Geometry};
use crate::Result;

#[cfg(feature = "rayon")]
use rayon::prelude::*;

use std::f64::consts::PI;

/// AO-basis integrals of a molecule.
#[derive(Debug, Clone)]
pub struct AoIntegrals {
    pub overlap: DMatrix<f64>,
    pub kinetic: DMatrix<f64>,
    pub nuclear: DMatrix<f64>,
    pub eri: Eri,
    pub e_nuc: f64,
    /// Atom index of each basis function.
    pub function_atoms: Vec<usize>,
}

impl AoIntegrals {
    pub fn n_basis(&self) -> usize {
        self.overlap.nrows()
    }

    pub fn core_hamiltonian(&self) -> DMatrix<f64> {
        &self.kinetic + &self.nuclear
    }
}

#[derive(Debug, Clone)]
struct BasisFunction {
    center: [f64; 3],
    lmn: [u32; 3],
    /// `(exponent, coefficient including primitive and contraction normalization)`.
    prims: Vec<(f64, f64)>,
}

fn double_factorial(n: i64) -> f64 {
    if n <= 0 {
        1.0
    } else {
        (1..=n).rev().step_by(2).map(|k| k as f64).product()
    }
}

fn primitive_norm(alpha: f64, lmn: [u32; 3]) -> f64 {
    let l = (lmn[0] + lmn[1] + lmn[2]) as i32;
    let df: f64 = lmn
        .iter()
        .map(|&k| double_factorial(2 * k as i64 - 1))
        .product();
    (2.0 * alpha / PI).powf(0.75) * (4.0 * alpha).powf(l as f64 / 2.0) / df.sqrt()
}

fn build_functions(
    geometry: &Geometry,
    basis: &BasisSet,
) -> Result<(Vec<BasisFunction>, Vec<usize>)> {
    let mut funcs = Vec::new();
    let mut atoms = Vec::new();
    for (ia, atom) in geometry.atoms.iter().enumerate() {
        for shell in basis.shells_for(&atom.symbol)? {
            for &lmn in shell.angular.cartesians() {
                let prims: Vec<(f64, f64)> = shell
                    .primitives
                    .iter()
                    .map(|&(a, c)| (a, c * primitive_norm(a, lmn)))
                    .collect();
                let mut f = BasisFunction {
                    center: atom.position,
                    lmn,
                    prims,
                };
                let s = overlap_fn(&f, &f);
                let scale = 1.0 / s.sqrt();
                f.prims.iter_mut().for_each(|p| p.1 *= scale);
                funcs.push(f);
                atoms.push(ia);
            }
        }
    }
    Ok((funcs, atoms))
}

/// Hermite expansion coefficients `E^{ij}_t` for one Cartesian direction,
/// stored as `e[i][j][t]` with `i ≤ imax`, `j ≤ jmax`, `t ≤ i + j`.
#[derive(Clone)]
struct Hermite1d {
    jdim: usize,
    tdim: usize,
    data: Vec<f64>,
}

impl Hermite1d {
    fn new(imax: usize, jmax: usize, a: f64, b: f64, xab: f64) -> Self {
        let p = a + b;
        let mu = a * b / p;
        let xpa = -b / p * xab;
        let xpb = a / p * xab;
        let jdim = jmax + 1;
        let tdim = imax + jmax + 2;
        let mut h = Hermite1d {
            jdim,
            tdim,
            data: vec![0.0; (imax + 1) * jdim * tdim],
        };
        h.set(0, 0, 0, (-mu * xab * xab).exp());
        let inv2p = 0.5 / p;
        for i in 0..=imax {
            for j in 0..=jmax {
                if i == 0 && j == 0 {
                    continue;
                }
                for t in 0..=(i + j) {
                    let (pi, pj, x) = if j > 0 {
                        (i, j - 1, xpb)
                    } else {
                        (i - 1, j, xpa)
                    };
                    let mut v = x * h.get(pi, pj, t) + (t + 1) as f64 * h.get(pi, pj, t + 1);
                    if t > 0 {
                        v += inv2p * h.get(pi, pj, t - 1);
                    }
                    h.set(i, j, t, v);
                }
            }
        }
        h
    }

    #[inline]
    fn get(&self, i: usize, j: usize, t: usize) -> f64 {
        if t >= self.tdim {
            return 0.0;
        }
        self.data[(i * self.jdim + j) * self.tdim + t]
    }

    fn set(&mut self, i: usize, j: usize, t: usize, v: f64) {
        self.data[(i * self.jdim + j) * self.tdim + t] = v;
    }
}

fn overlap_prim(a: f64, ca: &[f64; 3], la: [u32; 3], b: f64, cb: &[f64; 3], lb: [u32; 3]) -> f64 {
    let p = a + b;
    let mut s = (PI / p).powf(1.5);
    for k in 0..3 {
        let e = Hermite1d::new(la[k] as usize, lb[k] as usize, a, b, ca[k] - cb[k]);
        s *= e.get(la[k] as usize, lb[k] as usize, 0);
    }
    s
}

fn overlap_fn(f: &BasisFunction, g: &BasisFunction) -> f64 {
    let mut s = 0.0;
    for &(a, ca) in &f.prims {
        for &(b, cb) in &g.prims {
            s += ca * cb * overlap_prim(a, &f.center, f.lmn, b, &g.center, g.lmn);
        }
    }
    s
}

fn kinetic_prim(a: f64, ca: &[f64; 3], la: [u32; 3], b: f64, cb: &[f64; 3], lb: [u32; 3]) -> f64 {
    let ltot = (lb[0] + lb[1] + lb[2]) as f64;
    let mut t = b * (2.0 * ltot + 3.0) * overlap_prim(a, ca, la, b, cb, lb);
    for k in 0..3 {
        let mut up = lb;
        up[k] += 2;
        t -= 2.0 * b * b * overlap_prim(a, ca, la, b, cb, up);
        if lb[k] >= 2 {
            let mut dn = lb;
            dn[k] -= 2;
            t -= 0.5 * (lb[k] * (lb[k] - 1)) as f64 * overlap_prim(a, ca, la, b, cb, dn);
        }
    }
    t
}

/// Hermite Coulomb integrals `R^0_{tuv}` for `t + u + v ≤ lmax`.
struct HermiteCoulomb {
    dim: usize,
    data: Vec<f64>,
}

impl HermiteCoulomb {
    fn new(lmax: usize, p: f64, pc: [f64; 3]) -> Self {
        let r2 = pc[0] * pc[0] + pc[1] * pc[1] + pc[2] * pc[2];
        let mut boys = [0.0; MAX_ORDER + 1];
        boys_table(lmax, p * r2, &mut boys);
        let dim = lmax + 1;
        // r[n][t][u][v]
        let idx = |n: usize, t: usize, u: usize, v: usize| ((n * dim + t) * dim + u) * dim + v;
        let mut r = vec![0.0; dim * dim * dim * dim];
        let mut fac = 1.0;
        for n in 0..=lmax {
            r[idx(n, 0, 0, 0)] = fac * boys[n];
            fac *= -2.0 * p;
        }
        for l in 1..=lmax {
            for n in 0..=(lmax - l) {
                for t in 0..=l {
                    for u in 0..=(l - t) {
                        let v = l - t - u;
                        let val = if t > 0 {
                            let mut x = pc[0] * r[idx(n + 1, t - 1, u, v)];
                            if t > 1 {
                                x += (t - 1) as f64 * r[idx(n + 1, t - 2, u, v)];
                            }
                            x
                        } else if u > 0 {
                            let mut x = pc[1] * r[idx(n + 1, t, u - 1, v)];
                            if u > 1 {
                                x += (u - 1) as f64 * r[idx(n + 1, t, u - 2, v)];
                            }
                            x
                        } else {
                            let mut x = pc[2] * r[idx(n + 1, t, u, v - 1)];
                            if v > 1 {
                                x += (v - 1) as f64 * r[idx(n + 1, t, u, v - 2)];
                            }
                            x
                        };
                        r[idx(n, t, u, v)] = val;
                    }
                }
            }
        }
        let data = (0..dim * dim * dim).map(|k| r[k]).collect();
        HermiteCoulomb { dim, data }
    }

    #[inline]
    fn get(&self, t: usize, u: usize, v: usize) -> f64 {
        self.data[(t * self.dim + u) * self.dim + v]
    }
}

/// Product data of a primitive pair.
struct PrimPair {
    p: f64,
    center: [f64; 3],
    coef: f64,
    e: [Hermite1d; 3],
}

struct FnPair {
    lmn_a: [u32; 3],
    lmn_b: [u32; 3],
    prims: Vec<PrimPair>,
}

fn make_pair(f: &BasisFunction, g: &BasisFunction) -> FnPair {
    let mut prims = Vec::with_capacity(f.prims.len() * g.prims.len());
    for &(a, ca) in &f.prims {
        for &(b, cb) in &g.prims {
            let p = a + b;
            let center = [
                (a * f.center[0] + b * g.center[0]) / p,
                (a * f.center[1] + b * g.center[1]) / p,
                (a * f.center[2] + b * g.center[2]) / p,
            ];
            let e = [0, 1, 2].map(|k| {
                Hermite1d::new(
                    f.lmn[k] as usize,
                    g.lmn[k] as usize,
                    a,
                    b,
                    f.center[k] - g.center[k],
                )
            });
            prims.push(PrimPair {
                p,
                center,
                coef: ca * cb,
                e,
            });
        }
    }
    FnPair {
        lmn_a: f.lmn,
        lmn_b: g.lmn,
        prims,
    }
}

/// Non-zero Hermite products `E_t E_u E_v` of one primitive pair.
fn hermite_terms(pair: &FnPair, pp: &PrimPair) -> Vec<(usize, usize, usize, f64)> {
    let la = pair.lmn_a.map(|x| x as usize);
    let lb = pair.lmn_b.map(|x| x as usize);
    let mut out = Vec::new();
    for t in 0..=(la[0] + lb[0]) {
        let et = pp.e[0].get(la[0], lb[0], t);
        for u in 0..=(la[1] + lb[1]) {
            let eu = pp.e[1].get(la[1], lb[1], u);
            for v in 0..=(la[2] + lb[2]) {
                let ev = pp.e[2].get(la[2], lb[2], v);
                out.push((t, u, v, et * eu * ev));
            }
        }
    }
    out
}

fn nuclear_fn(pair: &FnPair, geometry: &Geometry) -> f64 {
    let l = (pair.lmn_a.iter().sum::<u32>() + pair.lmn_b.iter().sum::<u32>()) as usize;
    let mut v = 0.0;
    for pp in &pair.prims {
        let terms = hermite_terms(pair, pp);
        for atom in &geometry.atoms {
            let pc = [0, 1, 2].map(|k| pp.center[k] - atom.position[k]);
            let r = HermiteCoulomb::new(l, pp.p, pc);
            let s: f64 = terms.iter().map(|&(t, u, w, e)| e * r.get(t, u, w)).sum();
            v -= atom.charge * pp.coef * 2.0 * PI / pp.p * s;
        }
    }
    v
}

fn eri_fn(bra: &FnPair, ket: &FnPair) -> f64 {
    let lbra = (bra.lmn_a.iter().sum::<u32>() + bra.lmn_b.iter().sum::<u32>()) as usize;
    let lket = (ket.lmn_a.iter().sum::<u32>() + ket.lmn_b.iter().sum::<u32>()) as usize;
    let pref = 2.0 * PI.powf(2.5);
    let mut total = 0.0;
    for pb in &bra.prims {
        let tb = hermite_terms(bra, pb);
        for pk in &ket.prims {
            let tk = hermite_terms(ket, pk);
            let alpha = pb.p * pk.p / (pb.p + pk.p);
            let pq = [0, 1, 2].map(|k| pb.center[k] - pk.center[k]);
            let r = HermiteCoulomb::new(lbra + lket, alpha, pq);
            let mut s = 0.0;
            for &(t, u, v, e1) in &tb {
                for &(tau, nu, phi, e2) in &tk {
                    let sign = if (tau + nu + phi) % 2 == 0 { 1.0 } else { -1.0 };
                    s += e1 * sign * e2 * r.get(t + tau, u + nu, v + phi);
                }
            }
            total += pb.coef * pk.coef * pref / (pb.p * pk.p * (pb.p + pk.p).sqrt()) * s;
        }
    }
    total
}

/// Overlap, kinetic, nuclear-attraction and electron-repulsion integrals.
///
/// Basis functions are ordered by atom, then by shell in file order, with p
/// components in `x, y, z` order. Each contracted function is normalized.
pub fn compute_ao_integrals(geometry: &Geometry, basis: &BasisSet) -> Result<AoIntegrals> {
    let (funcs, function_atoms) = build_functions(geometry, basis)?;
    let n = funcs.len();
    let mut overlap = DMatrix::zeros(n, n);
    let mut kinetic = DMatrix::zeros(n, n);
    let mut nuclear = DMatrix::zeros(n, n);

    let pair_index: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
    let pairs: Vec<FnPair> = crate::if_rayon!(
        pair_index
            .par_iter()
            .map(|&(i, j)| make_pair(&funcs[i], &funcs[j]))
            .collect(),
        pair_index
            .iter()
            .map(|&(i, j)| make_pair(&funcs[i], &funcs[j]))
            .collect()
    );

    for (k, &(i, j)) in pair_index.iter().enumerate() {
        let (f, g) = (&funcs[i], &funcs[j]);
        let mut s = 0.0;
        let mut t = 0.0;
        for &(a, ca) in &f.prims {
            for &(b, cb) in &g.prims {
                s += ca * cb * overlap_prim(a, &f.center, f.lmn, b, &g.center, g.lmn);
                t += ca * cb * kinetic_prim(a, &f.center, f.lmn, b, &g.center, g.lmn);
            }
        }
        let v = nuclear_fn(&pairs[k], geometry);
        for (m, val) in [(&mut overlap, s), (&mut kinetic, t), (&mut nuclear, v)] {
            m[(i, j)] = val;
            m[(j, i)] = val;
        }
    }

    // unique (ij|kl) with ij >= kl; each row of the pair list is one task
    let npair = pair_index.len();
    let rows: Vec<Vec<f64>> = crate::if_rayon!(
        (0..npair)
            .into_par_iter()
            .map(|a| (0..=a).map(|b| eri_fn(&pairs[a], &pairs[b])).collect())
            .collect(),
        (0..npair)
            .map(|a| (0..=a).map(|b| eri_fn(&pairs[a], &pairs[b])).collect())
            .collect()
    );
    let mut eri = Eri::zeros(n);
    for (a, row) in rows.iter().enumerate() {
        let (i, j) = pair_index[a];
        for (b, &v) in row.iter().enumerate() {
            let (k, l) = pair_index[b];
            eri.set_sym(i, j, k, l, v);
        }
    }

    Ok(AoIntegrals {
        overlap,
        kinetic,
        nuclear,
        eri,
        e_nuc: geometry.nuclear_repulsion(),
        function_atoms,
    })
}
