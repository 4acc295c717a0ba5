use std::f64::consts::PI;

use super::rotation::wrap_angle;

/// `f(θ) = a_0 + Σ_{k=1}^{4} a_k cos kθ + b_k sin kθ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigPolynomial {
    pub a: [f64; 5],
    pub b: [f64; 5],
}

/// Sample angles `2πm/9`, `m = 0..9`.
pub fn sample_angles() -> [f64; 9] {
    std::array::from_fn(|m| 2.0 * PI * m as f64 / 9.0)
}

impl TrigPolynomial {
    /// Exact interpolation of a degree-4 trigonometric polynomial from its
    /// values at [`sample_angles`].
    pub fn fit(samples: &[f64; 9]) -> Self {
        let th = sample_angles();
        let mut a = [0.0; 5];
        let mut b = [0.0; 5];
        a[0] = samples.iter().sum::<f64>() / 9.0;
        for k in 1..5 {
            for m in 0..9 {
                let (s, c) = (k as f64 * th[m]).sin_cos();
                a[k] += 2.0 / 9.0 * samples[m] * c;
                b[k] += 2.0 / 9.0 * samples[m] * s;
            }
        }
        TrigPolynomial { a, b }
    }

    pub fn value(&self, theta: f64) -> f64 {
        let mut v = self.a[0];
        for k in 1..5 {
            let (s, c) = (k as f64 * theta).sin_cos();
            v += self.a[k] * c + self.b[k] * s;
        }
        v
    }

    fn derivatives(&self, theta: f64) -> (f64, f64) {
        let (mut d1, mut d2) = (0.0, 0.0);
        for k in 1..5 {
            let kf = k as f64;
            let (s, c) = (kf * theta).sin_cos();
            d1 += kf * (-self.a[k] * s + self.b[k] * c);
            d2 -= kf * kf * (self.a[k] * c + self.b[k] * s);
        }
        (d1, d2)
    }

    /// Global minimiser on `(−π, π]`: a 4096-point scan followed by
    /// safeguarded Newton refinement of every grid local minimum.
    pub fn minimize(&self) -> (f64, f64) {
        const GRID: usize = 4096;
        let h = 2.0 * PI / GRID as f64;
        let vals: Vec<f64> = (0..GRID)
            .map(|k| self.value(-PI + h * (k + 1) as f64))
            .collect();
        let mut best = (0.0, self.value(0.0));
        for k in 0..GRID {
            let prev = vals[(k + GRID - 1) % GRID];
            let next = vals[(k + 1) % GRID];
            if vals[k] > prev || vals[k] > next {
                continue;
            }
            let (lo, hi) = (-PI + h * k as f64, -PI + h * (k + 2) as f64);
            let mut t = -PI + h * (k + 1) as f64;
            for _ in 0..60 {
                let (d1, d2) = self.derivatives(t);
                let step = if d2 > 0.0 {
                    d1 / d2
                } else {
                    d1.signum() * h * 0.25
                };
                let nt = (t - step).clamp(lo, hi);
                if (nt - t).abs() < 1e-15 {
                    break;
                }
                t = nt;
            }
            let v = self.value(t);
            if v < best.1 {
                best = (wrap_angle(t), v);
            }
        }
        best
    }

    /// Minimum of the basin containing `θ = 0`: walk downhill on the scan
    /// grid, then Newton-refine. Never crosses a barrier and never leaves a
    /// stationary `θ = 0`, so orbitals are not swapped.
    pub fn minimize_local(&self) -> (f64, f64) {
        const GRID: usize = 4096;
        let h = 2.0 * PI / GRID as f64;
        // a slope at round-off level is a stationary point (typically a
        // symmetry-forbidden rotation); do not walk off it
        let scale: f64 = self.a.iter().chain(&self.b).skip(1).map(|x| x.abs()).sum();
        let (d1, _) = self.derivatives(0.0);
        if d1.abs() <= 1e-12 * scale.max(1.0) {
            return (0.0, self.value(0.0));
        }
        let dir = -d1.signum();
        let mut t = 0.0;
        let mut v = self.value(0.0);
        for _ in 0..GRID / 2 {
            let nv = self.value(t + dir * h);
            if nv >= v {
                break;
            }
            t += dir * h;
            v = nv;
        }
        let (lo, hi) = (t - h, t + h);
        let mut n = t;
        for _ in 0..60 {
            let (d1, d2) = self.derivatives(n);
            let step = if d2 > 0.0 {
                d1 / d2
            } else {
                d1.signum() * h * 0.25
            };
            let next = (n - step).clamp(lo, hi);
            if (next - n).abs() < 1e-15 {
                break;
            }
            n = next;
        }
        let nv = self.value(n);
        if nv < v {
            (wrap_angle(n), nv)
        } else {
            (wrap_angle(t), v)
        }
    }
}
