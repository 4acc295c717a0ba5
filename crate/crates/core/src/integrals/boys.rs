//! Boys function `F_m(x) = ∫₀¹ t^{2m} exp(−x t²) dt`.

use crate::{Error, Result};

pub(crate) const MAX_ORDER: usize = 8;
const SWITCH: f64 = 25.0;

pub fn boys_function(m: usize, x: f64) -> Result<f64> {
    if m > MAX_ORDER {
        return Err(Error::Domain(format!("Boys order {m} exceeds {MAX_ORDER}")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "Boys argument must be finite and non-negative, got {x}"
        )));
    }
    let mut out = [0.0; MAX_ORDER + 1];
    boys_table(m, x, &mut out);
    Ok(out[m])
}

/// Fills `out[0..=m_max]` with `F_0(x) … F_{m_max}(x)`.
///
/// Below the switch point the highest order is seeded by its convergent
/// series and recursed downwards. Above it, `F_0` comes from `erf` and the
/// upward recursion is used instead, which is stable once `x > m`.
pub(crate) fn boys_table(m_max: usize, x: f64, out: &mut [f64]) {
    let ex = (-x).exp();
    if x < SWITCH {
        // F_M(x) = e^{-x} Σ_i (2x)^i / ((2M+1)(2M+3)…(2M+2i+1))
        let mut denom = 2.0 * m_max as f64 + 1.0;
        let mut term = 1.0 / denom;
        let mut sum = term;
        loop {
            denom += 2.0;
            term *= 2.0 * x / denom;
            sum += term;
            if term < sum * 1e-17 {
                break;
            }
        }
        out[m_max] = ex * sum;
        for m in (0..m_max).rev() {
            out[m] = (2.0 * x * out[m + 1] + ex) / (2.0 * m as f64 + 1.0);
        }
    } else {
        let sx = x.sqrt();
        out[0] = 0.5 * (std::f64::consts::PI / x).sqrt() * libm::erf(sx);
        for m in 0..m_max {
            out[m + 1] = ((2.0 * m as f64 + 1.0) * out[m] - ex) / (2.0 * x);
        }
    }
}
