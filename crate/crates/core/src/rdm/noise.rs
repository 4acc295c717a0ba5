use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::{Complex, Error, Result};

use super::tensor::Rdm;

/// Adds Gaussian noise of standard deviation `1/√shots` to the independent
/// elements of `rdm` (upper triangle over sorted tuples; real diagonal) and
/// restores Hermiticity. Antisymmetry is structural in the storage.
///
/// Tensors flagged as vanishing are returned unchanged: they are known to
/// be zero without measurement.
pub fn inject_shot_noise(rdm: &Rdm, shots: f64, seed: u64) -> Result<Rdm> {
    if !(shots > 0.0) {
        return Err(Error::Domain(format!(
            "shot count must be positive, got {shots}"
        )));
    }
    let mut out = rdm.clone();
    if rdm.vanishes {
        return Ok(out);
    }
    let sigma = 1.0 / shots.sqrt();
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::Domain(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = out.dim();
    for r in 0..dim {
        let d = out.at(r, r);
        *out.at_mut(r, r) = Complex::new(d.re + normal.sample(&mut rng), 0.0);
        for c in r + 1..dim {
            let v = 0.5 * (out.at(r, c) + out.at(c, r).conj())
                + Complex::new(normal.sample(&mut rng), normal.sample(&mut rng));
            *out.at_mut(r, c) = v;
            *out.at_mut(c, r) = v.conj();
        }
    }
    Ok(out)
}
