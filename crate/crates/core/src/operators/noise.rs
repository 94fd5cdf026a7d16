//! Seeded noise generation and noise-to-signal scaling used by the
//! experiment drivers.

use crate::error::{Error, Result};
use crate::linalg::{derived_rng, norm2};
use rand::Rng;

/// i.i.d. Laplace(0, scale) samples via inverse-CDF, deterministic per
/// seed.
pub fn sample_laplace_noise(len: usize, scale: f64, seed: u64) -> Result<Vec<f64>> {
    if len == 0 {
        return Err(Error::config("noise length must be at least 1"));
    }
    if scale <= 0.0 {
        return Err(Error::config(format!("Laplace scale must be positive, got {scale}")));
    }
    let mut rng = derived_rng(seed, &[0x6c61_706c]);
    Ok((0..len)
        .map(|_| {
            let u: f64 = rng.gen_range(-0.5..0.5);
            -scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
        })
        .collect())
}

/// Rescales e so that ‖e'‖₂ / ‖Ax‖₂ equals `ratio` exactly.
pub fn scale_noise_to_ratio(e: &[f64], ax: &[f64], ratio: f64) -> Result<Vec<f64>> {
    let ne = norm2(e);
    let nax = norm2(ax);
    if ne == 0.0 || nax == 0.0 {
        return Err(Error::config("noise scaling needs nonzero-norm inputs"));
    }
    let factor = ratio * nax / ne;
    Ok(e.iter().map(|&v| v * factor).collect())
}
