//! BPSK over AWGN and channel LLRs.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::bits::LlrVector;
use crate::error::{PolarError, Result};

/// Noise variance for BPSK at the given Eb/N0 and code rate.
pub fn noise_variance(ebn0_db: f64, rate: f64) -> Result<f64> {
    let lin = 10f64.powf(ebn0_db / 10.0) * rate;
    if !(lin.is_finite() && lin > 0.0) {
        return Err(PolarError::NonPositiveSnr(lin));
    }
    Ok(1.0 / (2.0 * lin))
}

/// Maps `x` to `1 - 2x`, adds Gaussian noise and returns `2y / σ²`.
pub fn channel_llrs<R: Rng + ?Sized>(
    x: &[u8],
    ebn0_db: f64,
    rate: f64,
    rng: &mut R,
) -> Result<LlrVector> {
    let var = noise_variance(ebn0_db, rate)?;
    let noise = Normal::new(0.0, var.sqrt()).map_err(|e| PolarError::Parse(e.to_string()))?;
    let llr = x
        .iter()
        .map(|&b| {
            let y = 1.0 - 2.0 * b as f64 + noise.sample(rng);
            2.0 * y / var
        })
        .collect();
    LlrVector::new(llr)
}

/// Noise-free LLRs at the same scale as [`channel_llrs`].
pub fn noiseless_llrs(x: &[u8], ebn0_db: f64, rate: f64) -> Result<LlrVector> {
    let var = noise_variance(ebn0_db, rate)?;
    Ok(LlrVector::from_codeword(x, 2.0 / var))
}
