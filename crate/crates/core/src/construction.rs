//! Reliability orderings used to pick the information set.
//!
//! Each method scores every synthetic channel (lower score = more
//! reliable). Methods are registered by name so the CLI can select them.

use crate::error::{PolarError, Result};

pub trait Construction: Send + Sync {
    fn name(&self) -> &'static str;

    fn default_design_param(&self) -> f64;

    /// One score per input index, in natural order.
    fn scores(&self, n_len: usize, design_param: f64) -> Result<Vec<f64>>;
}

/// Bhattacharyya-parameter recursion on an erasure-channel proxy.
/// The design parameter is the erasure probability of the base channel.
/// Scores are `ln Z` so large blocklengths do not underflow.
pub struct Bhattacharyya;

impl Construction for Bhattacharyya {
    fn name(&self) -> &'static str {
        "bhattacharyya"
    }

    fn default_design_param(&self) -> f64 {
        0.5
    }

    fn scores(&self, n_len: usize, z0: f64) -> Result<Vec<f64>> {
        if !(z0 > 0.0 && z0 < 1.0) {
            return Err(PolarError::InvalidDesignParam(z0, self.name().into()));
        }
        let mut ln_z = vec![z0.ln()];
        while ln_z.len() < n_len {
            ln_z = ln_z
                .iter()
                .flat_map(|&lz| {
                    // 2Z - Z^2 = Z(2 - Z) for the degraded child, Z^2 for the upgraded one.
                    [lz + (2.0 - lz.exp()).ln(), 2.0 * lz]
                })
                .collect();
        }
        Ok(ln_z)
    }
}

/// Gaussian approximation of density evolution on BPSK/AWGN.
/// The design parameter is the per-code-bit Es/N0 in dB.
pub struct GaussianApprox;

const PHI_SWITCH: f64 = 10.0;

fn ln_phi(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < PHI_SWITCH {
        (-0.4527 * x.powf(0.86) + 0.0218).min(0.0)
    } else {
        0.5 * (std::f64::consts::PI / x).ln() - x / 4.0 + (1.0 - 10.0 / (7.0 * x)).ln()
    }
}

fn ln_phi_inv(ln_y: f64) -> f64 {
    if ln_y >= 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while ln_phi(hi) > ln_y {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ln_phi(mid) > ln_y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl Construction for GaussianApprox {
    fn name(&self) -> &'static str {
        "ga"
    }

    fn default_design_param(&self) -> f64 {
        0.0
    }

    fn scores(&self, n_len: usize, esn0_db: f64) -> Result<Vec<f64>> {
        if !esn0_db.is_finite() {
            return Err(PolarError::InvalidDesignParam(esn0_db, self.name().into()));
        }
        let sigma2 = 1.0 / (2.0 * 10f64.powf(esn0_db / 10.0));
        let mut mean = vec![2.0 / sigma2];
        while mean.len() < n_len {
            mean = mean
                .iter()
                .flat_map(|&m| {
                    let lp = ln_phi(m);
                    // 1 - (1 - phi)^2 = phi (2 - phi)
                    let worse = ln_phi_inv(lp + (2.0 - lp.exp()).ln());
                    [worse, 2.0 * m]
                })
                .collect();
        }
        Ok(mean.into_iter().map(|m| -m).collect())
    }
}

pub fn construction_names() -> &'static [&'static str] {
    &["bhattacharyya", "ga"]
}

pub fn construction_by_name(name: &str) -> Result<Box<dyn Construction>> {
    match name {
        "bhattacharyya" | "bhatt" => Ok(Box::new(Bhattacharyya)),
        "ga" | "gaussian" => Ok(Box::new(GaussianApprox)),
        other => Err(PolarError::UnknownConstruction(other.to_string())),
    }
}
