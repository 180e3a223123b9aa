//! Parameter estimation from an observed spectrum.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::model::check_beta;
use crate::spectrum::MpLaw;
use crate::{Error, Result};

/// Lower median: the `⌈k/2⌉`-th largest of `k` values.
pub fn lower_median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Some(sorted[sorted.len().div_ceil(2) - 1])
}

/// Median-matching estimate of `σ_B`.
///
/// Under the spectral convention the noise singular values follow
/// `MpLaw(β, σ_B)` directly, so `σ̂_B = y_med / median(MpLaw(β, 1))`.
pub fn estimate_sigma_b(singular_values: &[f64], beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if singular_values.len() < 3 {
        return Err(Error::NoSpectrum("need at least 3 singular values"));
    }
    if singular_values.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::NoSpectrum("singular values must be finite and nonnegative"));
    }
    let y_med = lower_median(singular_values).unwrap_or(0.0);
    if y_med == 0.0 {
        return Err(Error::NoSpectrum("median singular value is zero"));
    }
    Ok(y_med / MpLaw::new(beta, 1.0)?.median())
}

/// `μ̂_A = 1 − zeros / total` for masking modes.
pub fn mu_a_from_zero_count(zeros: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    1.0 - zeros as f64 / total as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationReport {
    pub sigma_b_hat: f64,
    pub mu_a_hat: Option<f64>,
    pub method: String,
    pub inputs: EstimationInputs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimationInputs {
    pub n: usize,
    pub m: usize,
    pub median_singular_value: f64,
}

impl EstimationReport {
    /// Median matching on the spectrum of an `m × n` matrix (`m ≤ n`).
    pub fn from_spectrum(singular_values: &[f64], m: usize, n: usize) -> Result<Self> {
        let beta = m as f64 / n as f64;
        let sigma_b_hat = estimate_sigma_b(singular_values, beta)?;
        Ok(EstimationReport {
            sigma_b_hat,
            mu_a_hat: None,
            method: String::from("median_matching"),
            inputs: EstimationInputs {
                n,
                m,
                median_singular_value: lower_median(singular_values).unwrap_or(0.0),
            },
        })
    }
}
