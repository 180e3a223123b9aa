//! Parameter estimation from a data matrix.

use faer::Mat;
use svshrink_core::{mu_a_from_zero_count, EstimationReport};

use crate::linalg::singular_values;
use crate::Result;

/// Fraction of nonzero entries, the mean of the mask for missing/corruption
/// modes.
pub fn estimate_mu_a_missing(y: &Mat<f64>) -> f64 {
    let mut zeros = 0;
    for j in 0..y.ncols() {
        for i in 0..y.nrows() {
            if y[(i, j)] == 0.0 {
                zeros += 1;
            }
        }
    }
    mu_a_from_zero_count(zeros, y.nrows() * y.ncols())
}

/// Median-matching `σ̂_B`, plus `μ̂_A` from the zero count when
/// `masked` is set.
pub fn estimate(y: &Mat<f64>, masked: bool) -> Result<EstimationReport> {
    let values = singular_values(y)?;
    let (m, n) = (y.nrows().min(y.ncols()), y.nrows().max(y.ncols()));
    let mut report = EstimationReport::from_spectrum(&values, m, n)?;
    if masked {
        report.mu_a_hat = Some(estimate_mu_a_missing(y));
        report.method = "median_matching+zero_fraction".to_string();
    }
    Ok(report)
}
