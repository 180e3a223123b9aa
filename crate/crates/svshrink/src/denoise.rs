//! Applying a shrinkage rule to a data matrix.

use faer::Mat;
use svshrink_core::ShrinkageRule;

use crate::linalg::{svd, SvdFactorization};
use crate::{Error, Result};

/// Output of [`denoise`]: the estimate plus what produced it.
#[derive(Debug, Clone)]
pub struct Denoised {
    pub estimate: Mat<f64>,
    /// SVD of the (possibly transposed, so that `m ≤ n`) data.
    pub svd: SvdFactorization,
    /// Shrunk coefficient for each data singular value.
    pub coefficients: Vec<f64>,
    pub transposed: bool,
}

impl Denoised {
    pub fn kept_rank(&self) -> usize {
        self.coefficients.iter().filter(|c| **c != 0.0).count()
    }
}

/// Reconstructs `Σ η(y_i) u_i v_i'` from an existing factorization.
pub fn shrink_factorization(fact: &SvdFactorization, rule: &ShrinkageRule) -> (Mat<f64>, Vec<f64>) {
    let coefficients = rule.shrink(&fact.singular_values);
    (fact.reconstruct(&coefficients), coefficients)
}

/// SVD, shrink, reconstruct. Wide orientation is enforced internally.
pub fn denoise(y: &Mat<f64>, rule: &ShrinkageRule) -> Result<Denoised> {
    if y.nrows() == 0 || y.ncols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let transposed = y.nrows() > y.ncols();
    let fact = if transposed {
        svd(&y.transpose().to_owned())?
    } else {
        svd(y)?
    };
    let (estimate, coefficients) = shrink_factorization(&fact, rule);
    let estimate = if transposed {
        estimate.transpose().to_owned()
    } else {
        estimate
    };
    Ok(Denoised {
        estimate,
        svd: fact,
        coefficients,
        transposed,
    })
}

/// The estimate `X̂` of `rule` applied to `y`.
pub fn apply_rule(y: &Mat<f64>, rule: &ShrinkageRule) -> Result<Mat<f64>> {
    Ok(denoise(y, rule)?.estimate)
}
