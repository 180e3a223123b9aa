//! Sampling contaminated matrices `Y = A ⊙ X + B`.

use faer::Mat;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use svshrink_core::{Defect, EffectiveParams, EntryModel, ModeDescriptor};

use crate::Result;

/// Draws one `(a, b·√n)` pair.
///
/// The number of variates drawn depends only on the mode's structure, never
/// on the outcome of the mask, so two modes with the same components and
/// different levels consume the random stream identically.
pub fn draw_entry<R: Rng + ?Sized>(model: &EntryModel, rng: &mut R) -> (f64, f64) {
    let clean = match model.defect {
        Some(_) => rng.random::<f64>() < model.kappa,
        None => true,
    };
    let g = match model.multiplicative_sigma {
        Some(s) => 1.0 + s * rng.sample::<f64, _>(StandardNormal),
        None => 1.0,
    };
    let z = if model.additive_sigma > 0.0 {
        model.additive_sigma * rng.sample::<f64, _>(StandardNormal)
    } else {
        0.0
    };
    let w = match model.defect {
        Some(Defect::Outlier) | Some(Defect::Corruption) => model.tau * rng.sample::<f64, _>(StandardNormal),
        _ => 0.0,
    };
    if clean {
        return (g, z);
    }
    match model.defect {
        Some(Defect::Missing) => (0.0, 0.0),
        Some(Defect::Outlier) => (g, w),
        Some(Defect::Corruption) | None => (0.0, w),
    }
}

/// Applies `mode` entrywise to `x`.
///
/// Noise is scaled by `1/√n` with `n` the larger dimension, so the bulk
/// edge of the result is `σ_B (1 + √β)` whatever the orientation.
pub fn contaminate<R: Rng + ?Sized>(x: &Mat<f64>, mode: &ModeDescriptor, rng: &mut R) -> Result<Mat<f64>> {
    let model = mode.entry_model()?;
    let scale = 1.0 / (x.nrows().max(x.ncols()) as f64).sqrt();
    let mut y = Mat::zeros(x.nrows(), x.ncols());
    for j in 0..x.ncols() {
        for i in 0..x.nrows() {
            let (a, b) = draw_entry(&model, rng);
            y[(i, j)] = a * x[(i, j)] + b * scale;
        }
    }
    Ok(y)
}

/// Monte Carlo moments of the `A` and `B` fields with standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMoments {
    pub params: EffectiveParams,
    pub se_mu_a: f64,
    pub se_sigma_a2: f64,
    pub se_sigma_b2: f64,
}

/// Brute-force moment estimate by sampling the fields directly.
///
/// `params` is filled without validation so that degenerate modes
/// (`μ_A = 0`) can still be inspected.
pub fn empirical_moments<R: Rng + ?Sized>(
    mode: &ModeDescriptor,
    beta: f64,
    trials: usize,
    rng: &mut R,
) -> Result<EmpiricalMoments> {
    let model = mode.entry_model()?;
    let n = trials.max(2) as f64;
    let mut samples = Vec::with_capacity(trials);
    for _ in 0..trials.max(2) {
        samples.push(draw_entry(&model, rng));
    }
    let mean = |f: &dyn Fn(&(f64, f64)) -> f64| samples.iter().map(f).sum::<f64>() / n;
    let mu_a = mean(&|s| s.0);
    let var_a = samples.iter().map(|s| (s.0 - mu_a).powi(2)).sum::<f64>() / (n - 1.0);
    let mu_b = mean(&|s| s.1);
    let var_b = samples.iter().map(|s| (s.1 - mu_b).powi(2)).sum::<f64>() / (n - 1.0);
    let m4_a = mean(&|s| (s.0 - mu_a).powi(4));
    let m4_b = mean(&|s| (s.1 - mu_b).powi(4));
    Ok(EmpiricalMoments {
        params: EffectiveParams {
            mu_a,
            sigma_a2: var_a,
            sigma_b2: var_b,
            beta,
        },
        se_mu_a: (var_a / n).sqrt(),
        se_sigma_a2: ((m4_a - var_a * var_a).max(0.0) / n).sqrt(),
        se_sigma_b2: ((m4_b - var_b * var_b).max(0.0) / n).sqrt(),
    })
}

pub fn empirical_params<R: Rng + ?Sized>(
    mode: &ModeDescriptor,
    beta: f64,
    trials: usize,
    rng: &mut R,
) -> Result<EffectiveParams> {
    Ok(empirical_moments(mode, beta, trials, rng)?.params)
}
