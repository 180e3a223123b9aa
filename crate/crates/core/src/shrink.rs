//! Singular value shrinkage rules.
//!
//! All rules return estimates in signal units: the `1/μ_A` rescaling that
//! undoes `E[Y] = μ_A X` is applied here, so callers reconstruct
//! `X̂ = Σ η(y_i) u_i v_i'` without touching `μ_A` themselves.

use alloc::vec::Vec;

use libm::sqrt;
use serde::{Deserialize, Serialize};

use crate::model::EffectiveParams;
use crate::spectrum::{bulk_edge, displace};
use crate::{Error, Result};

/// `c = √(1 + β + √(1 + 14β + β²)) / √2`.
pub(crate) fn design_ratio(beta: f64) -> f64 {
    sqrt((1.0 + beta + sqrt(1.0 + 14.0 * beta + beta * beta)) / 2.0)
}

/// Asymptotically optimal shrinker.
///
/// Degenerate `σ_B = 0` passes the value through as `y / μ_A`.
pub fn optimal_shrinker(y: f64, params: &EffectiveParams) -> f64 {
    let sigma = params.sigma_b();
    if sigma == 0.0 {
        return y / params.mu_a;
    }
    if y < bulk_edge(params) {
        return 0.0;
    }
    let beta = params.beta;
    let rb = sqrt(beta);
    let y2 = (y / sigma) * (y / sigma);
    // ((y/σ)² − β − 1)² − 4β, factored so it vanishes exactly at the edge
    let radicand = ((y2 - (1.0 + rb) * (1.0 + rb)) * (y2 - (1.0 - rb) * (1.0 - rb))).max(0.0);
    sigma * sigma / (y * params.mu_a) * sqrt(radicand)
}

/// Optimal hard threshold `λ* = σ_B √((c + 1/c)(c + β/c))`; 0 when noiseless.
pub fn optimal_threshold(params: &EffectiveParams) -> f64 {
    let c = design_ratio(params.beta);
    params.sigma_b() * sqrt((c + 1.0 / c) * (c + params.beta / c))
}

/// Signal level `x^est = σ_B c / μ_A` whose displacement is `λ*`; at this
/// level keeping and killing the component carry the same risk.
pub fn threshold_design_point(params: &EffectiveParams) -> f64 {
    params.noise_unit() * design_ratio(params.beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    OptimalShrinker,
    /// Keep values strictly above the threshold.
    HardThreshold(f64),
    /// Keep the top `r` values regardless of magnitude.
    Tsvd(usize),
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShrinkageRule {
    pub kind: RuleKind,
    pub params: EffectiveParams,
}

impl ShrinkageRule {
    pub fn new(kind: RuleKind, params: EffectiveParams) -> Result<Self> {
        params.validate()?;
        if let RuleKind::HardThreshold(lambda) = kind {
            let edge = bulk_edge(&params);
            if lambda.is_nan() || lambda < edge {
                return Err(Error::ThresholdBelowBulk { lambda, edge });
            }
        }
        Ok(ShrinkageRule { kind, params })
    }

    pub fn optimal_shrinker(params: EffectiveParams) -> Result<Self> {
        Self::new(RuleKind::OptimalShrinker, params)
    }

    pub fn optimal_threshold(params: EffectiveParams) -> Result<Self> {
        Self::new(RuleKind::HardThreshold(optimal_threshold(&params)), params)
    }

    /// Hard threshold at the bulk edge, the asymptotic equivalent of TSVD.
    pub fn bulk_edge_threshold(params: EffectiveParams) -> Result<Self> {
        Self::new(RuleKind::HardThreshold(bulk_edge(&params)), params)
    }

    pub fn zero(params: EffectiveParams) -> Self {
        ShrinkageRule {
            kind: RuleKind::Zero,
            params,
        }
    }

    /// Scalar form of the rule; `None` for rank-based TSVD.
    pub fn eta(&self, y: f64) -> Option<f64> {
        match self.kind {
            RuleKind::OptimalShrinker => Some(optimal_shrinker(y, &self.params)),
            RuleKind::HardThreshold(lambda) => Some(if y > lambda { y / self.params.mu_a } else { 0.0 }),
            RuleKind::Tsvd(_) => None,
            RuleKind::Zero => Some(0.0),
        }
    }

    /// Maps a descending spectrum to the shrunk coefficients.
    pub fn shrink(&self, values: &[f64]) -> Vec<f64> {
        match self.kind {
            RuleKind::Tsvd(rank) => values
                .iter()
                .enumerate()
                .map(|(i, &y)| if i < rank { y / self.params.mu_a } else { 0.0 })
                .collect(),
            _ => values.iter().map(|&y| self.eta(y).unwrap_or(0.0)).collect(),
        }
    }
}

/// Consistency check used by tests: `λ*` is the displaced design point.
pub fn displaced_design_point(params: &EffectiveParams) -> f64 {
    displace(threshold_design_point(params), params)
}
