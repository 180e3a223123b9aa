//! Closed-form asymptotic mean square error.
//!
//! The asymptotic loss decomposes over the signal singular values, so every
//! quantity here is a per-value term `L1(rule | x)` plus bookkeeping.

use alloc::vec::Vec;

use libm::{exp, fabs, log, sqrt};
use serde::{Deserialize, Serialize};

use crate::model::EffectiveParams;
use crate::shrink::{optimal_threshold, threshold_design_point, RuleKind};
use crate::spectrum::{bulk_edge, displace, transition_level};
use crate::{Error, Result};

/// Estimators compared by the critical-level and worst-case results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    OptimalShrinker,
    OptimalThreshold,
    /// Hard threshold at the bulk edge.
    Tsvd,
}

/// Per-value AMSE of the optimal shrinker.
pub fn shrinker_amse(x: f64, params: &EffectiveParams) -> f64 {
    if params.is_degenerate() {
        return 0.0;
    }
    let beta = params.beta;
    let t = fabs(params.mu_a) * x / params.sigma_b();
    let t2 = t * t;
    let t4 = t2 * t2;
    if t4 < beta {
        return x * x;
    }
    let captured = (t4 - beta) * (t4 - beta) / ((t4 + beta * t2) * (t4 + t2));
    (x * x * (1.0 - captured)).max(0.0)
}

/// Risk of keeping the component `y u v' / μ_A` whose signal level is `x`.
///
/// `(σ_B/μ_A)² ((t + 1/t)(t + β/t) − (t² − 2β/t²))`, which expands to
/// `(σ_B/μ_A)² (1 + β + 3β/t²)`.
pub fn threshold_keep_branch(x: f64, params: &EffectiveParams) -> f64 {
    if params.is_degenerate() {
        return 0.0;
    }
    let t = fabs(params.mu_a) * x / params.sigma_b();
    let unit = params.noise_unit();
    unit * unit * (1.0 + params.beta + 3.0 * params.beta / (t * t))
}

/// Per-value AMSE of hard thresholding at `lambda`.
///
/// The component is kept iff its displaced value exceeds `lambda`.
pub fn threshold_amse(x: f64, lambda: f64, params: &EffectiveParams) -> Result<f64> {
    let edge = bulk_edge(params);
    if lambda.is_nan() || lambda < edge * (1.0 - 1e-12) {
        return Err(Error::ThresholdBelowBulk { lambda, edge });
    }
    if displace(x, params) > lambda {
        Ok(threshold_keep_branch(x, params))
    } else {
        Ok(x * x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskProfile {
    /// `(x_i, L1(rule | x_i))`.
    pub per_value: Vec<(f64, f64)>,
    pub total: f64,
    /// Whether each value sits above the detectability transition.
    pub detectable: Vec<bool>,
}

/// Checks that `x` is positive, finite and strictly decreasing.
pub fn check_signal(x: &[f64]) -> Result<()> {
    let ordered = x.windows(2).all(|w| w[0] > w[1]);
    if x.is_empty() || !ordered || x.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(Error::UnorderedSignal);
    }
    Ok(())
}

/// Asymptotic loss of `rule` on a signal with singular values `x`.
///
/// TSVD is scored as hard thresholding at the bulk edge.
pub fn total_amse(x: &[f64], rule: RuleKind, params: &EffectiveParams) -> Result<RiskProfile> {
    params.validate()?;
    check_signal(x)?;
    let per_value = x
        .iter()
        .map(|&xi| {
            let l1 = match rule {
                RuleKind::OptimalShrinker => shrinker_amse(xi, params),
                RuleKind::HardThreshold(lambda) => threshold_amse(xi, lambda, params)?,
                RuleKind::Tsvd(_) => threshold_amse(xi, bulk_edge(params), params)?,
                RuleKind::Zero => xi * xi,
            };
            Ok((xi, l1))
        })
        .collect::<Result<Vec<_>>>()?;
    let level = transition_level(params);
    Ok(RiskProfile {
        total: per_value.iter().map(|(_, l)| l).sum(),
        detectable: x.iter().map(|&xi| params.is_degenerate() || xi > level).collect(),
        per_value,
    })
}

/// Smallest signal level at which the estimator beats the zero rule.
///
/// Thresholding at any `λ ≤ λ*` (TSVD included) only starts to pay off at
/// the design point, where the keep branch drops below `x²`.
pub fn critical_level(estimator: Estimator, params: &EffectiveParams) -> f64 {
    match estimator {
        Estimator::OptimalShrinker => transition_level(params),
        Estimator::OptimalThreshold | Estimator::Tsvd => threshold_design_point(params),
    }
}

/// Closed-form worst-case loss over rank-`rank` signals at `β = 1`.
pub fn worst_case_mse(estimator: Estimator, rank: usize, params: &EffectiveParams) -> Result<f64> {
    if rank == 0 {
        return Err(Error::ZeroRank);
    }
    if fabs(params.beta - 1.0) > 1e-12 {
        return Err(Error::RequiresSquare(params.beta));
    }
    let constant = match estimator {
        Estimator::Tsvd => 5.0,
        Estimator::OptimalShrinker => 2.0,
        Estimator::OptimalThreshold => 3.0,
    };
    let unit = params.noise_unit();
    Ok(constant * rank as f64 * unit * unit)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    /// Largest per-value AMSE found.
    pub value: f64,
    /// Signal level where it was found.
    pub x: f64,
}

/// Range of `t = μ_A x / σ_B` scanned by [`numerical_worst_case`].
pub const WORST_CASE_T_RANGE: (f64, f64) = (1e-3, 100.0);
const WORST_CASE_GRID: usize = 20_001;

/// Numerical supremum of the per-value AMSE over `t ∈ [1e-3, 100]`.
///
/// A log-spaced grid locates the maximum, then golden-section search
/// refines it inside the neighbouring grid cells. Valid for any `β`.
pub fn numerical_worst_case(estimator: Estimator, params: &EffectiveParams) -> Result<WorstCase> {
    params.validate()?;
    if params.is_degenerate() {
        return Ok(WorstCase { value: 0.0, x: 0.0 });
    }
    let lambda = match estimator {
        Estimator::OptimalShrinker => None,
        Estimator::OptimalThreshold => Some(optimal_threshold(params)),
        Estimator::Tsvd => Some(bulk_edge(params)),
    };
    let loss = |x: f64| match lambda {
        None => shrinker_amse(x, params),
        Some(l) => threshold_amse(x, l, params).unwrap_or(f64::NAN),
    };
    let unit = params.noise_unit();
    let (lo, hi) = WORST_CASE_T_RANGE;
    let step = (log(hi) - log(lo)) / (WORST_CASE_GRID - 1) as f64;
    let grid = |i: usize| unit * exp(log(lo) + step * i as f64);

    let mut best = WorstCase {
        value: f64::MIN,
        x: 0.0,
    };
    let mut best_i = 0;
    for i in 0..WORST_CASE_GRID {
        let x = grid(i);
        let v = loss(x);
        if v > best.value {
            best = WorstCase { value: v, x };
            best_i = i;
        }
    }

    let (mut a, mut b) = (
        grid(best_i.saturating_sub(1)),
        grid((best_i + 1).min(WORST_CASE_GRID - 1)),
    );
    let ratio = (sqrt(5.0) - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (loss(c), loss(d));
    for _ in 0..200 {
        if fc > best.value {
            best = WorstCase { value: fc, x: c };
        }
        if fd > best.value {
            best = WorstCase { value: fd, x: d };
        }
        if b - a < 1e-15 * unit.max(b) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = loss(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = loss(d);
        }
    }
    Ok(best)
}
