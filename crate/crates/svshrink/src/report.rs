//! JSON reports and risk-curve CSV.

use serde::{Deserialize, Serialize};
use svshrink_core::{
    bulk_edge, cos2_left, cos2_right, critical_level, displace, inverse_displace, optimal_shrinker, optimal_threshold,
    shrinker_amse, threshold_amse, total_amse, worst_case_mse, EffectiveParams, EstimationReport, Estimator,
    ModeDescriptor, RuleKind, ShrinkageRule,
};

use crate::denoise::Denoised;
use crate::sim::fmt_f64;
use crate::Result;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const BELOW_CRITICAL: &str = "below critical: set to zero by every shrinker";

/// Where the effective parameters came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "source")]
pub enum ParamSource {
    Explicit { mu_a: f64, sigma_b: f64 },
    Mode { mode: ModeDescriptor },
    Estimated { masked: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenoiseConfig {
    pub input: String,
    pub output: String,
    pub header: bool,
    pub rule: String,
    pub params: ParamSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenoiseReport {
    pub version: String,
    pub config: DenoiseConfig,
    /// `[rows, cols]` of the input.
    pub shape: [usize; 2],
    pub params: EffectiveParams,
    pub estimation: Option<EstimationReport>,
    pub rule: ShrinkageRule,
    pub bulk_edge: f64,
    pub optimal_threshold: f64,
    /// `(y, η*(y))` samples, present for the shrinker rule.
    pub shrinker_curve: Option<Vec<[f64; 2]>>,
    pub spectrum_before: Vec<f64>,
    /// Singular values of the estimate, aligned with `spectrum_before`.
    pub spectrum_after: Vec<f64>,
    pub kept_rank: usize,
    /// `inverse_displace` of kept values above the bulk edge.
    pub implied_signal: Vec<f64>,
    /// Predicted loss of the rule on `implied_signal`.
    pub predicted_amse: Option<f64>,
}

impl DenoiseReport {
    pub fn build(
        config: DenoiseConfig,
        shape: [usize; 2],
        estimation: Option<EstimationReport>,
        rule: ShrinkageRule,
        out: &Denoised,
    ) -> Self {
        let params = rule.params;
        let edge = bulk_edge(&params);
        let lambda = optimal_threshold(&params);
        let before = &out.svd.singular_values;
        let kept: Vec<f64> = before
            .iter()
            .zip(&out.coefficients)
            .filter(|(y, c)| **c != 0.0 && **y > edge)
            .map(|(y, _)| *y)
            .collect();
        let implied: Vec<f64> = kept.iter().map(|&y| inverse_displace(y, &params)).collect();
        let predicted_amse = if implied.is_empty() {
            Some(0.0)
        } else {
            total_amse(&implied, rule.kind, &params).ok().map(|p| p.total)
        };
        let shrinker_curve = matches!(rule.kind, RuleKind::OptimalShrinker).then(|| {
            let top = before.first().copied().unwrap_or(0.0).max(2.0 * edge).max(1e-12);
            (0..=64)
                .map(|i| {
                    let y = top * i as f64 / 64.0;
                    [y, optimal_shrinker(y, &params)]
                })
                .collect()
        });
        DenoiseReport {
            version: VERSION.to_string(),
            config,
            shape,
            params,
            estimation,
            rule,
            bulk_edge: edge,
            optimal_threshold: lambda,
            shrinker_curve,
            spectrum_before: before.clone(),
            spectrum_after: out.coefficients.iter().map(|c| c.abs()).collect(),
            kept_rank: out.kept_rank(),
            implied_signal: implied,
            predicted_amse,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeConfig {
    pub beta: f64,
    pub sigma_b: f64,
    pub mu_a: f64,
    pub x: Vec<f64>,
    pub rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuleTriple {
    pub shrinker: f64,
    pub threshold: f64,
    pub tsvd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueReport {
    pub x: f64,
    pub displaced: f64,
    pub cos2_left: f64,
    pub cos2_right: f64,
    pub amse: RuleTriple,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub version: String,
    pub config: AnalyzeConfig,
    pub params: EffectiveParams,
    pub optimal_threshold: f64,
    pub bulk_edge: f64,
    /// Signal level at which each rule starts to beat the zero estimate.
    pub critical_levels: RuleTriple,
    pub values: Vec<ValueReport>,
    pub totals: RuleTriple,
    /// Worst-case loss over rank-`rank` signals; present only at `β = 1`.
    pub worst_case: Option<RuleTriple>,
}

fn per_value(x: f64, params: &EffectiveParams) -> Result<RuleTriple> {
    Ok(RuleTriple {
        shrinker: shrinker_amse(x, params),
        threshold: threshold_amse(x, optimal_threshold(params), params)?,
        tsvd: threshold_amse(x, bulk_edge(params), params)?,
    })
}

pub fn analyze(config: AnalyzeConfig) -> Result<AnalyzeReport> {
    let params = EffectiveParams::new(config.mu_a, config.sigma_b, config.beta)?;
    if config.x.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(svshrink_core::Error::UnorderedSignal.into());
    }
    let shrink_level = critical_level(Estimator::OptimalShrinker, &params);
    let values = config
        .x
        .iter()
        .map(|&x| {
            Ok(ValueReport {
                x,
                displaced: displace(x, &params),
                cos2_left: cos2_left(x, &params),
                cos2_right: cos2_right(x, &params),
                amse: per_value(x, &params)?,
                note: (!params.is_degenerate() && x <= shrink_level).then(|| BELOW_CRITICAL.to_string()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let totals = RuleTriple {
        shrinker: values.iter().map(|v| v.amse.shrinker).sum(),
        threshold: values.iter().map(|v| v.amse.threshold).sum(),
        tsvd: values.iter().map(|v| v.amse.tsvd).sum(),
    };
    let worst_case = if (params.beta - 1.0).abs() <= 1e-12 {
        let rank = config.rank.max(1);
        Some(RuleTriple {
            shrinker: worst_case_mse(Estimator::OptimalShrinker, rank, &params)?,
            threshold: worst_case_mse(Estimator::OptimalThreshold, rank, &params)?,
            tsvd: worst_case_mse(Estimator::Tsvd, rank, &params)?,
        })
    } else {
        None
    };
    Ok(AnalyzeReport {
        version: VERSION.to_string(),
        optimal_threshold: optimal_threshold(&params),
        bulk_edge: bulk_edge(&params),
        critical_levels: RuleTriple {
            shrinker: shrink_level,
            threshold: critical_level(Estimator::OptimalThreshold, &params),
            tsvd: critical_level(Estimator::Tsvd, &params),
        },
        values,
        totals,
        worst_case,
        params,
        config,
    })
}

/// Per-level loss of each rule at the levels `xs`.
pub fn risk_curve_csv(params: &EffectiveParams, xs: &[f64]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "amse_shrinker", "amse_threshold", "amse_tsvd"])?;
    for &x in xs {
        let r = per_value(x, params)?;
        w.write_record([fmt_f64(x), fmt_f64(r.shrinker), fmt_f64(r.threshold), fmt_f64(r.tsvd)])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8"))
}
