use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use svshrink_core::{
    compile_mode, cos2_left, cos2_right, displace, total_amse, EffectiveParams, ModeDescriptor, RuleKind, ShrinkageRule,
};

use super::signal::{make_signal, SignalSpec};
use super::{empirical_mse, fmt_f64, trial_seed, DEFAULT_SEED};
use crate::contaminate::contaminate;
use crate::denoise::shrink_factorization;
use crate::linalg::svd;
use crate::Result;

/// Squared Frobenius loss of each rule on one draw (or its prediction).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuleErrors {
    pub shrinker: f64,
    pub threshold: f64,
    /// Hard threshold at the bulk edge.
    pub tsvd: f64,
    pub zero: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theory {
    pub displaced: Vec<f64>,
    pub cos2_left: Vec<f64>,
    pub cos2_right: Vec<f64>,
    pub amse: RuleErrors,
}

impl Theory {
    pub fn predict(x: &[f64], params: &EffectiveParams) -> Result<Self> {
        let total = |kind| -> Result<f64> { Ok(total_amse(x, kind, params)?.total) };
        Ok(Theory {
            displaced: x.iter().map(|&v| displace(v, params)).collect(),
            cos2_left: x.iter().map(|&v| cos2_left(v, params)).collect(),
            cos2_right: x.iter().map(|&v| cos2_right(v, params)).collect(),
            amse: RuleErrors {
                shrinker: total(RuleKind::OptimalShrinker)?,
                threshold: total(RuleKind::HardThreshold(svshrink_core::optimal_threshold(params)))?,
                tsvd: total(RuleKind::Tsvd(x.len()))?,
                zero: total(RuleKind::Zero)?,
            },
        })
    }
}

/// One Monte Carlo draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    /// Seed of this trial's private stream.
    pub seed: u64,
    pub trial: usize,
    pub mode: ModeDescriptor,
    pub m: usize,
    pub n: usize,
    pub x: Vec<f64>,
    /// Top `r + 1` data singular values.
    pub singular_values: Vec<f64>,
    /// `⟨u_i, ũ_i⟩²` for `i = 1..r`.
    pub cos2_left: Vec<f64>,
    /// `⟨v_i, ṽ_i⟩²` for `i = 1..r`.
    pub cos2_right: Vec<f64>,
    pub mse: RuleErrors,
    pub theory: Theory,
}

/// Draws `X`, contaminates it, and scores every rule.
pub fn run_trial(spec: &SignalSpec, mode: &ModeDescriptor, seed: u64, trial: usize) -> Result<ExperimentRecord> {
    use rand::SeedableRng;
    let params = compile_mode(mode, spec.beta())?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let signal = make_signal(spec, &mut rng)?;
    let y = contaminate(&signal.matrix, mode, &mut rng)?;
    let fact = svd(&y)?;
    let r = spec.x.len();

    let overlap = |data: &faer::Mat<f64>, truth: &faer::Mat<f64>, k: usize| {
        let dot: f64 = (0..data.nrows()).map(|i| data[(i, k)] * truth[(i, k)]).sum();
        dot * dot
    };
    let cos2_l = (0..r).map(|k| overlap(&fact.left_vectors, &signal.left, k)).collect();
    let cos2_r = (0..r).map(|k| overlap(&fact.right_vectors, &signal.right, k)).collect();

    let loss = |rule: ShrinkageRule| -> Result<f64> {
        let (estimate, _) = shrink_factorization(&fact, &rule);
        empirical_mse(&signal.matrix, &estimate)
    };
    let mse = RuleErrors {
        shrinker: loss(ShrinkageRule::optimal_shrinker(params)?)?,
        threshold: loss(ShrinkageRule::optimal_threshold(params)?)?,
        tsvd: loss(ShrinkageRule::bulk_edge_threshold(params)?)?,
        zero: spec.x.iter().map(|v| v * v).sum(),
    };

    Ok(ExperimentRecord {
        seed,
        trial,
        mode: mode.clone(),
        m: spec.m,
        n: spec.n,
        x: spec.x.clone(),
        singular_values: fact.singular_values.iter().take(r + 1).copied().collect(),
        cos2_left: cos2_l,
        cos2_right: cos2_r,
        mse,
        theory: Theory::predict(&spec.x, &params)?,
    })
}

/// Repeated draws at a fixed signal and mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DisplacementConfig {
    pub m: usize,
    pub n: usize,
    pub x: Vec<f64>,
    pub mode: ModeDescriptor,
    pub trials: usize,
    pub seed: u64,
}

impl Default for DisplacementConfig {
    fn default() -> Self {
        DisplacementConfig {
            m: 1000,
            n: 1000,
            x: vec![2.5],
            mode: ModeDescriptor::additive_noise(1.0),
            trials: 20,
            seed: DEFAULT_SEED,
        }
    }
}

pub fn run_displacement_check(config: &DisplacementConfig) -> Result<Vec<ExperimentRecord>> {
    let spec = SignalSpec::new(config.m, config.n, config.x.clone())?;
    compile_mode(&config.mode, spec.beta())?;
    (0..config.trials)
        .into_par_iter()
        .map(|i| run_trial(&spec, &config.mode, trial_seed(config.seed, i as u64), i))
        .collect()
}

pub const RECORD_COLUMNS: [&str; 10] = [
    "seed",
    "x",
    "kappa",
    "y1",
    "cos2_left",
    "cos2_right",
    "mse_shrinker",
    "mse_threshold",
    "mse_tsvd",
    "mse_zero",
];

/// One row per record. `x` is `;`-joined; cosines are for component 1.
pub fn records_to_csv(records: &[ExperimentRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RECORD_COLUMNS)?;
    for r in records {
        let x = r.x.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(";");
        w.write_record([
            r.seed.to_string(),
            x,
            fmt_f64(r.mode.kappa),
            fmt_f64(r.singular_values[0]),
            fmt_f64(r.cos2_left[0]),
            fmt_f64(r.cos2_right[0]),
            fmt_f64(r.mse.shrinker),
            fmt_f64(r.mse.threshold),
            fmt_f64(r.mse.tsvd),
            fmt_f64(r.mse.zero),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8"))
}
