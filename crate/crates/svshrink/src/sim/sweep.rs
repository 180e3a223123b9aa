use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use svshrink_core::{bulk_edge, compile_mode, optimal_threshold, threshold_design_point, transition_level};

use super::signal::{make_signal, SignalSpec};
use super::{additive_missing, fmt_f64, linspace, trial_seed, DEFAULT_SEED};
use crate::contaminate::contaminate;
use crate::linalg::singular_values;
use crate::Result;

/// Counting detectable singular values while the observed fraction `κ`
/// shrinks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub m: usize,
    pub n: usize,
    /// Signal singular values; sorted into decreasing order before use.
    pub x: Vec<f64>,
    pub sigma: f64,
    pub kappas: Vec<f64>,
    /// Independent signal/noise replicates averaged per `κ`.
    pub replicates: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            m: 1000,
            n: 1000,
            x: vec![2.0, 3.0, 4.0, 5.0, 6.0],
            sigma: 1.0,
            kappas: linspace(0.02, 1.0, 99),
            replicates: 2,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub kappa: f64,
    /// Mean over replicates of `#{y_i > λ*(κ)}`.
    pub count: f64,
    pub predicted_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// `κ_i` at which `x_i` crosses the threshold's critical level.
    pub predicted_cutoffs: Vec<f64>,
    /// Smallest grid `κ` from which the mean count stays at or above
    /// `k − 1/2`, for `k = 1..r`.
    pub empirical_cutoffs: Vec<Option<f64>>,
}

impl SweepResult {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["kappa", "count", "predicted_count"])?;
        for r in &self.rows {
            w.write_record([fmt_f64(r.kappa), fmt_f64(r.count), r.predicted_count.to_string()])?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8"))
    }
}

/// `κ_i = (x^crit(λ*)|_{κ=1} / x_i)²` for the additive+missing family.
pub fn predicted_cutoffs(x: &[f64], sigma: f64, beta: f64) -> Result<Vec<f64>> {
    let clean = compile_mode(&additive_missing(sigma, 1.0), beta)?;
    let level = threshold_design_point(&clean);
    Ok(x.iter().map(|xi| (level / xi).powi(2)).collect())
}

fn sorted_signal(x: &[f64]) -> Vec<f64> {
    let mut x = x.to_vec();
    x.sort_by(|a, b| b.total_cmp(a));
    x
}

/// Within a replicate the signal and the contamination stream are shared
/// across the `κ` grid, so counts move with `κ` alone.
pub fn run_critical_sweep(config: &SweepConfig) -> Result<SweepResult> {
    let x = sorted_signal(&config.x);
    let spec = SignalSpec::new(config.m, config.n, x.clone())?;
    let beta = spec.beta();
    let reps = config.replicates.max(1);
    let signals = (0..reps)
        .map(|rep| {
            let seed = trial_seed(config.seed, rep as u64);
            Ok((
                make_signal(&spec, &mut ChaCha8Rng::seed_from_u64(seed))?,
                trial_seed(seed, 1),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = (0..config.kappas.len())
        .flat_map(|k| (0..reps).map(move |rep| (k, rep)))
        .collect();
    let counts = jobs
        .par_iter()
        .map(|&(k, rep)| {
            let mode = additive_missing(config.sigma, config.kappas[k]);
            let params = compile_mode(&mode, beta)?;
            let lambda = optimal_threshold(&params);
            let (signal, noise_seed) = &signals[rep];
            let y = contaminate(&signal.matrix, &mode, &mut ChaCha8Rng::seed_from_u64(*noise_seed))?;
            let values = singular_values(&y)?;
            Ok(values.iter().filter(|v| **v > lambda).count())
        })
        .collect::<Result<Vec<usize>>>()?;

    let mut rows = Vec::with_capacity(config.kappas.len());
    for (k, &kappa) in config.kappas.iter().enumerate() {
        let params = compile_mode(&additive_missing(config.sigma, kappa), beta)?;
        let level = threshold_design_point(&params);
        let total: usize = counts[k * reps..(k + 1) * reps].iter().sum();
        rows.push(SweepRow {
            kappa,
            count: total as f64 / reps as f64,
            predicted_count: x.iter().filter(|xi| **xi > level).count(),
        });
    }
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| rows[a].kappa.total_cmp(&rows[b].kappa));
    let empirical_cutoffs = (1..=x.len())
        .map(|k| {
            let need = k as f64 - 0.5;
            let mut cutoff = None;
            for &i in order.iter().rev() {
                if rows[i].count >= need {
                    cutoff = Some(rows[i].kappa);
                } else {
                    break;
                }
            }
            cutoff
        })
        .collect();
    Ok(SweepResult {
        rows,
        predicted_cutoffs: predicted_cutoffs(&x, config.sigma, beta)?,
        empirical_cutoffs,
    })
}

/// Detection-fraction heatmap over `(x, κ)` for a rank-one signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseConfig {
    pub m: usize,
    pub n: usize,
    pub xs: Vec<f64>,
    pub kappas: Vec<f64>,
    pub monte: usize,
    pub sigma: f64,
    /// `η*` counts as detecting once `y₁` clears the bulk edge by this
    /// relative margin, which absorbs the finite-`n` edge fluctuation.
    pub edge_guard: f64,
    pub seed: u64,
}

impl Default for PhaseConfig {
    fn default() -> Self {
        PhaseConfig {
            m: 600,
            n: 600,
            xs: linspace(0.25, 5.0, 20),
            kappas: linspace(0.05, 1.0, 20),
            monte: 5,
            sigma: 1.0,
            edge_guard: 0.05,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseCell {
    pub x: f64,
    pub kappa: f64,
    pub frac_shrinker: f64,
    pub frac_threshold: f64,
    pub xcrit_shrinker: f64,
    pub xcrit_threshold: f64,
}

pub const PHASE_COLUMNS: [&str; 6] = [
    "x",
    "kappa",
    "frac_shrinker",
    "frac_threshold",
    "xcrit_shrinker",
    "xcrit_threshold",
];

pub fn run_phase_plane(config: &PhaseConfig) -> Result<Vec<PhaseCell>> {
    let beta = config.m as f64 / config.n as f64;
    let cells: Vec<(f64, f64)> = config
        .kappas
        .iter()
        .flat_map(|&kappa| config.xs.iter().map(move |&x| (x, kappa)))
        .collect();
    let monte = config.monte.max(1);
    let hits = (0..cells.len() * monte)
        .into_par_iter()
        .map(|job| {
            let (x, kappa) = cells[job / monte];
            let mode = additive_missing(config.sigma, kappa);
            let params = compile_mode(&mode, beta)?;
            let spec = SignalSpec::new(config.m, config.n, vec![x])?;
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(config.seed, job as u64));
            let signal = make_signal(&spec, &mut rng)?;
            let y1 = singular_values(&contaminate(&signal.matrix, &mode, &mut rng)?)?[0];
            let shrink = y1 > bulk_edge(&params) * (1.0 + config.edge_guard);
            Ok((shrink, y1 > optimal_threshold(&params)))
        })
        .collect::<Result<Vec<_>>>()?;
    cells
        .iter()
        .enumerate()
        .map(|(c, &(x, kappa))| {
            let params = compile_mode(&additive_missing(config.sigma, kappa), beta)?;
            let block = &hits[c * monte..(c + 1) * monte];
            Ok(PhaseCell {
                x,
                kappa,
                frac_shrinker: block.iter().filter(|h| h.0).count() as f64 / monte as f64,
                frac_threshold: block.iter().filter(|h| h.1).count() as f64 / monte as f64,
                xcrit_shrinker: transition_level(&params),
                xcrit_threshold: threshold_design_point(&params),
            })
        })
        .collect()
}

pub fn phase_to_csv(cells: &[PhaseCell]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(PHASE_COLUMNS)?;
    for c in cells {
        w.write_record([
            fmt_f64(c.x),
            fmt_f64(c.kappa),
            fmt_f64(c.frac_shrinker),
            fmt_f64(c.frac_threshold),
            fmt_f64(c.xcrit_shrinker),
            fmt_f64(c.xcrit_threshold),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8"))
}
