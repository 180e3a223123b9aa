use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use svshrink_core::{compile_mode, optimal_shrinker};

use super::signal::{make_signal, SignalSpec};
use super::{additive_missing, fmt_f64, linspace, trial_seed, DEFAULT_SEED};
use crate::contaminate::contaminate;
use crate::linalg::svd;
use crate::{Error, Result};

/// Grid search for the loss-minimizing coefficient on the top component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BruteConfig {
    pub m: usize,
    pub n: usize,
    pub sigma: f64,
    /// Observed fraction; the missing level is `1 − κ`.
    pub kappa: f64,
    /// Signal levels; zero and negative levels are skipped.
    pub xs: Vec<f64>,
    /// Draws per signal level; the scan minimizes their average loss.
    pub trials: usize,
    pub eta_step: f64,
    pub seed: u64,
}

impl Default for BruteConfig {
    fn default() -> Self {
        BruteConfig {
            m: 250,
            n: 250,
            sigma: 1.0,
            kappa: 0.7,
            xs: linspace(0.1, 6.0, 60),
            trials: 20,
            eta_step: 1e-3,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteRow {
    pub x: f64,
    /// Mean top data singular value.
    pub y1: f64,
    pub eta_hat: f64,
    /// `η*(y1)` under the compiled parameters.
    pub eta_opt: f64,
}

pub const BRUTE_COLUMNS: [&str; 4] = ["x", "y1", "eta_hat", "eta_opt"];

/// `‖η u v' − X‖²_F = η² − 2η u'Xv + ‖X‖²_F` for unit `u`, `v`.
pub fn rank_one_loss(eta: f64, inner: f64, signal_energy: f64) -> f64 {
    eta * eta - 2.0 * eta * inner + signal_energy
}

struct Draw {
    y1: f64,
    inner: f64,
}

fn draw(spec: &SignalSpec, mode: &svshrink_core::ModeDescriptor, seed: u64) -> Result<Draw> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let signal = make_signal(spec, &mut rng)?;
    let fact = svd(&contaminate(&signal.matrix, mode, &mut rng)?)?;
    let dot = |a: &faer::Mat<f64>, b: &faer::Mat<f64>| (0..a.nrows()).map(|i| a[(i, 0)] * b[(i, 0)]).sum::<f64>();
    Ok(Draw {
        y1: fact.singular_values[0],
        inner: spec.x[0] * dot(&fact.left_vectors, &signal.left) * dot(&fact.right_vectors, &signal.right),
    })
}

pub fn brute_force_shrinker(config: &BruteConfig) -> Result<Vec<BruteRow>> {
    if config.eta_step.is_nan() || config.eta_step <= 0.0 {
        return Err(Error::Config(format!(
            "eta_step must be positive, got {}",
            config.eta_step
        )));
    }
    let mode = additive_missing(config.sigma, config.kappa);
    let params = compile_mode(&mode, config.m as f64 / config.n as f64)?;
    let xs: Vec<f64> = config.xs.iter().copied().filter(|x| *x > 0.0).collect();
    let trials = config.trials.max(1);
    let draws = (0..xs.len() * trials)
        .into_par_iter()
        .map(|job| {
            let spec = SignalSpec::new(config.m, config.n, vec![xs[job / trials]])?;
            draw(&spec, &mode, trial_seed(config.seed, job as u64))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(xs
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let block = &draws[k * trials..(k + 1) * trials];
            let y1 = block.iter().map(|d| d.y1).sum::<f64>() / trials as f64;
            let avg_loss =
                |eta: f64| block.iter().map(|d| rank_one_loss(eta, d.inner, x * x)).sum::<f64>() / trials as f64;
            let steps = (2.0 * y1 / params.mu_a.abs() / config.eta_step).ceil() as usize;
            let mut best = (0.0, avg_loss(0.0));
            for i in 1..=steps {
                let eta = i as f64 * config.eta_step;
                let loss = avg_loss(eta);
                if loss < best.1 {
                    best = (eta, loss);
                }
            }
            BruteRow {
                x,
                y1,
                eta_hat: best.0,
                eta_opt: optimal_shrinker(y1, &params),
            }
        })
        .collect())
}

pub fn brute_to_csv(rows: &[BruteRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(BRUTE_COLUMNS)?;
    for r in rows {
        w.write_record([fmt_f64(r.x), fmt_f64(r.y1), fmt_f64(r.eta_hat), fmt_f64(r.eta_opt)])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8"))
}
