//! Monte Carlo harness.
//!
//! Every trial owns a private random stream. Trial `i` of a run with master
//! seed `s` uses `ChaCha8Rng::seed_from_u64(trial_seed(s, i))`, where
//! `trial_seed` is a SplitMix64 mix of the pair. Trials run on the rayon
//! pool and results are collected by trial index, so output does not depend
//! on scheduling.

mod brute;
mod records;
mod signal;
mod sweep;

pub use brute::{brute_force_shrinker, brute_to_csv, rank_one_loss, BruteConfig, BruteRow, BRUTE_COLUMNS};
pub use records::{
    records_to_csv, run_displacement_check, run_trial, DisplacementConfig, ExperimentRecord, RuleErrors, Theory,
    RECORD_COLUMNS,
};
pub use signal::{make_signal, Signal, SignalSpec, VectorModel};
pub use sweep::{
    phase_to_csv, predicted_cutoffs, run_critical_sweep, run_phase_plane, PhaseCell, PhaseConfig, SweepConfig,
    SweepResult, SweepRow, PHASE_COLUMNS,
};

use faer::Mat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use svshrink_core::{ModeDescriptor, ModeKind};

use crate::{Error, Result};

/// Default master seed for every randomized entry point.
pub const DEFAULT_SEED: u64 = 20_170_601;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

pub fn trial_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(master, index))
}

/// `‖X̂ − X‖²_F`.
pub fn empirical_mse(x: &Mat<f64>, estimate: &Mat<f64>) -> Result<f64> {
    if x.nrows() != estimate.nrows() || x.ncols() != estimate.ncols() {
        return Err(Error::ShapeMismatch {
            left: (x.nrows(), x.ncols()),
            right: (estimate.nrows(), estimate.ncols()),
        });
    }
    let mut acc = 0.0;
    for j in 0..x.ncols() {
        for i in 0..x.nrows() {
            let d = estimate[(i, j)] - x[(i, j)];
            acc += d * d;
        }
    }
    Ok(acc)
}

/// Median of a sample (mean of the two middle values for even sizes).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k == 0 {
        return f64::NAN;
    }
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Additive noise plus missing-at-random, the family used by the sweeps.
pub fn additive_missing(sigma: f64, kappa: f64) -> ModeDescriptor {
    ModeDescriptor::composite(&[ModeKind::AdditiveNoise, ModeKind::MissingAtRandom], sigma, 0.0, kappa)
}

/// `count` evenly spaced values from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|i| start + (end - start) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v}")
}
