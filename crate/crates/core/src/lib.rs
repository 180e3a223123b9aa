//! Asymptotic theory of singular value shrinkage under uniform random
//! contamination `Y = A ⊙ X + B`.
//!
//! This crate is `no_std` (it needs `alloc`) and carries only the scalar
//! closed forms: contamination mode compilation, the Marčenko–Pastur law,
//! the signal/data displacement map, the optimal shrinker and hard
//! threshold, and the asymptotic risk formulas. Matrix work (SVD, sampling,
//! simulations, IO) lives in the `svshrink` crate.
//!
//! Noise levels use the spectral convention throughout: entries of `B` have
//! standard deviation `σ_B / √n`, so the noise bulk edge sits at
//! `σ_B (1 + √β)` independently of `n`.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod estimation;
pub mod model;
mod quad;
pub mod risk;
pub mod shrink;
pub mod spectrum;

pub use error::{Error, Result};
pub use estimation::{estimate_sigma_b, lower_median, mu_a_from_zero_count, EstimationInputs, EstimationReport};
pub use model::{compile_mode, Defect, EffectiveParams, EntryModel, ModeDescriptor, ModeKind};
pub use risk::{
    check_signal, critical_level, numerical_worst_case, shrinker_amse, threshold_amse, threshold_keep_branch,
    total_amse, worst_case_mse, Estimator, RiskProfile, WorstCase,
};
pub use shrink::{
    displaced_design_point, optimal_shrinker, optimal_threshold, threshold_design_point, RuleKind, ShrinkageRule,
};
pub use spectrum::{bulk_edge, cos2_left, cos2_right, displace, inverse_displace, transition_level, MpLaw};
