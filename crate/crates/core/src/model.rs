//! Contamination modes and their compilation to effective parameters.
//!
//! Every mode is an instance of the per-entry link `y = a·x + b`. The
//! primitives share one Bernoulli(κ) mask `M` (`M = 1` means the entry is
//! clean) and three noise sources:
//!
//! | mode                 | clean entry      | defective entry |
//! |----------------------|------------------|-----------------|
//! | additive_noise       | `x + Z`          | (no mask)       |
//! | multiplicative_noise | `G·x`            | (no mask)       |
//! | missing_at_random    | `x`              | `0`             |
//! | outliers_at_random   | `x`              | `x + W`         |
//! | corruption_at_random | `x`              | `W`             |
//!
//! with `Z ~ N(0, σ²/n)`, `W ~ N(0, τ²/n)` and `G = 1 + σ·ξ`, `ξ ~ N(0, 1)`.
//! Composites combine the noise primitives with at most one mask primitive;
//! additive noise only touches clean entries and multiplicative noise
//! multiplies every retained signal entry.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeKind {
    AdditiveNoise,
    MultiplicativeNoise,
    MissingAtRandom,
    OutliersAtRandom,
    CorruptionAtRandom,
    Composite,
}

impl ModeKind {
    fn defect(self) -> Option<Defect> {
        match self {
            ModeKind::MissingAtRandom => Some(Defect::Missing),
            ModeKind::OutliersAtRandom => Some(Defect::Outlier),
            ModeKind::CorruptionAtRandom => Some(Defect::Corruption),
            _ => None,
        }
    }
}

/// What happens to an entry that the mask marks as defective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Defect {
    Missing,
    Outlier,
    Corruption,
}

/// Declarative description of a contamination mode.
///
/// For composites, `components` lists the primitive kinds and the levels on
/// the descriptor itself are shared by all of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeDescriptor {
    pub kind: ModeKind,
    #[serde(default)]
    pub sigma: f64,
    #[serde(default)]
    pub tau: f64,
    #[serde(default = "one")]
    pub kappa: f64,
    #[serde(default)]
    pub components: Vec<ModeKind>,
}

fn one() -> f64 {
    1.0
}

impl ModeDescriptor {
    fn primitive(kind: ModeKind, sigma: f64, tau: f64, kappa: f64) -> Self {
        ModeDescriptor {
            kind,
            sigma,
            tau,
            kappa,
            components: Vec::new(),
        }
    }

    pub fn additive_noise(sigma: f64) -> Self {
        Self::primitive(ModeKind::AdditiveNoise, sigma, 0.0, 1.0)
    }

    pub fn multiplicative_noise(sigma: f64) -> Self {
        Self::primitive(ModeKind::MultiplicativeNoise, sigma, 0.0, 1.0)
    }

    pub fn missing_at_random(kappa: f64) -> Self {
        Self::primitive(ModeKind::MissingAtRandom, 0.0, 0.0, kappa)
    }

    pub fn outliers_at_random(kappa: f64, tau: f64) -> Self {
        Self::primitive(ModeKind::OutliersAtRandom, 0.0, tau, kappa)
    }

    pub fn corruption_at_random(kappa: f64, tau: f64) -> Self {
        Self::primitive(ModeKind::CorruptionAtRandom, 0.0, tau, kappa)
    }

    pub fn composite(components: &[ModeKind], sigma: f64, tau: f64, kappa: f64) -> Self {
        ModeDescriptor {
            kind: ModeKind::Composite,
            sigma,
            tau,
            kappa,
            components: components.to_vec(),
        }
    }

    /// The primitive kinds making up this mode.
    pub fn primitives(&self) -> &[ModeKind] {
        match self.kind {
            ModeKind::Composite => &self.components,
            _ => core::slice::from_ref(&self.kind),
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_level("sigma", self.sigma)?;
        check_level("tau", self.tau)?;
        if !(0.0..=1.0).contains(&self.kappa) {
            return Err(Error::InvalidLevel {
                name: "kappa",
                value: self.kappa,
                reason: "must lie in [0, 1]",
            });
        }
        match self.kind {
            ModeKind::Composite => {
                if self.components.is_empty() {
                    return Err(Error::InvalidComposite("a composite needs at least one component"));
                }
                let mut defects = 0;
                for (i, kind) in self.components.iter().enumerate() {
                    if *kind == ModeKind::Composite {
                        return Err(Error::InvalidComposite("components must be primitive modes"));
                    }
                    if self.components[..i].contains(kind) {
                        return Err(Error::InvalidComposite("duplicate component kind"));
                    }
                    if kind.defect().is_some() {
                        defects += 1;
                    }
                }
                if defects > 1 {
                    return Err(Error::InvalidComposite(
                        "at most one of missing/outliers/corruption may be combined",
                    ));
                }
                Ok(())
            }
            _ if !self.components.is_empty() => {
                Err(Error::InvalidComposite("only composite modes may list components"))
            }
            _ => Ok(()),
        }
    }

    /// Resolves the descriptor into the per-entry generative recipe.
    pub fn entry_model(&self) -> Result<EntryModel> {
        self.validate()?;
        let kinds = self.primitives();
        let has = |k: ModeKind| kinds.contains(&k);
        let defect = kinds.iter().find_map(|k| k.defect());
        Ok(EntryModel {
            additive_sigma: if has(ModeKind::AdditiveNoise) { self.sigma } else { 0.0 },
            multiplicative_sigma: has(ModeKind::MultiplicativeNoise).then_some(self.sigma),
            defect,
            kappa: if defect.is_some() { self.kappa } else { 1.0 },
            tau: self.tau,
        })
    }
}

fn check_level(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::InvalidLevel {
            name,
            value,
            reason: "must be finite and nonnegative",
        });
    }
    Ok(())
}

/// Per-entry recipe of a validated mode.
///
/// An entry is clean with probability `kappa`; a clean entry is
/// `G·x + Z`, a defective one is decided by `defect`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntryModel {
    /// Spectral-units standard deviation of `Z` (0 when absent).
    pub additive_sigma: f64,
    /// Per-entry standard deviation of `G` around 1, when present.
    pub multiplicative_sigma: Option<f64>,
    pub defect: Option<Defect>,
    pub kappa: f64,
    /// Spectral-units standard deviation of `W`.
    pub tau: f64,
}

impl EntryModel {
    /// Probability that the signal entry survives into `y`.
    fn signal_kept(&self) -> f64 {
        match self.defect {
            None | Some(Defect::Outlier) => 1.0,
            Some(Defect::Missing) | Some(Defect::Corruption) => self.kappa,
        }
    }

    /// Exact `(E[A], Var A, n·Var B)`.
    pub fn moments(&self) -> (f64, f64, f64) {
        let kept = self.signal_kept();
        let g2 = 1.0 + self.multiplicative_sigma.map_or(0.0, |s| s * s);
        let mu_a = kept;
        let sigma_a2 = kept * g2 - mu_a * mu_a;
        let clean = self.kappa;
        let w_rate = match self.defect {
            Some(Defect::Outlier) | Some(Defect::Corruption) => 1.0 - self.kappa,
            _ => 0.0,
        };
        let sigma_b2 = clean * self.additive_sigma * self.additive_sigma + w_rate * self.tau * self.tau;
        (mu_a, sigma_a2.max(0.0), sigma_b2)
    }
}

/// Asymptotic model parameters consumed by every closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    pub mu_a: f64,
    /// Per-entry variance of `A`; diagnostic only.
    pub sigma_a2: f64,
    /// `n · Var(B_ij)`, so `B` entries have standard deviation `σ_B/√n`.
    pub sigma_b2: f64,
    /// `m / n`.
    pub beta: f64,
}

impl EffectiveParams {
    pub fn new(mu_a: f64, sigma_b: f64, beta: f64) -> Result<Self> {
        let params = EffectiveParams {
            mu_a,
            sigma_a2: 0.0,
            sigma_b2: sigma_b * sigma_b,
            beta,
        };
        check_level("sigma_b", sigma_b)?;
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_beta(self.beta)?;
        check_level("sigma_b2", self.sigma_b2)?;
        if !self.mu_a.is_finite() {
            return Err(Error::InvalidLevel {
                name: "mu_a",
                value: self.mu_a,
                reason: "must be finite",
            });
        }
        if self.mu_a == 0.0 {
            return Err(Error::SignalAnnihilated);
        }
        Ok(())
    }

    pub fn sigma_b(&self) -> f64 {
        libm::sqrt(self.sigma_b2)
    }

    /// `σ_B / |μ_A|`, the natural unit of signal strength.
    pub fn noise_unit(&self) -> f64 {
        self.sigma_b() / libm::fabs(self.mu_a)
    }

    /// Noiseless case: there is no bulk and every formula degenerates.
    pub fn is_degenerate(&self) -> bool {
        self.sigma_b2 == 0.0
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAspectRatio(beta))
    }
}

/// Exact first and second moments of the `A` and `B` fields of `mode`.
pub fn compile_mode(mode: &ModeDescriptor, beta: f64) -> Result<EffectiveParams> {
    check_beta(beta)?;
    let (mu_a, sigma_a2, sigma_b2) = mode.entry_model()?.moments();
    if mu_a == 0.0 {
        return Err(Error::SignalAnnihilated);
    }
    Ok(EffectiveParams {
        mu_a,
        sigma_a2,
        sigma_b2,
        beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ModeKind::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn missing_at_random_moments() {
        let p = compile_mode(&ModeDescriptor::missing_at_random(0.7), 1.0).unwrap();
        assert!(close(p.mu_a, 0.7));
        assert!(close(p.sigma_a2, 0.21));
        assert_eq!(p.sigma_b2, 0.0);
    }

    #[test]
    fn additive_and_missing_scales_noise_by_kappa() {
        let mode = ModeDescriptor::composite(&[AdditiveNoise, MissingAtRandom], 1.0, 0.0, 0.5);
        let p = compile_mode(&mode, 1.0).unwrap();
        assert!(close(p.sigma_b2, 0.5));
        assert!(close(p.mu_a, 0.5));
    }

    #[test]
    fn additive_and_corruption() {
        let mode = ModeDescriptor::composite(&[AdditiveNoise, CorruptionAtRandom], 1.0, 3.0, 0.8);
        let p = compile_mode(&mode, 1.0).unwrap();
        assert!(close(p.sigma_b2, 2.6));
        assert!(close(p.mu_a, 0.8));
    }

    #[test]
    fn additive_noise_alone() {
        let p = compile_mode(&ModeDescriptor::additive_noise(2.0), 0.5).unwrap();
        assert_eq!((p.mu_a, p.sigma_a2, p.sigma_b2, p.beta), (1.0, 0.0, 4.0, 0.5));
    }

    #[test]
    fn additive_and_outliers_keeps_signal() {
        let mode = ModeDescriptor::composite(&[AdditiveNoise, OutliersAtRandom], 1.0, 4.0, 0.9);
        let p = compile_mode(&mode, 1.0).unwrap();
        assert!(close(p.mu_a, 1.0));
        assert!(close(p.sigma_b2, 0.9 + 0.1 * 16.0));
    }

    #[test]
    fn multiplicative_and_corruption() {
        let mode = ModeDescriptor::composite(&[MultiplicativeNoise, CorruptionAtRandom], 0.5, 2.0, 0.6);
        let p = compile_mode(&mode, 1.0).unwrap();
        assert!(close(p.mu_a, 0.6));
        assert!(close(p.sigma_a2, 0.6 * 1.25 - 0.36));
        assert!(close(p.sigma_b2, 0.4 * 4.0));
    }

    #[test]
    fn annihilated_signal_is_an_error() {
        let err = compile_mode(&ModeDescriptor::missing_at_random(0.0), 1.0).unwrap_err();
        assert_eq!(err, Error::SignalAnnihilated);
        let err = compile_mode(&ModeDescriptor::corruption_at_random(0.0, 1.0), 1.0).unwrap_err();
        assert_eq!(err, Error::SignalAnnihilated);
    }

    #[test]
    fn rejects_bad_levels_and_composites() {
        assert!(ModeDescriptor::additive_noise(-1.0).validate().is_err());
        assert!(ModeDescriptor::missing_at_random(1.5).validate().is_err());
        assert!(ModeDescriptor::outliers_at_random(0.5, f64::NAN).validate().is_err());
        assert!(ModeDescriptor::composite(&[], 1.0, 0.0, 1.0).validate().is_err());
        assert!(
            ModeDescriptor::composite(&[AdditiveNoise, AdditiveNoise], 1.0, 0.0, 1.0)
                .validate()
                .is_err()
        );
        assert!(
            ModeDescriptor::composite(&[MissingAtRandom, CorruptionAtRandom], 0.0, 1.0, 0.5)
                .validate()
                .is_err()
        );
        assert!(ModeDescriptor::composite(&[Composite], 0.0, 1.0, 0.5)
            .validate()
            .is_err());
        assert!(compile_mode(&ModeDescriptor::additive_noise(1.0), 1.5).is_err());
        assert!(compile_mode(&ModeDescriptor::additive_noise(1.0), 0.0).is_err());
    }

    #[test]
    fn json_field_names() {
        let mode = ModeDescriptor::composite(&[AdditiveNoise, MissingAtRandom], 1.0, 0.0, 0.7);
        let json = serde_json::to_string(&mode).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"composite","sigma":1.0,"tau":0.0,"kappa":0.7,"components":["additive_noise","missing_at_random"]}"#
        );
        let back: ModeDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back, mode);
        let sparse: ModeDescriptor = serde_json::from_str(r#"{"kind":"additive_noise","sigma":2}"#).unwrap();
        assert_eq!(sparse, ModeDescriptor::additive_noise(2.0));
    }
}
