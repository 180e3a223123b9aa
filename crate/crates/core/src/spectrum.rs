//! Random-matrix quantities: the Marčenko–Pastur law of noise singular
//! values and the spiked-model displacement of signal singular values.

use core::f64::consts::{FRAC_PI_2, PI};

use libm::{asin, fabs, sin, sqrt};

use crate::model::{check_beta, EffectiveParams};
use crate::quad::adaptive_simpson;
use crate::{Error, Result};

const QUAD_TOL: f64 = 1e-10;

/// Limiting distribution of the singular values of an `m × n` noise matrix
/// with i.i.d. entries of standard deviation `σ/√n`, `β = m/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpLaw {
    beta: f64,
    sigma: f64,
}

impl MpLaw {
    pub fn new(beta: f64, sigma: f64) -> Result<Self> {
        check_beta(beta)?;
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidLevel {
                name: "sigma",
                value: sigma,
                reason: "must be finite and positive",
            });
        }
        Ok(MpLaw { beta, sigma })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Lower edge of the support, `σ(1 − √β)`.
    pub fn lower_edge(&self) -> f64 {
        self.sigma * (1.0 - sqrt(self.beta))
    }

    /// Upper edge of the support, `σ(1 + √β)`.
    pub fn upper_edge(&self) -> f64 {
        self.sigma * (1.0 + sqrt(self.beta))
    }

    pub fn density(&self, t: f64) -> f64 {
        let (a, b) = (self.lower_edge(), self.upper_edge());
        if t <= 0.0 || t <= a || t >= b {
            return 0.0;
        }
        // 4σ⁴β − (t² − σ² − σ²β)² factored as (t² − a²)(b² − t²)
        let radicand = (t - a) * (t + a) * (b - t) * (b + t);
        sqrt(radicand.max(0.0)) / (PI * self.sigma * self.sigma * self.beta * t)
    }

    /// Maps `θ ∈ [0, π/2]` onto the support: `t = a + (b − a) sin²θ`.
    fn point(&self, theta: f64) -> f64 {
        let s = sin(theta);
        self.lower_edge() + (self.upper_edge() - self.lower_edge()) * s * s
    }

    /// Density pulled back to `θ`; smooth at both ends of the support.
    fn pulled_back(&self, theta: f64) -> f64 {
        let (a, b) = (self.lower_edge(), self.upper_edge());
        let t = self.point(theta);
        if t <= 0.0 {
            return 0.0;
        }
        let s2 = sin(2.0 * theta);
        let w = b - a;
        0.5 * w * w * s2 * s2 * sqrt((t + a) * (t + b)) / (PI * self.sigma * self.sigma * self.beta * t)
    }

    fn cdf_theta(&self, theta: f64) -> f64 {
        adaptive_simpson(&|th| self.pulled_back(th), 0.0, theta, QUAD_TOL)
    }

    pub fn cdf(&self, t: f64) -> f64 {
        let (a, b) = (self.lower_edge(), self.upper_edge());
        if t <= a {
            return 0.0;
        }
        if t >= b {
            return 1.0;
        }
        let theta = asin(sqrt((t - a) / (b - a)));
        self.cdf_theta(theta).clamp(0.0, 1.0)
    }

    /// Total mass of the density, computed by quadrature.
    pub fn total_mass(&self) -> f64 {
        self.cdf_theta(FRAC_PI_2)
    }

    /// Median of the law, by bisection on the integrated density.
    pub fn median(&self) -> f64 {
        let (mut lo, mut hi) = (0.0, FRAC_PI_2);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cdf_theta(mid) < 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
            if self.point(hi) - self.point(lo) < 1e-13 {
                break;
            }
        }
        self.point(0.5 * (lo + hi))
    }
}

/// `σ_B(1 + √β)`; 0 in the noiseless case.
pub fn bulk_edge(params: &EffectiveParams) -> f64 {
    params.sigma_b() * (1.0 + sqrt(params.beta))
}

/// Signal level `σ_B β^{1/4} / μ_A` below which a singular value is
/// swallowed by the bulk.
pub fn transition_level(params: &EffectiveParams) -> f64 {
    params.noise_unit() * sqrt(sqrt(params.beta))
}

/// Signal strength in noise units, `t = μ_A x / σ_B`.
fn strength(x: f64, params: &EffectiveParams) -> f64 {
    fabs(params.mu_a) * x / params.sigma_b()
}

/// Limit of the data singular value matching a signal value `x`.
pub fn displace(x: f64, params: &EffectiveParams) -> f64 {
    let sigma = params.sigma_b();
    let xbar = fabs(params.mu_a) * x;
    if sigma == 0.0 {
        return xbar;
    }
    let beta = params.beta;
    if xbar > sigma * sqrt(sqrt(beta)) {
        let r = xbar / sigma;
        sigma * sqrt((r + 1.0 / r) * (r + beta / r))
    } else {
        bulk_edge(params)
    }
}

/// Inverse of [`displace`] above the bulk edge; 0 at or below it.
pub fn inverse_displace(y: f64, params: &EffectiveParams) -> f64 {
    let sigma = params.sigma_b();
    let mu = fabs(params.mu_a);
    if sigma == 0.0 {
        return y / mu;
    }
    if y <= bulk_edge(params) {
        return 0.0;
    }
    let beta = params.beta;
    let y2 = (y / sigma) * (y / sigma);
    let rb = sqrt(beta);
    // ((y/σ)² − β − 1)² − 4β = ((y/σ)² − (1+√β)²)((y/σ)² − (1−√β)²)
    let disc = ((y2 - (1.0 + rb) * (1.0 + rb)) * (y2 - (1.0 - rb) * (1.0 - rb))).max(0.0);
    let s = 0.5 * (y2 - beta - 1.0 + sqrt(disc));
    sigma / mu * sqrt(s.max(0.0))
}

/// Limiting `|⟨ũ, u⟩|²` between the true and empirical left singular vectors.
pub fn cos2_left(x: f64, params: &EffectiveParams) -> f64 {
    cos2(x, params, params.beta)
}

/// Limiting `|⟨ṽ, v⟩|²` between the true and empirical right singular vectors.
pub fn cos2_right(x: f64, params: &EffectiveParams) -> f64 {
    cos2(x, params, 1.0)
}

fn cos2(x: f64, params: &EffectiveParams, weight: f64) -> f64 {
    if params.is_degenerate() {
        return 1.0;
    }
    let beta = params.beta;
    let t = strength(x, params);
    let t2 = t * t;
    let t4 = t2 * t2;
    if t4 <= beta {
        return 0.0;
    }
    ((t4 - beta) / (t4 + weight * t2)).clamp(0.0, 1.0)
}
