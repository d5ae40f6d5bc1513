//! α-μ fading for the RF hop.

use rand::Rng;

use super::GenGamma;
use crate::error::{domain, invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaMuParams {
    pub alpha: f64,
    pub mu: f64,
    /// Linear mean-SNR parameter γ̄.
    pub mean_snr: f64,
}

impl AlphaMuParams {
    pub fn new(alpha: f64, mu: f64, mean_snr: f64) -> Result<Self> {
        let p = Self { alpha, mu, mean_snr };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("mu", self.mu), ("mean_snr", self.mean_snr)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(format!("alpha-mu {name} = {v} must be positive")));
            }
        }
        Ok(())
    }

    pub fn rayleigh(mean_snr: f64) -> Result<Self> {
        Self::new(2.0, 1.0, mean_snr)
    }

    pub fn nakagami(m: f64, mean_snr: f64) -> Result<Self> {
        Self::new(2.0, m, mean_snr)
    }

    pub fn weibull(alpha: f64, mean_snr: f64) -> Result<Self> {
        Self::new(alpha, 1.0, mean_snr)
    }

    pub fn one_sided_gaussian(mean_snr: f64) -> Result<Self> {
        Self::new(2.0, 0.5, mean_snr)
    }

    /// `α = μ = 1`: exponentially distributed envelope.
    pub fn exponential(mean_snr: f64) -> Result<Self> {
        Self::new(1.0, 1.0, mean_snr)
    }

    pub fn with_mean_snr(self, mean_snr: f64) -> Result<Self> {
        Self::new(self.alpha, self.mu, mean_snr)
    }

    /// `(k, p, θ) = (μ, α/2, γ̄ μ^{-2/α})`.
    pub fn component(&self) -> GenGamma {
        GenGamma {
            k: self.mu,
            p: 0.5 * self.alpha,
            theta: self.mean_snr * self.mu.powf(-2.0 / self.alpha),
        }
    }
}

pub fn alpha_mu_pdf(p: &AlphaMuParams, snr: f64) -> Result<f64> {
    p.validate()?;
    if !(snr >= 0.0) {
        return Err(domain("alpha_mu_pdf", format!("snr = {snr} must be non-negative")));
    }
    if snr == 0.0 {
        let e = 0.5 * p.alpha * p.mu;
        return Ok(if e > 1.0 {
            0.0
        } else if e == 1.0 {
            p.component().pdf(f64::MIN_POSITIVE).min(f64::MAX)
        } else {
            f64::INFINITY
        });
    }
    Ok(p.component().pdf(snr))
}

/// `P(μ, μ (γ/γ̄)^{α/2})`.
pub fn alpha_mu_cdf(p: &AlphaMuParams, snr: f64) -> Result<f64> {
    p.validate()?;
    if !(snr >= 0.0) {
        return Err(domain("alpha_mu_cdf", format!("snr = {snr} must be non-negative")));
    }
    if snr == f64::INFINITY {
        return Ok(1.0);
    }
    Ok(p.component().cdf(snr))
}

/// `γ̄ (G/μ)^{2/α}` with `G ~ Gamma(μ, 1)`.
pub fn alpha_mu_sample<R: Rng + ?Sized>(p: &AlphaMuParams, rng: &mut R) -> f64 {
    p.component().sample(rng)
}
