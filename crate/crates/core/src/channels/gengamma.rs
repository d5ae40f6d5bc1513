//! Generalized-gamma component shared by both fading models.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Result};
use crate::specfun::{ln_gamma, reg_lower_incomplete_gamma_ln, reg_upper_incomplete_gamma};

/// SNR law `F(γ) = P(k, (γ/θ)^p)`, density
/// `f(γ) = p/(Γ(k) γ) · X^k e^{-X}` with `X = (γ/θ)^p`.
///
/// α-μ is `(k, p, θ) = (μ, α/2, γ̄ μ^{-2/α})`; the generalized-gamma part of
/// EGG is `(a, c, b γ̄)` and its exponential part `(1, 1, λ γ̄)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenGamma {
    pub k: f64,
    pub p: f64,
    pub theta: f64,
}

impl GenGamma {
    pub fn new(k: f64, p: f64, theta: f64) -> Result<Self> {
        for (name, v) in [("k", k), ("p", p), ("theta", theta)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(format!("generalized gamma {name} = {v} must be positive")));
            }
        }
        Ok(Self { k, p, theta })
    }

    /// `ln X = p ln(γ/θ)`.
    #[inline]
    pub fn ln_x(&self, snr: f64) -> f64 {
        self.p * (snr.ln() - self.theta.ln())
    }

    pub fn cdf(&self, snr: f64) -> f64 {
        if snr <= 0.0 {
            return 0.0;
        }
        reg_lower_incomplete_gamma_ln(self.k, self.ln_x(snr)).unwrap_or(f64::NAN)
    }

    /// `1 - F(γ)`, accurate where `F` is close to one.
    pub fn sf(&self, snr: f64) -> f64 {
        if snr <= 0.0 {
            return 1.0;
        }
        let ln_x = self.ln_x(snr);
        if ln_x > 700.0 {
            return 0.0;
        }
        if ln_x < -700.0 {
            // X underflows, but P(k, X) need not be small when k is.
            return 1.0 - reg_lower_incomplete_gamma_ln(self.k, ln_x).unwrap_or(f64::NAN);
        }
        reg_upper_incomplete_gamma(self.k, ln_x.exp()).unwrap_or(f64::NAN)
    }

    /// `ln f(γ)` for `γ > 0`.
    pub fn ln_pdf(&self, snr: f64) -> f64 {
        let ln_x = self.ln_x(snr);
        self.p.ln() - ln_gamma(self.k).unwrap_or(f64::NAN) - snr.ln() + self.k * ln_x - ln_x.exp()
    }

    pub fn pdf(&self, snr: f64) -> f64 {
        if snr <= 0.0 {
            return 0.0;
        }
        self.ln_pdf(snr).exp()
    }

    /// `E[γ] = θ Γ(k + 1/p) / Γ(k)`.
    pub fn mean(&self) -> f64 {
        let l = ln_gamma(self.k + 1.0 / self.p).unwrap_or(f64::NAN) - ln_gamma(self.k).unwrap_or(f64::NAN);
        self.theta * l.exp()
    }

    /// One draw, `θ G^{1/p}` with `G ~ Gamma(k, 1)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.theta * (ln_gamma_variate(self.k, rng) / self.p).exp()
    }
}

/// `ln G` for `G ~ Gamma(shape, 1)` (Marsaglia–Tsang). For shape < 1 the
/// boost `G = G_{shape+1} U^{1/shape}` is applied in the log domain, since
/// `U^{1/shape}` underflows for shapes like 0.0075.
pub fn ln_gamma_variate<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    if shape < 1.0 {
        let u: f64 = 1.0 - rng.random::<f64>();
        return ln_gamma_variate(shape + 1.0, rng) + u.ln() / shape;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let z: f64 = StandardNormal.sample(rng);
        let v = 1.0 + c * z;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u: f64 = 1.0 - rng.random::<f64>();
        if u.ln() < 0.5 * z * z + d - d * v + d * v.ln() {
            return d.ln() + v.ln();
        }
    }
}
