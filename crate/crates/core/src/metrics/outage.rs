//! Outage probability: exact, per-hop combined, and high-SNR asymptote.

use super::{e2e_pdf, ln_snr_breakpoints, Scenario};
use crate::error::{domain, invalid, Result};
use crate::quadrature::{integrate_log, QuadConfig};
use crate::specfun::{fox_h_bivariate_ln, fox_h_ln, ln_gamma, BivariateGHSpec, ContourConfig, GHSpec};

/// DF outage from the two hop CDFs: `F₁ + F₂ − F₁F₂`.
pub fn outage_combined(f_uwo: f64, f_rf: f64) -> Result<f64> {
    for f in [f_uwo, f_rf] {
        if !(0.0..=1.0).contains(&f) {
            return Err(domain("outage_combined", format!("CDF value {f} outside [0, 1]")));
        }
    }
    Ok(1.0 - (1.0 - f_uwo) * (1.0 - f_rf))
}

/// Exact outage as the sum of three univariate and two bivariate Meijer-G
/// terms, evaluated with default contour settings.
pub fn outage_exact(s: &Scenario) -> Result<f64> {
    outage_exact_with(s, &ContourConfig::univariate())
}

/// [`outage_exact`] with explicit contour settings; with `fast_path` off
/// every term goes through the Mellin–Barnes integrator.
pub fn outage_exact_with(s: &Scenario, cfg: &ContourConfig) -> Result<f64> {
    s.validate()?;
    if s.threshold_snr == 0.0 {
        return Ok(0.0);
    }
    let (u, r) = (&s.uwo, &s.rf);
    let ln_out = s.threshold_snr.ln();
    let ln_rf = r.mu.ln() + 0.5 * r.alpha * (ln_out - r.mean_snr.ln());
    let ln_exp = ln_out - u.mean_snr.ln() - u.lambda.ln();
    let ln_gg = u.c * (ln_out - u.b.ln() - u.mean_snr.ln());

    let g_rf = GHSpec::lower_incomplete_gamma(r.mu)?;
    let g_exp = GHSpec::lower_incomplete_gamma(1.0)?;
    let g_gg = GHSpec::lower_incomplete_gamma(u.a)?;
    let inv_gmu = (-ln_gamma(r.mu)?).exp();
    let inv_ga = (-ln_gamma(u.a)?).exp();

    let bivariate_cfg = ContourConfig {
        rel_tol: cfg.rel_tol.max(ContourConfig::bivariate().rel_tol),
        ..*cfg
    };
    let exp_rf = BivariateGHSpec::new(vec![], g_exp.clone(), g_rf.clone())?;
    let gg_rf = BivariateGHSpec::new(vec![], g_gg.clone(), g_rf.clone())?;

    let t_rf = inv_gmu * fox_h_ln(&g_rf, ln_rf, cfg)?;
    let t_exp = u.w * fox_h_ln(&g_exp, ln_exp, cfg)?;
    let t_gg = (1.0 - u.w) * inv_ga * fox_h_ln(&g_gg, ln_gg, cfg)?;
    let t_exp_rf = u.w * inv_gmu * fox_h_bivariate_ln(&exp_rf, ln_exp, ln_rf, &bivariate_cfg)?;
    let t_gg_rf = (1.0 - u.w) * inv_ga * inv_gmu * fox_h_bivariate_ln(&gg_rf, ln_gg, ln_rf, &bivariate_cfg)?;
    Ok((t_rf + t_exp + t_gg - t_exp_rf - t_gg_rf).clamp(0.0, 1.0))
}

/// Outage as `∫_0^{γ_out} f(γ) dγ` over the end-to-end density, by adaptive
/// quadrature in `ln γ`.
pub fn outage_quadrature(s: &Scenario) -> Result<f64> {
    s.validate()?;
    if s.threshold_snr == 0.0 {
        return Ok(0.0);
    }
    let ln_out = s.threshold_snr.ln();
    let bps = ln_snr_breakpoints(&s.components());
    let ln_lo = (bps[0] - 1.0).max(-740.0).min(ln_out - 50.0);
    let r = integrate_log(
        |g| e2e_pdf(s, g).unwrap_or(f64::NAN),
        ln_lo,
        ln_out,
        &bps,
        &QuadConfig::default(),
    )?;
    Ok(r.value.clamp(0.0, 1.0))
}

/// Terms of the high-SNR outage asymptote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    /// T₁, exponential part of the optical hop.
    Exponential,
    /// T₂, generalized-gamma part of the optical hop.
    GeneralizedGamma,
    /// T₃, RF hop.
    Rf,
}

impl Term {
    pub fn label(self) -> &'static str {
        match self {
            Term::Exponential => "T1",
            Term::GeneralizedGamma => "T2",
            Term::Rf => "T3",
        }
    }
}

/// Which `Ψ₁, Ψ₂` constants to use in the three-term asymptote.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum AsymptoticConstants {
    /// Leading terms of the hop CDFs:
    /// `Ψ₁ = b (Γ(a+1)/(1−w))^{1/(ac)}`, `Ψ₂ = (Γ(μ+1)/μ^μ)^{2/(αμ)}`.
    #[default]
    Corrected,
    /// `Ψ₁ = bΓ(a+1)/(1−w)`, `Ψ₂ = (μΓ(μ))^{−2/(αμ)}`. These do not match
    /// the small-argument expansion of the CDFs unless `ac = 1` and `μ = 1`.
    AsPrinted,
    Explicit {
        psi1: f64,
        psi2: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticBreakdown {
    /// `T₁ + T₂ + T₃`.
    pub value: f64,
    pub term_exponential: f64,
    pub term_gg: f64,
    pub term_rf: f64,
    /// Decay exponents `(1, ac, αμ/2)` of the three terms.
    pub exponents: [f64; 3],
    /// `min(1, ac, αμ/2)`.
    pub diversity_gain: f64,
    /// `G_c` with `P_out ≈ (G_c γ̄)^{−G_d}`, from the dominating terms only.
    pub coding_gain: f64,
    /// Per-term coding gains `(λ/(wγ_out), Ψ₁/γ_out, Ψ₂/γ_out)`.
    pub term_coding_gains: [f64; 3],
    /// Terms whose exponent is within 5% of the smallest.
    pub dominating_terms: Vec<Term>,
    pub psi1: f64,
    pub psi2: f64,
}

/// Relative tolerance under which two exponents count as co-dominant.
pub const DOMINATION_TIE_TOLERANCE: f64 = 0.05;

pub fn outage_asymptotic(s: &Scenario) -> Result<AsymptoticBreakdown> {
    outage_asymptotic_with(s, AsymptoticConstants::Corrected)
}

pub fn outage_asymptotic_with(s: &Scenario, constants: AsymptoticConstants) -> Result<AsymptoticBreakdown> {
    s.validate()?;
    if !s.is_iid() {
        return Err(invalid(format!(
            "asymptotic outage needs equal hop mean SNRs, got {} and {}",
            s.uwo.mean_snr, s.rf.mean_snr
        )));
    }
    if s.threshold_snr == 0.0 {
        return Err(domain("outage_asymptotic", "threshold must be positive"));
    }
    let (u, r) = (&s.uwo, &s.rf);
    let g_out = s.threshold_snr;
    let mean = s.rf.mean_snr;
    let ac = u.a * u.c;
    let am = 0.5 * r.alpha * r.mu;
    let (psi1, psi2) = match constants {
        AsymptoticConstants::Corrected => (
            u.b * ((ln_gamma(u.a + 1.0)? - (1.0 - u.w).ln()) / ac).exp(),
            ((ln_gamma(r.mu + 1.0)? - r.mu * r.mu.ln()) / am).exp(),
        ),
        AsymptoticConstants::AsPrinted => (
            u.b * (ln_gamma(u.a + 1.0)?.exp()) / (1.0 - u.w),
            (-(r.mu.ln() + ln_gamma(r.mu)?) / am).exp(),
        ),
        AsymptoticConstants::Explicit { psi1, psi2 } => {
            if !(psi1 > 0.0 && psi2 > 0.0) {
                return Err(invalid("explicit Ψ constants must be positive"));
            }
            (psi1, psi2)
        }
    };
    let ln_ratio = (mean / g_out).ln();
    let t1 = u.w * g_out / (u.lambda * mean);
    let t2 = (-ac * (psi1.ln() + ln_ratio)).exp();
    let t3 = (-am * (psi2.ln() + ln_ratio)).exp();
    let exponents = [1.0, ac, am];
    let gd = exponents.iter().copied().fold(f64::INFINITY, f64::min);
    let terms = [Term::Exponential, Term::GeneralizedGamma, Term::Rf];
    let values = [t1, t2, t3];
    let dominating_terms: Vec<Term> = terms
        .iter()
        .zip(exponents)
        .filter(|(_, e)| *e <= gd * (1.0 + DOMINATION_TIE_TOLERANCE))
        .map(|(t, _)| *t)
        .collect();
    let dominant_sum: f64 = terms
        .iter()
        .zip(values)
        .filter(|(t, _)| dominating_terms.contains(t))
        .map(|(_, v)| v)
        .sum();
    Ok(AsymptoticBreakdown {
        value: t1 + t2 + t3,
        term_exponential: t1,
        term_gg: t2,
        term_rf: t3,
        exponents,
        diversity_gain: gd,
        coding_gain: dominant_sum.powf(-1.0 / gd) / mean,
        term_coding_gains: [u.lambda / (u.w * g_out), psi1 / g_out, psi2 / g_out],
        dominating_terms,
        psi1,
        psi2,
    })
}
