//! Average symbol error probability for `P_e(γ) = (η/2) erfc(√(βγ))`.

use std::f64::consts::PI;

use super::{ln_snr_breakpoints, ModulationParams, Scenario};
use crate::channels::{AlphaMuParams, EggParams, GenGamma};
use crate::error::{domain, Result};
use crate::quadrature::{integrate_log, QuadConfig};
use crate::specfun::{fox_h_ln, ln_gamma, ContourConfig, GHSpec, HParam};

/// `H^{1,2}_{2,2}[(βθ)^{-p} | (1/2, p), (1, 1); (k, 1), (0, 1)]`, so that one
/// component contributes `ω η/(2√π Γ(k)) · H`.
fn component_h(g: &GenGamma, m: &ModulationParams, cfg: &ContourConfig) -> Result<f64> {
    let spec = GHSpec::new(
        1,
        2,
        vec![HParam::new(0.5, g.p), HParam::unit(1.0)],
        vec![HParam::unit(g.k), HParam::unit(0.0)],
    )?;
    fox_h_ln(&spec, -g.p * (m.beta * g.theta).ln(), cfg)
}

fn component_asep(w: f64, g: &GenGamma, m: &ModulationParams, cfg: &ContourConfig) -> Result<f64> {
    let pre = w * m.eta / (2.0 * PI.sqrt()) * (-ln_gamma(g.k)?).exp();
    Ok(pre * component_h(g, m, cfg)?)
}

/// ASEP of the optical hop.
pub fn asep_hop_uwo(p: &EggParams, m: &ModulationParams, cfg: &ContourConfig) -> Result<f64> {
    p.validate()?;
    m.validate()?;
    p.components()
        .iter()
        .try_fold(0.0, |acc, (w, g)| Ok(acc + component_asep(*w, g, m, cfg)?))
}

/// ASEP of the RF hop.
pub fn asep_hop_rf(p: &AlphaMuParams, m: &ModulationParams, cfg: &ContourConfig) -> Result<f64> {
    p.validate()?;
    m.validate()?;
    component_asep(1.0, &p.component(), m, cfg)
}

/// CDF-based hop ASEP `η√β/(2√π) ∫ e^{-βγ} γ^{-1/2} F(γ) dγ` by adaptive
/// quadrature, for a mixture of weighted generalized-gamma components.
pub fn asep_hop_quadrature(components: &[(f64, GenGamma)], m: &ModulationParams) -> Result<f64> {
    m.validate()?;
    let k = m.eta * m.beta.sqrt() / (2.0 * PI.sqrt());
    let cdf = |g: f64| components.iter().map(|(w, c)| w * c.cdf(g)).sum::<f64>();
    let mut bps = ln_snr_breakpoints(components);
    bps.push(-m.beta.ln());
    // e^{-βγ} < e^{-745} beyond the upper limit; below e^{-700} the integrand
    // is bounded by γ^{1/2}.
    let ln_hi = (745.0 / m.beta).ln();
    let r = integrate_log(
        |g| (-m.beta * g).exp() / g.sqrt() * cdf(g),
        -700.0,
        ln_hi,
        &bps,
        &QuadConfig::default(),
    )?;
    Ok(k * r.value)
}

/// DF end-to-end combination `P₁ + P₂ − 2P₁P₂`.
pub fn asep_combine(p_uwo: f64, p_rf: f64) -> Result<f64> {
    for p in [p_uwo, p_rf] {
        if !(0.0..=1.0).contains(&p) {
            return Err(domain("asep_combine", format!("hop ASEP {p} outside [0, 1]")));
        }
    }
    Ok(p_uwo + p_rf - 2.0 * p_uwo * p_rf)
}

/// End-to-end ASEP from the two closed-form hop values.
pub fn asep_e2e(s: &Scenario, cfg: &ContourConfig) -> Result<f64> {
    s.validate()?;
    asep_combine(
        asep_hop_uwo(&s.uwo, &s.modulation, cfg)?,
        asep_hop_rf(&s.rf, &s.modulation, cfg)?,
    )
}

/// End-to-end ASEP from the quadrature hop values.
pub fn asep_e2e_quadrature(s: &Scenario) -> Result<f64> {
    s.validate()?;
    asep_combine(
        asep_hop_quadrature(&s.uwo.components(), &s.modulation)?,
        asep_hop_quadrature(&[(1.0, s.rf.component())], &s.modulation)?,
    )
}

/// End-to-end ASEP written out as a single expression
/// `K{A + B + R − 2K·R(A + B)}` with `K = η√β/(2√π)` and `A, B, R` the
/// scaled H-terms of the exponential, generalized-gamma and RF components.
pub fn asep_e2e_assembled(s: &Scenario, cfg: &ContourConfig) -> Result<f64> {
    s.validate()?;
    let m = &s.modulation;
    let k = m.eta * m.beta.sqrt() / (2.0 * PI.sqrt());
    let sb = m.beta.sqrt();
    let [(w, e), (v, g), (_, r)] = s.components();
    let a = w / sb * component_h(&e, m, cfg)?;
    let b = v / ((ln_gamma(g.k)?).exp() * sb) * component_h(&g, m, cfg)?;
    let rr = 1.0 / (sb * (ln_gamma(r.k)?).exp()) * component_h(&r, m, cfg)?;
    Ok(k * (a + b + rr - 2.0 * k * rr * (a + b)))
}
