//! Ergodic capacity `E[log₂(1 + γ_e2e)]`.

use std::f64::consts::LN_2;

use super::pdf::{e2e_cdf, e2e_pdf, e2e_sf};
use super::{ln_snr_breakpoints, Scenario};
use crate::channels::GenGamma;
use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate_log, QuadConfig};
use crate::specfun::{
    fox_h_bivariate_ln, fox_h_ln, ln_gamma, BivariateGHSpec, ContourConfig, CoupledGamma, GHSpec, HParam,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityOptions {
    /// Multiply by 1/2 for a half-duplex relay.
    pub half_duplex: bool,
    /// Upper quadrature limit: the end-to-end survival drops below this.
    pub tail_mass: f64,
    pub univariate: ContourConfig,
    pub bivariate: ContourConfig,
}

impl Default for CapacityOptions {
    fn default() -> Self {
        Self {
            half_duplex: false,
            tail_mass: 1e-10,
            univariate: ContourConfig::univariate(),
            bivariate: ContourConfig::bivariate(),
        }
    }
}

impl CapacityOptions {
    fn validate(&self) -> Result<()> {
        if !(self.tail_mass > 0.0 && self.tail_mass < 1e-3) {
            return Err(invalid(format!("tail_mass {} must lie in (0, 1e-3)", self.tail_mass)));
        }
        self.univariate.validate()?;
        self.bivariate.validate()
    }

    fn scale(&self) -> f64 {
        if self.half_duplex {
            0.5
        } else {
            1.0
        }
    }
}

/// `∫ ln(1+γ) f(γ) dγ` for one component:
/// `(p/Γ(k)) H^{3,1}_{2,3}[θ^{-p} | (0,p), (1,p); (k,1), (0,p), (0,p)]`.
fn log_moment(g: &GenGamma, cfg: &ContourConfig) -> Result<f64> {
    let spec = GHSpec::new(
        3,
        1,
        vec![HParam::new(0.0, g.p), HParam::new(1.0, g.p)],
        vec![HParam::unit(g.k), HParam::new(0.0, g.p), HParam::new(0.0, g.p)],
    )?;
    Ok(g.p * (-ln_gamma(g.k)?).exp() * fox_h_ln(&spec, -g.p * g.theta.ln(), cfg)?)
}

/// `∫ ln(1+γ) f_i(γ) F_j(γ) dγ` as a bivariate H-function with coupling
/// block `Γ(1−v) Γ(v)² / Γ(1+v)`, `v = p_i s + p_j t`.
fn cross_log_moment(gi: &GenGamma, gj: &GenGamma, cfg: &ContourConfig) -> Result<f64> {
    let v = |offset: f64, sign: f64, in_numerator: bool| CoupledGamma {
        offset,
        x_scale: sign * gi.p,
        y_scale: sign * gj.p,
        in_numerator,
    };
    let spec = BivariateGHSpec::new(
        vec![
            v(1.0, -1.0, true),
            v(0.0, 1.0, true),
            v(0.0, 1.0, true),
            v(1.0, 1.0, false),
        ],
        GHSpec::power_exponential(gi.k)?,
        GHSpec::lower_incomplete_gamma(gj.k)?,
    )?;
    let pre = gi.p * (-ln_gamma(gi.k)? - ln_gamma(gj.k)?).exp();
    Ok(pre * fox_h_bivariate_ln(&spec, -gi.p * gi.theta.ln(), -gj.p * gj.theta.ln(), cfg)?)
}

/// Closed-form capacity in bit/s/Hz for an RF hop with `α = 2`.
pub fn capacity_closed_form(s: &Scenario) -> Result<f64> {
    capacity_closed_form_with(s, &CapacityOptions::default())
}

pub fn capacity_closed_form_with(s: &Scenario, opts: &CapacityOptions) -> Result<f64> {
    s.validate()?;
    opts.validate()?;
    if s.rf.alpha != 2.0 {
        return Err(Error::Unsupported(format!(
            "closed-form capacity needs α = 2 (got {}); use capacity_quadrature",
            s.rf.alpha
        )));
    }
    let [(w1, e), (w2, g), (_, r)] = s.components();
    let mut nats = log_moment(&r, &opts.univariate)?;
    for (w, c) in [(w1, e), (w2, g)] {
        nats += w * log_moment(&c, &opts.univariate)?;
        nats -= w * cross_log_moment(&c, &r, &opts.bivariate)?;
        nats -= w * cross_log_moment(&r, &c, &opts.bivariate)?;
    }
    Ok(opts.scale() * nats / LN_2)
}

pub fn capacity_quadrature(s: &Scenario) -> Result<f64> {
    capacity_quadrature_with(s, &CapacityOptions::default())
}

/// `∫ log₂(1+γ) f_e2e(γ) dγ` by adaptive quadrature in `ln γ`; works for any α.
pub fn capacity_quadrature_with(s: &Scenario, opts: &CapacityOptions) -> Result<f64> {
    s.validate()?;
    opts.validate()?;
    let comps = s.components();
    let ln_thetas = comps.iter().map(|(_, c)| c.theta.ln());
    let mut ln_hi = ln_thetas.clone().fold(f64::NEG_INFINITY, f64::max);
    while e2e_sf(s, ln_hi.exp())? > opts.tail_mass {
        ln_hi += 0.5;
    }
    let mut ln_lo = ln_thetas.fold(f64::INFINITY, f64::min);
    while ln_lo > -700.0 && e2e_cdf(s, ln_lo.exp())? > 1e-14 {
        ln_lo -= 0.5;
    }
    let bps = ln_snr_breakpoints(&comps);
    let r = integrate_log(
        |g| g.ln_1p() * e2e_pdf(s, g).unwrap_or(f64::NAN),
        ln_lo,
        ln_hi,
        &bps,
        &QuadConfig::default(),
    )?;
    Ok(opts.scale() * r.value / LN_2)
}
