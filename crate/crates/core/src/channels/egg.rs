//! Exponential–generalized-gamma (EGG) mixture for the underwater optical hop.

use rand::Rng;

use super::GenGamma;
use crate::error::{domain, invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EggParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub lambda: f64,
    /// Weight of the exponential component, in `(0, 1)`.
    pub w: f64,
    /// Linear mean SNR γ̄.
    pub mean_snr: f64,
}

impl EggParams {
    pub fn new(a: f64, b: f64, c: f64, lambda: f64, w: f64, mean_snr: f64) -> Result<Self> {
        let p = Self {
            a,
            b,
            c,
            lambda,
            w,
            mean_snr,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("a", self.a),
            ("b", self.b),
            ("c", self.c),
            ("lambda", self.lambda),
            ("mean_snr", self.mean_snr),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(format!("EGG {name} = {v} must be positive")));
            }
        }
        if !(self.w > 0.0 && self.w < 1.0) {
            return Err(invalid(format!("EGG w = {} must lie in (0, 1)", self.w)));
        }
        Ok(())
    }

    pub fn with_mean_snr(self, mean_snr: f64) -> Result<Self> {
        let p = Self { mean_snr, ..self };
        p.validate()?;
        Ok(p)
    }

    /// `(1, 1, λγ̄)`.
    pub fn exponential_part(&self) -> GenGamma {
        GenGamma {
            k: 1.0,
            p: 1.0,
            theta: self.lambda * self.mean_snr,
        }
    }

    /// `(a, c, bγ̄)`.
    pub fn gg_part(&self) -> GenGamma {
        GenGamma {
            k: self.a,
            p: self.c,
            theta: self.b * self.mean_snr,
        }
    }

    /// Mixture components with their weights.
    pub fn components(&self) -> [(f64, GenGamma); 2] {
        [(self.w, self.exponential_part()), (1.0 - self.w, self.gg_part())]
    }
}

/// `w/(λγ̄) e^{-γ/(λγ̄)} + (1-w) c/(Γ(a)γ) X^a e^{-X}`, `X = (γ/(bγ̄))^c`.
pub fn egg_pdf(p: &EggParams, snr: f64) -> Result<f64> {
    p.validate()?;
    if !(snr > 0.0) {
        return Err(domain("egg_pdf", format!("snr = {snr} must be positive")));
    }
    Ok(p.components().iter().map(|(w, g)| w * g.pdf(snr)).sum())
}

/// `w(1 - e^{-γ/(λγ̄)}) + (1-w) P(a, (γ/(bγ̄))^c)`.
pub fn egg_cdf(p: &EggParams, snr: f64) -> Result<f64> {
    p.validate()?;
    if !(snr >= 0.0) {
        return Err(domain("egg_cdf", format!("snr = {snr} must be non-negative")));
    }
    if snr == f64::INFINITY {
        return Ok(1.0);
    }
    Ok(p.components().iter().map(|(w, g)| w * g.cdf(snr)).sum())
}

/// Exponential with mean `λγ̄` with probability `w`, else `bγ̄ G^{1/c}`.
pub fn egg_sample<R: Rng + ?Sized>(p: &EggParams, rng: &mut R) -> f64 {
    if rng.random::<f64>() < p.w {
        let u: f64 = 1.0 - rng.random::<f64>();
        -p.lambda * p.mean_snr * u.ln()
    } else {
        p.gg_part().sample(rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{scenario_params, Turbulence, WaterScenario, WaterType};
    use crate::quadrature::{integrate, integrate_log, QuadConfig};
    use crate::specfun::{fox_h_ln, gamma, reg_lower_incomplete_gamma, ContourConfig, GHSpec};

    fn salty_weak() -> EggParams {
        scenario_params(WaterScenario::new(WaterType::Salty, Turbulence::Weak)).unwrap()
    }

    #[test]
    fn cdf_at_mean_snr() {
        let p = salty_weak();
        let want = p.w * (1.0 - (-1.0 / p.lambda).exp())
            + (1.0 - p.w) * reg_lower_incomplete_gamma(p.a, (1.0 / p.b).powf(p.c)).unwrap();
        let got = egg_cdf(&p, p.mean_snr).unwrap();
        assert!((got - want).abs() < 1e-14);
        assert!((got - 0.163).abs() < 5e-4, "{got}");
    }

    #[test]
    fn limits() {
        let p = salty_weak();
        assert_eq!(egg_cdf(&p, 0.0).unwrap(), 0.0);
        assert_eq!(egg_cdf(&p, f64::INFINITY).unwrap(), 1.0);
        assert!((egg_cdf(&p, 1e6).unwrap() - 1.0).abs() < 1e-12);
        assert!(egg_pdf(&p, 0.0).is_err());
        assert!(egg_cdf(&p, -1.0).is_err());
    }

    #[test]
    fn near_unit_weight_is_exponential() {
        let p = EggParams::new(0.7736, 1.1372, 49.1773, 0.4687, 1.0 - 1e-12, 2.0).unwrap();
        for x in [0.1, 1.0, 3.0] {
            let m = p.lambda * p.mean_snr;
            let want = (-x / m).exp() / m;
            assert!((egg_pdf(&p, x).unwrap() - want).abs() < 1e-10);
        }
    }

    #[test]
    fn density_integrates_to_one() {
        let p = salty_weak();
        // The GG part concentrates around bγ̄ on a relative width of about 1/c.
        let peak = (p.b * p.mean_snr).ln();
        let r = integrate_log(
            |g| egg_pdf(&p, g).unwrap(),
            -50.0,
            6.0,
            &[peak - 0.2, peak - 0.02, peak, peak + 0.02],
            &QuadConfig::default(),
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-6, "{}", r.value);
    }

    #[test]
    fn pdf_at_mean_matches_cdf_derivative() {
        let p = salty_weak();
        let x = p.mean_snr;
        let h = 1e-5;
        let fd = (egg_cdf(&p, x + h).unwrap() - egg_cdf(&p, x - h).unwrap()) / (2.0 * h);
        let f = egg_pdf(&p, x).unwrap();
        assert!(f > 0.0 && f.is_finite());
        assert!((fd - f).abs() < 1e-6 * f.max(1.0));
        let q = integrate(|g| egg_pdf(&p, g).unwrap(), 0.5, x, &[], &QuadConfig::default()).unwrap();
        assert!((q.value - (egg_cdf(&p, x).unwrap() - egg_cdf(&p, 0.5).unwrap())).abs() < 1e-10);
    }

    #[test]
    fn cdf_matches_meijer_route() {
        let cfg = ContourConfig::univariate().contour_only();
        let p = salty_weak().with_mean_snr(3.0).unwrap();
        let e = GHSpec::lower_incomplete_gamma(1.0).unwrap();
        let g = GHSpec::lower_incomplete_gamma(p.a).unwrap();
        for snr in [0.05, 1.0, 3.4, 3.6, 8.0] {
            let ln_r = (snr / p.mean_snr).ln();
            let v = p.w * fox_h_ln(&e, ln_r - p.lambda.ln(), &cfg).unwrap()
                + (1.0 - p.w) / gamma(p.a).unwrap() * fox_h_ln(&g, p.c * (ln_r - p.b.ln()), &cfg).unwrap();
            let c = egg_cdf(&p, snr).unwrap();
            assert!((v - c).abs() <= 1e-8 * c, "snr {snr}: {v} vs {c}");
        }
    }
}
