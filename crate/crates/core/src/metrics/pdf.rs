//! End-to-end SNR law `γ_e2e = min(γ₁, γ₂)`.

use super::Scenario;
use crate::error::{invalid, Result};
use crate::specfun::{fox_h_ln, ln_gamma, ContourConfig, GHSpec};

fn check(s: &Scenario, snr: f64) -> Result<()> {
    s.validate()?;
    if !(snr > 0.0) || !snr.is_finite() {
        return Err(invalid(format!("SNR {snr} must be positive and finite")));
    }
    Ok(())
}

fn uwo_cdf_sf_pdf(s: &Scenario, snr: f64) -> (f64, f64, f64) {
    let [(w, e), (v, g)] = s.uwo.components();
    (
        w * e.cdf(snr) + v * g.cdf(snr),
        w * e.sf(snr) + v * g.sf(snr),
        w * e.pdf(snr) + v * g.pdf(snr),
    )
}

/// `F(γ) = F₁ + F₂ − F₁F₂`, written as `F₁ + F₂(1 − F₁)`.
pub fn e2e_cdf(s: &Scenario, snr: f64) -> Result<f64> {
    check(s, snr)?;
    let (f1, s1, _) = uwo_cdf_sf_pdf(s, snr);
    let rf = s.rf.component();
    Ok((f1 + rf.cdf(snr) * s1).min(1.0))
}

/// `1 − F(γ) = S₁S₂`, accurate in the upper tail.
pub fn e2e_sf(s: &Scenario, snr: f64) -> Result<f64> {
    check(s, snr)?;
    let (_, s1, _) = uwo_cdf_sf_pdf(s, snr);
    Ok(s1 * s.rf.component().sf(snr))
}

/// `f(γ) = f₁S₂ + f₂S₁`.
pub fn e2e_pdf(s: &Scenario, snr: f64) -> Result<f64> {
    check(s, snr)?;
    let (_, s1, f1) = uwo_cdf_sf_pdf(s, snr);
    let rf = s.rf.component();
    Ok(f1 * rf.sf(snr) + rf.pdf(snr) * s1)
}

/// [`e2e_pdf`] assembled from Meijer-G terms: each component density is
/// `p/(Γ(k)γ) G^{1,0}_{0,1}[X | k]` and each CDF `G^{1,1}_{1,2}[X | 1; k, 0]/Γ(k)`,
/// with `X = (γ/θ)^p`. The `f − fF` differences cancel in the upper tail, so
/// the error is relative to `f₁ + f₂` rather than to the result.
pub fn e2e_pdf_assembled(s: &Scenario, snr: f64, cfg: &ContourConfig) -> Result<f64> {
    check(s, snr)?;
    let mut dens = [0.0; 3];
    let mut cdfs = [0.0; 3];
    for (i, (w, g)) in s.components().into_iter().enumerate() {
        let ln_x = g.ln_x(snr);
        let inv_gk = (-ln_gamma(g.k)?).exp();
        dens[i] = w * g.p * inv_gk / snr * fox_h_ln(&GHSpec::power_exponential(g.k)?, ln_x, cfg)?;
        cdfs[i] = w * inv_gk * fox_h_ln(&GHSpec::lower_incomplete_gamma(g.k)?, ln_x, cfg)?;
    }
    let f_uwo = dens[0] + dens[1];
    let cdf_uwo = cdfs[0] + cdfs[1];
    Ok(f_uwo + dens[2] - f_uwo * cdfs[2] - dens[2] * cdf_uwo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::outage_exact;
    use crate::metrics::testutil::scenario;
    use crate::quadrature::{integrate_log, QuadConfig};

    #[test]
    fn cdf_and_sf_are_complementary() {
        let s = scenario("fresh-moderate", 2.5, 1.5, 10.0);
        for g in [1e-3, 0.5, 3.0, 10.0, 80.0] {
            let c = e2e_cdf(&s, g).unwrap();
            let t = e2e_sf(&s, g).unwrap();
            assert!((c + t - 1.0).abs() < 1e-14, "{g}");
        }
    }

    #[test]
    fn cdf_at_threshold_is_outage() {
        let s = scenario("salty-strong", 2.0, 1.0, 12.0);
        let c = e2e_cdf(&s, s.threshold_snr).unwrap();
        assert!((c / outage_exact(&s).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pdf_matches_cdf_difference_and_integrates_to_cdf() {
        let s = scenario("salty-weak", 3.0, 0.7, 5.0);
        for g in [0.05, 0.9, 2.0, 7.0] {
            let h = 1e-5 * g;
            let fd = (e2e_cdf(&s, g + h).unwrap() - e2e_cdf(&s, g - h).unwrap()) / (2.0 * h);
            assert!((fd / e2e_pdf(&s, g).unwrap() - 1.0).abs() < 1e-6);
        }
        let bps = crate::metrics::ln_snr_breakpoints(&s.components());
        let r = integrate_log(|g| e2e_pdf(&s, g).unwrap(), -60.0, 3.0, &bps, &QuadConfig::default()).unwrap();
        assert!((r.value - e2e_cdf(&s, 3f64.exp()).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn assembled_form_agrees() {
        let fast = ContourConfig::univariate();
        let slow = fast.contour_only();
        for (row, db) in [("fresh-weak", 20.0), ("salty-severe", 3.0)] {
            let s = scenario(row, 2.0, 2.0, db);
            for g in [0.1, 1.0, 4.0, 10.0] {
                let want = e2e_pdf(&s, g).unwrap();
                let scale: f64 = s.components().iter().map(|(w, c)| w * c.pdf(g)).sum();
                let a = e2e_pdf_assembled(&s, g, &fast).unwrap();
                assert!((a - want).abs() <= 1e-12 * scale, "{row} {g}");
                // At γ = 10 the generalized-gamma density is e^{-e^{37}}, far
                // below what a contour integral can resolve.
                match e2e_pdf_assembled(&s, g, &slow) {
                    Ok(b) => assert!((b - want).abs() <= 1e-8 * scale, "{row} {g}: {b} vs {want}"),
                    Err(e) => assert!(g == 10.0 && row == "salty-severe", "{row} {g}: {e}"),
                }
            }
        }
    }

    #[test]
    fn rejects_bad_snr() {
        let s = scenario("salty-weak", 2.0, 1.0, 5.0);
        assert!(e2e_pdf(&s, 0.0).is_err());
        assert!(e2e_cdf(&s, f64::NAN).is_err());
    }
}
