//! Outage probability, average symbol error probability and ergodic
//! capacity of the dual-hop decode-and-forward link, in closed form and by
//! quadrature.

mod asep;
mod capacity;
mod outage;
mod pdf;

pub use asep::{
    asep_combine, asep_e2e, asep_e2e_assembled, asep_e2e_quadrature, asep_hop_quadrature, asep_hop_rf, asep_hop_uwo,
};
pub use capacity::{
    capacity_closed_form, capacity_closed_form_with, capacity_quadrature, capacity_quadrature_with, CapacityOptions,
};
pub use outage::{
    outage_asymptotic, outage_asymptotic_with, outage_combined, outage_exact, outage_exact_with, outage_quadrature,
    AsymptoticBreakdown, AsymptoticConstants, Term,
};
pub use pdf::{e2e_cdf, e2e_pdf, e2e_pdf_assembled, e2e_sf};

use crate::channels::{AlphaMuParams, EggParams, GenGamma};
use crate::error::{invalid, Result};

/// Symbol-error constants in `P_e(γ) = (η/2) erfc(√(βγ))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulationParams {
    pub eta: f64,
    pub beta: f64,
}

impl ModulationParams {
    pub const BPSK: ModulationParams = ModulationParams { eta: 1.0, beta: 1.0 };

    pub fn new(eta: f64, beta: f64) -> Result<Self> {
        let m = Self { eta, beta };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.beta > 0.0) || !self.eta.is_finite() || !self.beta.is_finite() {
            return Err(invalid(format!(
                "modulation ({}, {}) must be positive",
                self.eta, self.beta
            )));
        }
        Ok(())
    }
}

impl Default for ModulationParams {
    fn default() -> Self {
        Self::BPSK
    }
}

/// Full description of the underwater-optical → RF link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub uwo: EggParams,
    pub rf: AlphaMuParams,
    /// Outage threshold γ_out (linear); zero means outage never occurs.
    pub threshold_snr: f64,
    pub modulation: ModulationParams,
}

impl Scenario {
    pub fn new(uwo: EggParams, rf: AlphaMuParams, threshold_snr: f64, modulation: ModulationParams) -> Result<Self> {
        let s = Self {
            uwo,
            rf,
            threshold_snr,
            modulation,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.uwo.validate()?;
        self.rf.validate()?;
        self.modulation.validate()?;
        if !(self.threshold_snr >= 0.0) || !self.threshold_snr.is_finite() {
            return Err(invalid(format!(
                "threshold {} must be non-negative",
                self.threshold_snr
            )));
        }
        Ok(())
    }

    /// Same scenario with both hops at mean SNR `mean_snr` (linear).
    pub fn with_mean_snr(&self, mean_snr: f64) -> Result<Self> {
        Ok(Self {
            uwo: self.uwo.with_mean_snr(mean_snr)?,
            rf: self.rf.with_mean_snr(mean_snr)?,
            ..*self
        })
    }

    pub fn is_iid(&self) -> bool {
        (self.uwo.mean_snr - self.rf.mean_snr).abs() <= 1e-12 * self.rf.mean_snr
    }

    /// Hop SNR laws as weighted generalized-gamma components; the RF hop is
    /// the last entry.
    pub(crate) fn components(&self) -> [(f64, GenGamma); 3] {
        let [e, g] = self.uwo.components();
        [e, g, (1.0, self.rf.component())]
    }
}

/// Quadrature breakpoints in `ln γ` covering the mass of each component:
/// `ln X` from where `F ≈ e^{-37}` (or `e^{-745}`) up to past the mode.
pub(crate) fn ln_snr_breakpoints(components: &[(f64, GenGamma)]) -> Vec<f64> {
    let mut out = Vec::new();
    for (_, c) in components {
        let lo = (-37.0 / c.k).max(-745.0);
        let hi = (c.k + 40.0).ln() + 1.0;
        let mut u = lo;
        while u < hi {
            out.push(c.theta.ln() + u / c.p);
            u += if u < -2.0 { 2.0 } else { 0.25 };
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    ClosedForm,
    Asymptotic,
    MonteCarlo,
    Quadrature,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::Asymptotic => "asymptotic",
            Provenance::MonteCarlo => "monte-carlo",
            Provenance::Quadrature => "quadrature",
        }
    }
}

impl std::str::FromStr for Provenance {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed-form" | "closed" | "exact" => Ok(Provenance::ClosedForm),
            "asymptotic" => Ok(Provenance::Asymptotic),
            "monte-carlo" | "mc" => Ok(Provenance::MonteCarlo),
            "quadrature" => Ok(Provenance::Quadrature),
            _ => Err(invalid(format!("unknown method {s}"))),
        }
    }
}

/// One metric evaluated over a mean-SNR grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricCurve {
    mean_snr_db: Vec<f64>,
    values: Vec<f64>,
    provenance: Provenance,
    stderr: Option<Vec<f64>>,
}

impl MetricCurve {
    /// Standard errors must be given exactly for Monte-Carlo curves.
    pub fn new(
        mean_snr_db: Vec<f64>,
        values: Vec<f64>,
        provenance: Provenance,
        stderr: Option<Vec<f64>>,
    ) -> Result<Self> {
        if mean_snr_db.len() != values.len() {
            return Err(invalid("grid and value lengths differ"));
        }
        match (&stderr, provenance) {
            (Some(se), Provenance::MonteCarlo) if se.len() == values.len() => {}
            (None, p) if p != Provenance::MonteCarlo => {}
            _ => return Err(invalid("stderr must be present exactly for Monte-Carlo curves")),
        }
        Ok(Self {
            mean_snr_db,
            values,
            provenance,
            stderr,
        })
    }

    pub fn mean_snr_db(&self) -> &[f64] {
        &self.mean_snr_db
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn stderr(&self) -> Option<&[f64]> {
        self.stderr.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_invariants() {
        assert!(MetricCurve::new(vec![0.0], vec![1.0], Provenance::ClosedForm, None).is_ok());
        assert!(MetricCurve::new(vec![0.0], vec![1.0], Provenance::MonteCarlo, None).is_err());
        assert!(MetricCurve::new(vec![0.0], vec![1.0], Provenance::ClosedForm, Some(vec![0.1])).is_err());
        assert!(MetricCurve::new(vec![0.0, 1.0], vec![1.0], Provenance::Quadrature, None).is_err());
        assert!(MetricCurve::new(vec![0.0], vec![1.0], Provenance::MonteCarlo, Some(vec![0.1])).is_ok());
    }

    #[test]
    fn modulation_checks() {
        assert_eq!(ModulationParams::default(), ModulationParams::new(1.0, 1.0).unwrap());
        assert!(ModulationParams::new(0.0, 1.0).is_err());
    }
}
