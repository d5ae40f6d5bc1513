//! Metric sweeps over a mean-SNR grid.

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use uwrelay_core::channels::units::db_to_linear;
use uwrelay_core::channels::{AlphaMuParams, Catalog};
use uwrelay_core::metrics::{
    asep_e2e, asep_e2e_quadrature, capacity_closed_form_with, capacity_quadrature_with, outage_asymptotic,
    outage_exact, outage_quadrature, CapacityOptions, MetricCurve, ModulationParams, Provenance, Scenario,
};
use uwrelay_core::montecarlo::{simulate_asep, simulate_capacity, simulate_outage, SimConfig};
use uwrelay_core::specfun::ContourConfig;

use crate::config::{Config, Metric};

/// Methods accepted for each metric; `all` expands to this list.
pub fn methods_for(metric: Metric) -> &'static [Provenance] {
    match metric {
        Metric::Outage => &[
            Provenance::ClosedForm,
            Provenance::Asymptotic,
            Provenance::MonteCarlo,
            Provenance::Quadrature,
        ],
        Metric::Asep | Metric::Capacity => &[Provenance::ClosedForm, Provenance::MonteCarlo, Provenance::Quadrature],
    }
}

pub fn parse_methods(metric: Metric, names: &[String]) -> Result<Vec<Provenance>> {
    let mut out: Vec<Provenance> = Vec::new();
    for name in names {
        let parsed: Vec<Provenance> = if name == "all" {
            methods_for(metric).to_vec()
        } else {
            vec![name.parse().map_err(anyhow::Error::from)?]
        };
        for m in parsed {
            if !out.contains(&m) {
                out.push(m);
            }
        }
    }
    if out.is_empty() {
        bail!("no methods requested");
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct RfChoice {
    pub name: String,
    pub alpha: f64,
    pub mu: f64,
}

#[derive(Debug, Clone)]
pub struct SweepRequest {
    pub metric: Metric,
    pub scenarios: Vec<String>,
    pub rf: Vec<RfChoice>,
    pub snr_db: Vec<f64>,
    pub methods: Vec<Provenance>,
    pub threshold_db: f64,
    /// RF-hop mean SNR relative to the optical hop.
    pub rf_offset_db: f64,
    pub modulation: ModulationParams,
    pub half_duplex: bool,
    pub sim: SimConfig,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub scenario: String,
    pub rf: String,
    pub curve: MetricCurve,
}

struct Job {
    label: String,
    scenario_name: String,
    rf_name: String,
    base: Scenario,
    method: Provenance,
}

impl SweepRequest {
    /// Rejects incompatible method/metric/scenario combinations before any
    /// evaluation starts.
    fn jobs(&self, catalog: &Catalog) -> Result<Vec<Job>> {
        if self.snr_db.is_empty() {
            bail!("empty SNR grid");
        }
        if self.scenarios.is_empty() || self.rf.is_empty() {
            bail!("at least one scenario and one RF setting are required");
        }
        if !self.threshold_db.is_finite() || !self.rf_offset_db.is_finite() {
            bail!("threshold and RF offset must be finite");
        }
        self.modulation.validate()?;
        if self.methods.contains(&Provenance::MonteCarlo) {
            self.sim.validate()?;
        }
        for m in &self.methods {
            if !methods_for(self.metric).contains(m) {
                bail!(
                    "method {} is not available for metric {}",
                    m.as_str(),
                    self.metric.as_str()
                );
            }
        }
        if self.methods.contains(&Provenance::Asymptotic) && self.rf_offset_db != 0.0 {
            bail!("the asymptotic outage requires i.i.d. hops; drop --rf-offset-db or the asymptotic method");
        }
        if self.half_duplex && self.metric != Metric::Capacity {
            bail!("--half-duplex applies to the capacity metric only");
        }
        let threshold = db_to_linear(self.threshold_db);
        let mut jobs = Vec::new();
        for name in &self.scenarios {
            let entry = catalog.get(name)?;
            for rf in &self.rf {
                if self.metric == Metric::Capacity && self.methods.contains(&Provenance::ClosedForm) && rf.alpha != 2.0
                {
                    bail!(
                        "the capacity closed form needs α = 2 (RF setting {} has α = {}); use quadrature or monte-carlo",
                        rf.name,
                        rf.alpha
                    );
                }
                let rf_params =
                    AlphaMuParams::new(rf.alpha, rf.mu, 1.0).with_context(|| format!("RF setting {}", rf.name))?;
                let base = Scenario::new(entry.params, rf_params, threshold, self.modulation)?;
                for &method in &self.methods {
                    jobs.push(Job {
                        label: format!("{}_{}_{}", entry.name, rf.name, method.as_str()),
                        scenario_name: entry.name.clone(),
                        rf_name: rf.name.clone(),
                        base,
                        method,
                    });
                }
            }
        }
        Ok(jobs)
    }

    fn at(&self, base: &Scenario, db: f64) -> Result<Scenario> {
        let s = base.with_mean_snr(db_to_linear(db))?;
        Ok(Scenario {
            rf: s.rf.with_mean_snr(db_to_linear(db + self.rf_offset_db))?,
            ..s
        })
    }

    fn capacity_options(&self) -> CapacityOptions {
        CapacityOptions {
            half_duplex: self.half_duplex,
            ..Default::default()
        }
    }

    fn analytic(&self, job: &Job, db: f64) -> Result<f64> {
        let s = self.at(&job.base, db)?;
        let cfg = ContourConfig::univariate();
        let v = match (self.metric, job.method) {
            (Metric::Outage, Provenance::ClosedForm) => outage_exact(&s)?,
            (Metric::Outage, Provenance::Asymptotic) => outage_asymptotic(&s)?.value,
            (Metric::Outage, Provenance::Quadrature) => outage_quadrature(&s)?,
            (Metric::Asep, Provenance::ClosedForm) => asep_e2e(&s, &cfg)?,
            (Metric::Asep, Provenance::Quadrature) => asep_e2e_quadrature(&s)?,
            (Metric::Capacity, Provenance::ClosedForm) => capacity_closed_form_with(&s, &self.capacity_options())?,
            (Metric::Capacity, Provenance::Quadrature) => capacity_quadrature_with(&s, &self.capacity_options())?,
            (metric, method) => bail!("method {} is not available for {}", method.as_str(), metric.as_str()),
        };
        Ok(v)
    }

    fn monte_carlo(&self, job: &Job, point: usize, db: f64) -> Result<(f64, f64)> {
        let s = self.at(&job.base, db)?;
        let sim = SimConfig {
            root_seed: point_seed(self.sim.root_seed, &job.label, point),
            ..self.sim
        };
        let est = match self.metric {
            Metric::Outage => simulate_outage(&s, &sim)?,
            Metric::Asep => simulate_asep(&s, &sim)?,
            Metric::Capacity => simulate_capacity(&s, &sim, &self.capacity_options())?,
        };
        Ok((est.value, est.stderr))
    }

    /// Evaluates every series. Analytic points run in parallel; Monte-Carlo
    /// points run in order, each parallel over `sim.workers` threads.
    pub fn run(&self, catalog: &Catalog) -> Result<Vec<Series>> {
        let jobs = self.jobs(catalog)?;
        let mut out = Vec::with_capacity(jobs.len());
        for job in &jobs {
            let label = || format!("{} at", job.label);
            let (values, stderr) = if job.method == Provenance::MonteCarlo {
                let mut v = Vec::with_capacity(self.snr_db.len());
                let mut e = Vec::with_capacity(self.snr_db.len());
                for (i, &db) in self.snr_db.iter().enumerate() {
                    let (x, se) = self
                        .monte_carlo(job, i, db)
                        .with_context(|| format!("{} {db} dB", label()))?;
                    v.push(x);
                    e.push(se);
                }
                (v, Some(e))
            } else {
                let v = self
                    .snr_db
                    .par_iter()
                    .map(|&db| self.analytic(job, db).with_context(|| format!("{} {db} dB", label())))
                    .collect::<Result<Vec<f64>>>()?;
                (v, None)
            };
            out.push(Series {
                label: job.label.clone(),
                scenario: job.scenario_name.clone(),
                rf: job.rf_name.clone(),
                curve: MetricCurve::new(self.snr_db.clone(), values, job.method, stderr)?,
            });
        }
        Ok(out)
    }
}

/// Seed for one Monte-Carlo point, stable under adding or reordering series.
pub fn point_seed(root: u64, label: &str, point: usize) -> u64 {
    // FNV-1a over the label, then SplitMix64 finalization.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = root ^ h ^ (point as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rf_choices(cfg: &Config, names: &[String]) -> Result<Vec<RfChoice>> {
    names
        .iter()
        .map(|n| {
            let (name, alpha, mu) = cfg.rf_setting(n)?;
            Ok(RfChoice { name, alpha, mu })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn request(metric: Metric, methods: &[Provenance]) -> SweepRequest {
        SweepRequest {
            metric,
            scenarios: vec!["salty-weak".into()],
            rf: vec![RfChoice {
                name: "rayleigh".into(),
                alpha: 2.0,
                mu: 1.0,
            }],
            snr_db: vec![0.0, 10.0, 20.0],
            methods: methods.to_vec(),
            threshold_db: 0.0,
            rf_offset_db: 0.0,
            modulation: ModulationParams::BPSK,
            half_duplex: false,
            sim: SimConfig {
                trials: 20_000,
                root_seed: 7,
                batch_size: 4096,
                workers: 2,
            },
        }
    }

    #[test]
    fn methods_expand_and_dedupe() {
        let all = parse_methods(Metric::Outage, &["all".into(), "closed-form".into()]).unwrap();
        assert_eq!(all.len(), 4);
        assert_eq!(parse_methods(Metric::Asep, &["all".into()]).unwrap().len(), 3);
        assert!(parse_methods(Metric::Asep, &["bogus".into()]).is_err());
        assert!(parse_methods(Metric::Asep, &[]).is_err());
    }

    #[test]
    fn incompatible_requests_are_rejected() {
        let cat = Catalog::builtin();
        assert!(request(Metric::Asep, &[Provenance::Asymptotic]).run(&cat).is_err());
        let mut r = request(Metric::Outage, &[Provenance::Asymptotic]);
        r.rf_offset_db = 3.0;
        assert!(r.run(&cat).is_err());
        let mut r = request(Metric::Capacity, &[Provenance::ClosedForm]);
        r.rf[0].alpha = 3.5;
        assert!(r.run(&cat).is_err());
        let mut r = request(Metric::Outage, &[Provenance::ClosedForm]);
        r.snr_db.clear();
        assert!(r.run(&cat).is_err());
        let mut r = request(Metric::Outage, &[Provenance::ClosedForm]);
        r.scenarios = vec!["muddy-weak".into()];
        assert!(r.run(&cat).is_err());
    }

    #[test]
    fn closed_form_and_quadrature_agree() {
        let r = request(Metric::Outage, &[Provenance::ClosedForm, Provenance::Quadrature]);
        let series = r.run(&Catalog::builtin()).unwrap();
        assert_eq!(series.len(), 2);
        for (a, b) in series[0].curve.values().iter().zip(series[1].curve.values()) {
            assert!((a - b).abs() <= 1e-8 * a);
        }
        assert!(series[0].curve.stderr().is_none());
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let r = request(Metric::Asep, &[Provenance::MonteCarlo]);
        let a = r.run(&Catalog::builtin()).unwrap();
        let b = r.run(&Catalog::builtin()).unwrap();
        assert_eq!(a[0].curve, b[0].curve);
        assert_eq!(a[0].curve.stderr().unwrap().len(), 3);
    }

    #[test]
    fn seeds_differ_per_point_and_series() {
        assert_ne!(point_seed(1, "a", 0), point_seed(1, "a", 1));
        assert_ne!(point_seed(1, "a", 0), point_seed(1, "b", 0));
        assert_ne!(point_seed(1, "a", 0), point_seed(2, "a", 0));
        assert_eq!(point_seed(1, "a", 3), point_seed(1, "a", 3));
    }
}
