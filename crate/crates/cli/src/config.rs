//! TOML configuration: catalog overrides, named RF settings and sweep
//! presets, layered over the built-in figure presets.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use uwrelay_core::channels::Catalog;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Outage,
    Asep,
    Capacity,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Outage => "outage",
            Metric::Asep => "asep",
            Metric::Capacity => "capacity",
        }
    }

    /// Outage and ASEP are plotted on a log ordinate.
    pub fn log_scale(self) -> bool {
        !matches!(self, Metric::Capacity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<f64>> {
        let GridSpec { start, stop, step } = *self;
        if ![start, stop, step].iter().all(|v| v.is_finite()) || step <= 0.0 || stop < start {
            bail!("invalid SNR grid: start {start}, stop {stop}, step {step}");
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if n > 10_000 {
            bail!("SNR grid has {n} points; at most 10000 are allowed");
        }
        Ok((0..n).map(|i| start + i as f64 * step).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RfSetting {
    pub alpha: f64,
    pub mu: f64,
}

/// A sweep preset; unset fields fall back to the sweep defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Preset {
    pub name: String,
    pub description: Option<String>,
    pub metric: Option<Metric>,
    pub scenarios: Option<Vec<String>>,
    pub rf: Option<Vec<String>>,
    pub snr: Option<GridSpec>,
    pub methods: Option<Vec<String>>,
    pub threshold_db: Option<f64>,
    pub rf_offset_db: Option<f64>,
    pub eta: Option<f64>,
    pub beta: Option<f64>,
    pub half_duplex: Option<bool>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub batch_size: Option<u64>,
    pub workers: Option<usize>,
    pub formats: Option<Vec<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    output_dir: Option<PathBuf>,
    #[serde(default)]
    uwo: Vec<toml::Table>,
    #[serde(default)]
    rf: BTreeMap<String, RfSetting>,
    #[serde(default)]
    preset: Vec<Preset>,
}

pub const BUILTIN_RF: [(&str, f64, f64); 6] = [
    ("rayleigh", 2.0, 1.0),
    ("nakagami", 2.0, 2.0),
    ("exponential", 1.0, 1.0),
    ("one-sided-gaussian", 2.0, 0.5),
    ("weibull", 2.5, 1.0),
    ("alpha-mu", 3.5, 0.8),
];

fn strings(xs: &[&str]) -> Option<Vec<String>> {
    Some(xs.iter().map(|s| s.to_string()).collect())
}

const ALL_ROWS: [&str; 6] = [
    "salty-weak",
    "salty-moderate",
    "salty-severe",
    "fresh-weak",
    "fresh-moderate",
    "fresh-severe",
];

fn builtin_presets() -> Vec<Preset> {
    let grid = Some(GridSpec {
        start: 0.0,
        stop: 40.0,
        step: 5.0,
    });
    let rf_family = strings(&["rayleigh", "nakagami", "weibull", "alpha-mu"]);
    vec![
        Preset {
            name: "fig2-style".into(),
            description: Some("outage, salty water with weak turbulence, several α-μ RF hops".into()),
            metric: Some(Metric::Outage),
            scenarios: strings(&["salty-weak"]),
            rf: rf_family.clone(),
            snr: grid,
            methods: strings(&["closed-form", "asymptotic", "monte-carlo"]),
            ..Default::default()
        },
        Preset {
            name: "fig3-style".into(),
            description: Some("outage over the six turbulence conditions, Rayleigh RF hop".into()),
            metric: Some(Metric::Outage),
            scenarios: strings(&ALL_ROWS),
            rf: strings(&["rayleigh"]),
            snr: grid,
            methods: strings(&["closed-form", "asymptotic", "monte-carlo"]),
            ..Default::default()
        },
        Preset {
            name: "fig4-style".into(),
            description: Some("BPSK ASEP, salty water with weak turbulence, several α-μ RF hops".into()),
            metric: Some(Metric::Asep),
            scenarios: strings(&["salty-weak"]),
            rf: rf_family,
            snr: grid,
            methods: strings(&["closed-form", "monte-carlo"]),
            ..Default::default()
        },
        Preset {
            name: "fig5-style".into(),
            description: Some("BPSK ASEP over the six turbulence conditions, Rayleigh RF hop".into()),
            metric: Some(Metric::Asep),
            scenarios: strings(&ALL_ROWS),
            rf: strings(&["rayleigh"]),
            snr: grid,
            methods: strings(&["closed-form", "monte-carlo"]),
            ..Default::default()
        },
        Preset {
            name: "fig6-style".into(),
            description: Some("ergodic capacity over the six turbulence conditions, Rayleigh RF hop".into()),
            metric: Some(Metric::Capacity),
            scenarios: strings(&ALL_ROWS),
            rf: strings(&["rayleigh"]),
            snr: grid,
            methods: strings(&["closed-form", "monte-carlo"]),
            ..Default::default()
        },
    ]
}

/// Resolved configuration.
#[derive(Debug, Clone)]
pub struct Config {
    pub catalog: Catalog,
    pub rf: BTreeMap<String, RfSetting>,
    pub presets: Vec<Preset>,
    pub output_dir: Option<PathBuf>,
}

impl Config {
    pub fn builtin() -> Self {
        Self {
            catalog: Catalog::builtin(),
            rf: BUILTIN_RF
                .iter()
                .map(|&(n, alpha, mu)| (n.to_string(), RfSetting { alpha, mu }))
                .collect(),
            presets: builtin_presets(),
            output_dir: None,
        }
    }

    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut cfg = Self::builtin();
        let Some(path) = path else {
            return Ok(cfg);
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file: ConfigFile = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if !file.uwo.is_empty() {
            let mut table = toml::Table::new();
            table.insert(
                "uwo".into(),
                toml::Value::Array(file.uwo.into_iter().map(toml::Value::Table).collect()),
            );
            cfg.catalog = Catalog::with_overrides(&toml::to_string(&table)?)?;
        }
        cfg.rf.extend(file.rf);
        for p in file.preset {
            match cfg.presets.iter_mut().find(|q| q.name == p.name) {
                Some(slot) => *slot = p,
                None => cfg.presets.push(p),
            }
        }
        cfg.output_dir = file.output_dir;
        Ok(cfg)
    }

    pub fn preset(&self, name: &str) -> Result<&Preset> {
        self.presets.iter().find(|p| p.name == name).with_context(|| {
            let known: Vec<&str> = self.presets.iter().map(|p| p.name.as_str()).collect();
            format!("unknown preset {name} (known: {})", known.join(", "))
        })
    }

    /// A named RF setting or an explicit `alpha,mu` pair.
    pub fn rf_setting(&self, spec: &str) -> Result<(String, f64, f64)> {
        if let Some(s) = self.rf.get(spec) {
            return Ok((spec.to_string(), s.alpha, s.mu));
        }
        if let Some((a, m)) = spec.split_once(',') {
            let alpha: f64 = a.trim().parse().with_context(|| format!("bad α in {spec}"))?;
            let mu: f64 = m.trim().parse().with_context(|| format!("bad μ in {spec}"))?;
            return Ok((format!("alpha{alpha}-mu{mu}"), alpha, mu));
        }
        let known: Vec<&str> = self.rf.keys().map(String::as_str).collect();
        bail!(
            "unknown RF setting {spec} (known: {}; or give alpha,mu)",
            known.join(", ")
        )
    }
}
