//! CSV, JSON and SVG writers. Every file is staged in the output directory
//! and only moved into place once all of them have been written.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use tempfile::NamedTempFile;

use crate::config::Metric;
use crate::svg;
use crate::sweep::{Series, SweepRequest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            _ => bail!("unknown output format {s} (csv, json, svg)"),
        }
    }
}

pub const CSV_HEADER: [&str; 4] = ["snr_db", "method", "value", "stderr"];

#[derive(Serialize)]
struct Record {
    snr_db: f64,
    method: &'static str,
    value: f64,
    stderr: Option<f64>,
}

#[derive(Serialize)]
struct SeriesDoc<'a> {
    label: &'a str,
    scenario: &'a str,
    rf: &'a str,
    method: &'static str,
    records: Vec<Record>,
}

#[derive(Serialize)]
struct SweepDoc<'a> {
    metric: &'static str,
    threshold_db: f64,
    rf_offset_db: f64,
    eta: f64,
    beta: f64,
    half_duplex: bool,
    trials: Option<u64>,
    seed: Option<u64>,
    series: Vec<SeriesDoc<'a>>,
}

fn records(s: &Series) -> Vec<Record> {
    let c = &s.curve;
    (0..c.len())
        .map(|i| Record {
            snr_db: c.mean_snr_db()[i],
            method: c.provenance().as_str(),
            value: c.values()[i],
            stderr: c.stderr().map(|e| e[i]),
        })
        .collect()
}

fn csv_bytes(s: &Series) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in records(s) {
        w.write_record([
            r.snr_db.to_string(),
            r.method.to_string(),
            r.value.to_string(),
            r.stderr.map(|e| e.to_string()).unwrap_or_default(),
        ])?;
    }
    Ok(w.into_inner()?)
}

fn json_bytes(req: &SweepRequest, series: &[Series]) -> Result<Vec<u8>> {
    let mc = series.iter().any(|s| s.curve.stderr().is_some());
    let doc = SweepDoc {
        metric: req.metric.as_str(),
        threshold_db: req.threshold_db,
        rf_offset_db: req.rf_offset_db,
        eta: req.modulation.eta,
        beta: req.modulation.beta,
        half_duplex: req.half_duplex,
        trials: mc.then_some(req.sim.trials),
        seed: mc.then_some(req.sim.root_seed),
        series: series
            .iter()
            .map(|s| SeriesDoc {
                label: &s.label,
                scenario: &s.scenario,
                rf: &s.rf,
                method: s.curve.provenance().as_str(),
                records: records(s),
            })
            .collect(),
    };
    let mut out = serde_json::to_vec_pretty(&doc)?;
    out.push(b'\n');
    Ok(out)
}

fn y_label(metric: Metric, half_duplex: bool) -> &'static str {
    match metric {
        Metric::Outage => "outage probability",
        Metric::Asep => "average symbol error probability",
        Metric::Capacity if half_duplex => "ergodic capacity, half duplex (bit/s/Hz)",
        Metric::Capacity => "ergodic capacity (bit/s/Hz)",
    }
}

/// File name to contents, in a deterministic order.
pub fn render(
    req: &SweepRequest,
    series: &[Series],
    stem: &str,
    formats: &[Format],
) -> Result<BTreeMap<String, Vec<u8>>> {
    if formats.is_empty() {
        bail!("no output formats requested");
    }
    let mut files = BTreeMap::new();
    for f in formats {
        match f {
            Format::Csv if series.len() == 1 => {
                files.insert(format!("{stem}.csv"), csv_bytes(&series[0])?);
            }
            Format::Csv => {
                for s in series {
                    files.insert(format!("{stem}-{}.csv", s.label), csv_bytes(s)?);
                }
            }
            Format::Json => {
                files.insert(format!("{stem}.json"), json_bytes(req, series)?);
            }
            Format::Svg => {
                let doc = svg::plot(
                    stem,
                    y_label(req.metric, req.half_duplex),
                    req.metric.log_scale(),
                    series,
                );
                files.insert(format!("{stem}.svg"), doc.into_bytes());
            }
        }
    }
    Ok(files)
}

/// Writes all files or none of them.
pub fn write_all(dir: &Path, files: &BTreeMap<String, Vec<u8>>) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut staged = Vec::with_capacity(files.len());
    for (name, bytes) in files {
        let mut tmp = NamedTempFile::new_in(dir).with_context(|| format!("staging in {}", dir.display()))?;
        tmp.write_all(bytes)?;
        tmp.as_file().sync_all()?;
        staged.push((dir.join(name), tmp));
    }
    let mut written: Vec<PathBuf> = Vec::with_capacity(staged.len());
    for (path, tmp) in staged {
        if let Err(e) = tmp.persist(&path) {
            for p in &written {
                let _ = std::fs::remove_file(p);
            }
            return Err(e.error).with_context(|| format!("writing {}", path.display()));
        }
        written.push(path);
    }
    Ok(written)
}
