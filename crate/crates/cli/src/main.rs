//! `uwrelay`: scenario catalog, metric sweeps and the validation suite for
//! the underwater-optical/RF decode-and-forward relay.

mod config;
mod output;
mod svg;
mod sweep;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use uwrelay_core::channels::{Turbulence, WaterType};
use uwrelay_core::metrics::ModulationParams;
use uwrelay_core::montecarlo::SimConfig;
use uwrelay_core::validation::{run_check, ValidationOptions, CRITERIA};

use config::{Config, GridSpec, Metric, Preset};
use output::Format;
use sweep::SweepRequest;

const OUTPUT_DIR_ENV: &str = "UWRELAY_OUTPUT_DIR";

#[derive(Parser)]
#[command(
    name = "uwrelay",
    version,
    about = "Outage, ASEP and capacity of a mixed underwater-optical/RF relay link"
)]
struct Cli {
    /// TOML file with catalog overrides, named RF settings and presets.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the underwater turbulence scenarios and their EGG parameters.
    Scenarios(ScenariosArgs),
    /// Evaluate a metric over a grid of mean SNRs and write CSV/JSON/SVG.
    Sweep(Box<SweepArgs>),
    /// Run the cross-check suite and report each criterion.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct ScenariosArgs {
    /// salty or fresh.
    #[arg(long)]
    water: Option<String>,
    /// weak, moderate or severe.
    #[arg(long)]
    turbulence: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Built-in (fig2-style … fig6-style) or configured preset.
    #[arg(long)]
    preset: Option<String>,
    /// Catalog scenario, e.g. salty-weak; repeatable.
    #[arg(long = "scenario", value_delimiter = ',')]
    scenarios: Vec<String>,
    /// Named RF setting or an explicit `alpha,mu` pair; repeatable.
    #[arg(long = "rf")]
    rf: Vec<String>,
    #[arg(long, value_enum)]
    metric: Option<Metric>,
    #[arg(long, allow_negative_numbers = true)]
    snr_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    snr_stop: Option<f64>,
    #[arg(long)]
    snr_step: Option<f64>,
    /// closed-form, asymptotic, monte-carlo, quadrature or all.
    #[arg(long, value_delimiter = ',')]
    methods: Vec<String>,
    /// Outage threshold γ_out in dB.
    #[arg(long, allow_negative_numbers = true)]
    threshold_db: Option<f64>,
    /// RF-hop mean SNR minus optical-hop mean SNR, in dB.
    #[arg(long, allow_negative_numbers = true)]
    rf_offset_db: Option<f64>,
    /// η in P_e = (η/2) erfc(√(βγ)).
    #[arg(long)]
    eta: Option<f64>,
    /// β in P_e = (η/2) erfc(√(βγ)).
    #[arg(long)]
    beta: Option<f64>,
    /// Capacity with the 1/2 pre-log of a half-duplex relay.
    #[arg(long)]
    half_duplex: bool,
    /// Monte-Carlo trials per point.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Trials per scheduling batch; does not affect results.
    #[arg(long)]
    batch_size: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    format: Vec<Format>,
    /// Defaults to the config file, then $UWRELAY_OUTPUT_DIR, then `.`.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// File stem; defaults to the preset name or the metric.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Reduced grids and trial counts.
    #[arg(long)]
    quick: bool,
    /// Negative control: scale Ψ₂ by 10 in the asymptotic check.
    #[arg(long)]
    inject_wrong_psi2: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Run only this criterion (1–8); repeatable.
    #[arg(long = "criterion", value_parser = clap::value_parser!(u8).range(1..=8))]
    criteria: Vec<u8>,
}

#[derive(Serialize)]
struct ScenarioRow<'a> {
    name: &'a str,
    water: &'static str,
    turbulence: &'static str,
    bubble_level: f64,
    a: f64,
    b: f64,
    c: f64,
    lambda: f64,
    w: f64,
}

fn cmd_scenarios(cfg: &Config, args: &ScenariosArgs) -> Result<()> {
    // An unrecognized filter value matches nothing.
    let water: Option<Option<WaterType>> = args.water.as_deref().map(|w| w.parse().ok());
    let turbulence: Option<Option<Turbulence>> = args.turbulence.as_deref().map(|t| t.parse().ok());
    let rows: Vec<ScenarioRow> = cfg
        .catalog
        .entries()
        .iter()
        .filter(|e| water.is_none_or(|w| w == Some(e.scenario.water)))
        .filter(|e| turbulence.is_none_or(|t| t == Some(e.scenario.turbulence)))
        .map(|e| ScenarioRow {
            name: &e.name,
            water: e.scenario.water.as_str(),
            turbulence: e.scenario.turbulence.as_str(),
            bubble_level: e.scenario.bubble_level,
            a: e.params.a,
            b: e.params.b,
            c: e.params.c,
            lambda: e.params.lambda,
            w: e.params.w,
        })
        .collect();
    if args.json {
        return emit(&serde_json::to_string_pretty(&rows)?);
    }
    let mut text = format!(
        "{:<16} {:<6} {:<10} {:>8} {:>8} {:>8} {:>10} {:>8} {:>8}",
        "name", "water", "turbulence", "BL L/min", "a", "b", "c", "lambda", "w"
    );
    for r in rows {
        text += &format!(
            "\n{:<16} {:<6} {:<10} {:>8} {:>8} {:>8} {:>10} {:>8} {:>8}",
            r.name, r.water, r.turbulence, r.bubble_level, r.a, r.b, r.c, r.lambda, r.w
        );
    }
    emit(&text)
}

/// Flags override the preset, which overrides the defaults.
fn build_request(cfg: &Config, args: &SweepArgs) -> Result<(SweepRequest, Vec<Format>, String)> {
    let preset = match &args.preset {
        Some(name) => cfg.preset(name)?.clone(),
        None => Preset::default(),
    };
    let metric = args.metric.or(preset.metric).unwrap_or(Metric::Outage);
    let pick = |flag: &Vec<String>, p: &Option<Vec<String>>, default: &str| -> Vec<String> {
        if !flag.is_empty() {
            flag.clone()
        } else {
            p.clone().unwrap_or_else(|| vec![default.to_string()])
        }
    };
    let scenarios = pick(&args.scenarios, &preset.scenarios, "salty-weak");
    let rf = sweep::rf_choices(cfg, &pick(&args.rf, &preset.rf, "rayleigh"))?;
    let methods = sweep::parse_methods(metric, &pick(&args.methods, &preset.methods, "closed-form"))?;
    let grid = preset.snr.unwrap_or(GridSpec {
        start: 0.0,
        stop: 40.0,
        step: 5.0,
    });
    let grid = GridSpec {
        start: args.snr_start.unwrap_or(grid.start),
        stop: args.snr_stop.unwrap_or(grid.stop),
        step: args.snr_step.unwrap_or(grid.step),
    };
    let modulation = ModulationParams::new(
        args.eta.or(preset.eta).unwrap_or(1.0),
        args.beta.or(preset.beta).unwrap_or(1.0),
    )?;
    let mut sim = SimConfig::new(
        args.trials.or(preset.trials).unwrap_or(1_000_000),
        args.seed.or(preset.seed).unwrap_or(1),
    );
    if let Some(b) = args.batch_size.or(preset.batch_size) {
        sim.batch_size = b;
    } else {
        sim.batch_size = sim.batch_size.min(sim.trials);
    }
    if let Some(w) = args.workers.or(preset.workers) {
        sim.workers = w;
    }
    let formats = if !args.format.is_empty() {
        args.format.clone()
    } else {
        match &preset.formats {
            Some(f) => f.iter().map(|s| s.parse()).collect::<Result<Vec<Format>>>()?,
            None => vec![Format::Csv],
        }
    };
    let mut formats = formats;
    formats.sort();
    formats.dedup();
    let stem = args
        .name
        .clone()
        .or_else(|| args.preset.clone())
        .unwrap_or_else(|| metric.as_str().to_string());
    if stem.is_empty() || stem.contains(['/', '\\']) {
        anyhow::bail!("invalid output name {stem:?}");
    }
    let req = SweepRequest {
        metric,
        scenarios,
        rf,
        snr_db: grid.points()?,
        methods,
        threshold_db: args.threshold_db.or(preset.threshold_db).unwrap_or(0.0),
        rf_offset_db: args.rf_offset_db.or(preset.rf_offset_db).unwrap_or(0.0),
        modulation,
        half_duplex: args.half_duplex || preset.half_duplex.unwrap_or(false),
        sim,
    };
    Ok((req, formats, stem))
}

fn output_dir(flag: Option<&Path>, cfg: &Config) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| cfg.output_dir.clone())
        .or_else(|| {
            std::env::var_os(OUTPUT_DIR_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from)
        })
        .unwrap_or_else(|| PathBuf::from("."))
}

fn cmd_sweep(cfg: &Config, args: &SweepArgs) -> Result<()> {
    let (req, formats, stem) = build_request(cfg, args)?;
    let series = req.run(&cfg.catalog)?;
    let files = output::render(&req, &series, &stem, &formats)?;
    let dir = output_dir(args.output_dir.as_deref(), cfg);
    for path in output::write_all(&dir, &files)? {
        emit(&path.display().to_string())?;
    }
    Ok(())
}

fn cmd_validate(args: &ValidateArgs) -> Result<bool> {
    let mut opts = ValidationOptions {
        quick: args.quick,
        inject_wrong_psi2: args.inject_wrong_psi2,
        ..Default::default()
    };
    if let Some(s) = args.seed {
        opts.seed = s;
    }
    if let Some(w) = args.workers {
        anyhow::ensure!(w >= 1, "--workers must be at least 1");
        opts.workers = w;
    }
    let ids: Vec<u8> = if args.criteria.is_empty() {
        CRITERIA.iter().map(|&(id, _)| id).collect()
    } else {
        let mut v = args.criteria.clone();
        v.sort_unstable();
        v.dedup();
        v
    };
    emit(&format!(
        "validation: seed {}, workers {}{}{}",
        opts.seed,
        opts.workers,
        if opts.quick { ", quick" } else { "" },
        if opts.inject_wrong_psi2 {
            ", wrong Ψ2 injected"
        } else {
            ""
        }
    ))?;
    let mut passed = 0;
    for &id in &ids {
        let report = run_check(id, &opts);
        emit(&report.line())?;
        for f in &report.failures {
            emit(&format!("    {f}"))?;
        }
        passed += usize::from(report.passed);
    }
    emit(&format!("{passed} of {} criteria passed", ids.len()))?;
    Ok(passed == ids.len())
}

/// Writes one line to stdout; a closed pipe ends output quietly.
fn emit(line: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{line}").and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = Config::load(cli.config.as_deref()).context("loading configuration")?;
    match &cli.command {
        Command::Scenarios(a) => cmd_scenarios(&cfg, a).map(|_| true),
        Command::Sweep(a) => cmd_sweep(&cfg, a).map(|_| true),
        Command::Validate(a) => cmd_validate(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sweep_args(argv: &[&str]) -> SweepArgs {
        let mut full = vec!["uwrelay", "sweep"];
        full.extend_from_slice(argv);
        match Cli::try_parse_from(full).unwrap().command {
            Command::Sweep(a) => *a,
            _ => unreachable!(),
        }
    }

    #[test]
    fn flags_override_preset() {
        let cfg = Config::builtin();
        let (req, formats, stem) = build_request(&cfg, &sweep_args(&["--preset", "fig3-style"])).unwrap();
        assert_eq!(req.metric, Metric::Outage);
        assert_eq!(req.scenarios.len(), 6);
        assert_eq!(req.snr_db.len(), 9);
        assert_eq!(formats, vec![Format::Csv]);
        assert_eq!(stem, "fig3-style");
        let (req, formats, stem) = build_request(
            &cfg,
            &sweep_args(&[
                "--preset",
                "fig3-style",
                "--scenario",
                "fresh-weak,fresh-severe",
                "--snr-stop",
                "10",
                "--format",
                "json,csv",
                "--name",
                "x",
                "--rf",
                "3,0.5",
            ]),
        )
        .unwrap();
        assert_eq!(req.scenarios, ["fresh-weak", "fresh-severe"]);
        assert_eq!(req.snr_db, [0.0, 5.0, 10.0]);
        assert_eq!(formats, vec![Format::Csv, Format::Json]);
        assert_eq!(stem, "x");
        assert_eq!((req.rf[0].alpha, req.rf[0].mu), (3.0, 0.5));
    }

    #[test]
    fn negative_grid_values_parse() {
        let (req, _, _) = build_request(
            &Config::builtin(),
            &sweep_args(&["--snr-start", "-10", "--snr-stop", "0", "--threshold-db", "-3"]),
        )
        .unwrap();
        assert_eq!(req.snr_db.first(), Some(&-10.0));
        assert_eq!(req.threshold_db, -3.0);
    }

    #[test]
    fn output_dir_precedence() {
        let mut cfg = Config::builtin();
        assert_eq!(output_dir(Some(Path::new("flag")), &cfg), PathBuf::from("flag"));
        cfg.output_dir = Some("file".into());
        assert_eq!(output_dir(None, &cfg), PathBuf::from("file"));
        assert_eq!(output_dir(Some(Path::new("flag")), &cfg), PathBuf::from("flag"));
    }
}
