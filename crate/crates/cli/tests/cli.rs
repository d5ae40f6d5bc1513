//! End-to-end tests of the `uwrelay` binary.

use std::path::Path;
use std::process::{Command, Output};

fn uwrelay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uwrelay"))
        .args(args)
        .env_remove("UWRELAY_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn files_in(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .map(|rd| {
            rd.map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
                .collect()
        })
        .unwrap_or_default();
    names.sort();
    names
}

#[test]
fn scenarios_listing_and_filters() {
    let all = uwrelay(&["scenarios", "--json"]);
    assert!(all.status.success());
    let rows: serde_json::Value = serde_json::from_slice(&all.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 6);
    assert_eq!(rows[0]["name"], "salty-weak");
    assert_eq!(rows[0]["c"], 49.1773);

    let fresh = uwrelay(&["scenarios", "--water", "fresh", "--json"]);
    let rows: serde_json::Value = serde_json::from_slice(&fresh.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 3);
    assert!(rows.as_array().unwrap().iter().all(|r| r["water"] == "fresh"));

    let none = uwrelay(&["scenarios", "--water", "muddy", "--json"]);
    assert!(none.status.success());
    let rows: serde_json::Value = serde_json::from_slice(&none.stdout).unwrap();
    assert!(rows.as_array().unwrap().is_empty());

    let table = uwrelay(&["scenarios", "--turbulence", "severe"]);
    assert!(table.status.success());
    assert_eq!(stdout(&table).lines().count(), 3);
}

#[test]
fn sweep_with_all_methods_writes_four_curves_of_nine_points() {
    let dir = tempfile::tempdir().unwrap();
    let out = uwrelay(&[
        "sweep",
        "--metric",
        "outage",
        "--scenario",
        "salty-weak",
        "--rf",
        "rayleigh",
        "--snr-start",
        "0",
        "--snr-stop",
        "40",
        "--snr-step",
        "5",
        "--methods",
        "all",
        "--trials",
        "100000",
        "--format",
        "csv,json,svg",
        "--name",
        "run",
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csvs: Vec<String> = files_in(dir.path())
        .into_iter()
        .filter(|f| f.ends_with(".csv"))
        .collect();
    assert_eq!(csvs.len(), 4);
    for f in &csvs {
        let mut r = csv::Reader::from_path(dir.path().join(f)).unwrap();
        assert_eq!(r.headers().unwrap(), vec!["snr_db", "method", "value", "stderr"]);
        let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
        assert_eq!(rows.len(), 9, "{f}");
        let grid: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
        assert_eq!(grid, [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0]);
        let mc = f.contains("monte-carlo");
        assert!(rows.iter().all(|r| r[3].is_empty() != mc));
    }
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("run.json")).unwrap()).unwrap();
    assert_eq!(doc["series"].as_array().unwrap().len(), 4);
    assert_eq!(doc["metric"], "outage");
    let svg = std::fs::read_to_string(dir.path().join("run.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("1e-4"));
}

#[test]
fn monte_carlo_csv_is_byte_identical_across_runs() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut bytes = Vec::new();
    for (i, d) in dirs.iter().enumerate() {
        let workers = ["1", "3"][i];
        let out = uwrelay(&[
            "sweep",
            "--scenario",
            "fresh-severe",
            "--rf",
            "3.5,0.8",
            "--metric",
            "asep",
            "--methods",
            "monte-carlo",
            "--snr-stop",
            "10",
            "--trials",
            "1000000",
            "--seed",
            "99",
            "--workers",
            workers,
            "--output-dir",
            d.path().to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        bytes.push(std::fs::read(d.path().join("asep.csv")).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    assert_eq!(String::from_utf8_lossy(&bytes[0]).lines().count(), 4);
}

#[test]
fn errors_exit_non_zero_and_leave_no_files() {
    let cases: [&[&str]; 5] = [
        &["--methods", "closed-form,asymptotic", "--rf-offset-db", "3"],
        &["--metric", "asep", "--methods", "asymptotic"],
        &["--metric", "capacity", "--rf", "alpha-mu", "--methods", "closed-form"],
        &["--snr-start", "10", "--snr-stop", "0"],
        &["--scenario", "salty-weak,muddy-calm"],
    ];
    for extra in cases {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("out");
        let mut args = vec![
            "sweep",
            "--output-dir",
            target.to_str().unwrap(),
            "--format",
            "csv,json,svg",
        ];
        args.extend_from_slice(extra);
        let out = uwrelay(&args);
        assert!(!out.status.success(), "{extra:?} should fail");
        assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
        assert!(files_in(&target).is_empty(), "{extra:?} left files");
    }
}

#[test]
fn fig2_preset_asymptote_converges() {
    let dir = tempfile::tempdir().unwrap();
    let out = uwrelay(&[
        "sweep",
        "--preset",
        "fig2-style",
        "--methods",
        "closed-form,asymptotic",
        "--format",
        "json",
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("fig2-style.json")).unwrap()).unwrap();
    let series = doc["series"].as_array().unwrap();
    assert_eq!(series.len(), 8);
    let values = |s: &serde_json::Value| -> Vec<f64> {
        s["records"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["value"].as_f64().unwrap())
            .collect()
    };
    for pair in series.chunks(2) {
        assert_eq!(pair[0]["method"], "closed-form");
        assert_eq!(pair[1]["method"], "asymptotic");
        let (exact, asym) = (values(&pair[0]), values(&pair[1]));
        let dev: Vec<f64> = exact.iter().zip(&asym).map(|(e, a)| (a / e - 1.0).abs()).collect();
        let last = *dev.last().unwrap();
        assert!(last < 0.1, "{}: {dev:?}", pair[0]["rf"]);
        assert!(last <= dev[4], "{}: {dev:?}", pair[0]["rf"]);
    }
}

#[test]
fn config_presets_and_output_dir_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("uwrelay.toml");
    let from_file = dir.path().join("from-file");
    std::fs::write(
        &cfg,
        format!(
            r#"
output_dir = "{}"

[[uwo]]
name = "tank"
water = "salty"
turbulence = "moderate"
w = 0.3

[rf.harsh]
alpha = 2.0
mu = 0.75

[[preset]]
name = "tank-outage"
metric = "outage"
scenarios = ["tank"]
rf = ["harsh"]
snr = {{ start = 0, stop = 20, step = 10 }}
methods = ["closed-form", "quadrature"]
formats = ["json"]
"#,
            from_file.display()
        ),
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let out = uwrelay(&["--config", c, "sweep", "--preset", "tank-outage"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(files_in(&from_file), ["tank-outage.json"]);
    let doc: serde_json::Value =
        serde_json::from_slice(&std::fs::read(from_file.join("tank-outage.json")).unwrap()).unwrap();
    assert_eq!(doc["series"][0]["scenario"], "tank");
    assert_eq!(doc["series"][0]["records"].as_array().unwrap().len(), 3);

    let flag = dir.path().join("from-flag");
    let out = uwrelay(&[
        "--config",
        c,
        "sweep",
        "--preset",
        "tank-outage",
        "--snr-stop",
        "0",
        "--output-dir",
        flag.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(files_in(&flag), ["tank-outage.json"]);

    let env_dir = dir.path().join("from-env");
    let out = Command::new(env!("CARGO_BIN_EXE_uwrelay"))
        .args(["sweep", "--snr-stop", "0"])
        .env("UWRELAY_OUTPUT_DIR", &env_dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(files_in(&env_dir), ["outage.csv"]);

    let listing = uwrelay(&["--config", c, "scenarios", "--json"]);
    let rows: serde_json::Value = serde_json::from_slice(&listing.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 7);
}

#[test]
fn db_grid_round_trips_through_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = uwrelay(&[
        "sweep",
        "--snr-start",
        "-7.3",
        "--snr-stop",
        "12.4",
        "--snr-step",
        "0.7",
        "--threshold-db",
        "-2.5",
        "--format",
        "json",
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("outage.json")).unwrap()).unwrap();
    assert_eq!(doc["threshold_db"], -2.5);
    let records = doc["series"][0]["records"].as_array().unwrap();
    assert_eq!(records.len(), 29);
    for (i, r) in records.iter().enumerate() {
        let want = -7.3 + i as f64 * 0.7;
        assert!((r["snr_db"].as_f64().unwrap() - want).abs() <= 1e-12 * want.abs().max(1.0));
    }
}

#[test]
fn validate_quick_passes_and_wrong_psi2_fails() {
    let start = std::time::Instant::now();
    let ok = uwrelay(&["validate", "--quick"]);
    let text = stdout(&ok);
    assert!(ok.status.success(), "{text}");
    assert_eq!(text.matches("[PASS]").count(), 8, "{text}");
    assert!(text.contains("8 of 8 criteria passed"));
    assert!(
        start.elapsed().as_secs() < 60,
        "quick validation took {:?}",
        start.elapsed()
    );

    let bad = uwrelay(&["validate", "--quick", "--inject-wrong-psi2", "--criterion", "4"]);
    let text = stdout(&bad);
    assert!(!bad.status.success(), "{text}");
    assert!(text.contains("criterion 4 [FAIL]"), "{text}");
    assert!(text.contains("0 of 1 criteria passed"));

    let out_of_range = uwrelay(&["validate", "--criterion", "9"]);
    assert!(!out_of_range.status.success());
}
