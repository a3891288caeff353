//! End-to-end tests of the `plnc` binary: flag handling, config files,
//! output schemas, exit codes and byte-level determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn plnc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plnc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(2) // config comment + header
        .map(|line| line.split(',').map(|s| s.to_string()).collect())
        .collect()
}

fn tmp_path(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("plnc-cli-test-{}-{name}", std::process::id()));
    path
}

#[test]
fn rate_zero_density_has_exactly_zero_inr() {
    let out = plnc(&["rate", "--snr-db", "20", "--lambda", "0", "--r0", "0.5"]);
    assert!(out.status.success());
    let rows = data_rows(&stdout_of(&out));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "CR");
    assert_eq!(rows[1][0], "PLNC");
    for row in rows {
        assert_eq!(row[4], "0.00000000e0", "inr_relay must be exactly zero");
        assert_eq!(row[5], "0.00000000e0", "inr_end must be exactly zero");
    }
}

#[test]
fn rate_below_minimum_radius_exits_2_naming_the_threshold() {
    let out = plnc(&["rate", "--snr-db", "20", "--lambda", "7", "--r0", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("minimum radius"), "stderr: {err}");
    assert!(err.contains("0.3162"), "stderr: {err}");
}

#[test]
fn link_must_be_given_exactly_once() {
    let both = plnc(&[
        "rate", "--snr-db", "20", "--r-n", "0.3", "--lambda", "1", "--r0", "0.5",
    ]);
    assert_eq!(both.status.code(), Some(2));
    assert!(stderr_of(&both).contains("exactly one"));
    let neither = plnc(&["rate", "--lambda", "1", "--r0", "0.5"]);
    assert_eq!(neither.status.code(), Some(2));
}

#[test]
fn missing_required_value_exits_2() {
    let out = plnc(&["rate", "--snr-db", "20", "--r0", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("--lambda"));
}

#[test]
fn unknown_flag_exits_2() {
    let out = plnc(&["rate", "--snr-db", "20", "--lambda", "1", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_radius_last_row_sits_quarter_percent_under_unbounded() {
    let out = plnc(&["validate-radius", "--r0", "0.5", "--lambda", "0.2"]);
    assert!(out.status.success());
    let rows = data_rows(&stdout_of(&out));
    let last = rows.last().unwrap();
    let big_r: f64 = last[0].parse().unwrap();
    let finite: f64 = last[1].parse().unwrap();
    let unbounded: f64 = last[2].parse().unwrap();
    assert_eq!(big_r, 10.0);
    let gap = (unbounded - finite) / unbounded;
    assert!((gap - 0.0025).abs() < 1e-6, "gap {gap}");
}

#[test]
fn sweep_r0_default_grid_respects_minimum_radius() {
    let out = plnc(&["sweep-r0", "--snr-db", "20", "--lambda", "7"]);
    assert!(out.status.success());
    let rows = data_rows(&stdout_of(&out));
    let first_r0: f64 = rows[0][0].parse().unwrap();
    assert!(
        first_r0 > 0.3162,
        "default grid must start above the minimum radius, got {first_r0}"
    );
    // One CR and one PLNC record per grid point, CR first.
    assert_eq!(rows.len() % 2, 0);
    assert_eq!(rows[0][1], "CR");
    assert_eq!(rows[1][1], "PLNC");
    assert_eq!(rows[0][0], rows[1][0]);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "sweep-r0", "--snr-db", "20", "--lambda", "3", "--r0-grid", "0.35:0.45:0.01",
    ];
    let first = plnc(&args);
    let second = plnc(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn thread_count_does_not_change_mc_output() {
    let base = [
        "mc-validate", "--snr-db", "20", "--lambda", "0.5", "--r0", "0.5", "--trials", "500",
    ];
    let mut one = base.to_vec();
    one.extend(["--threads", "1"]);
    let mut four = base.to_vec();
    four.extend(["--threads", "4"]);
    let out_one = plnc(&one);
    let out_four = plnc(&four);
    assert!(out_one.status.success());
    assert!(out_four.status.success());
    assert_eq!(out_one.stdout, out_four.stdout);
}

#[test]
fn config_file_supplies_values_and_flags_override() {
    let path = tmp_path("fig.conf");
    std::fs::write(&path, "snr-db = 20\nlambda = 7\nr0 = 0.5\n").unwrap();
    let from_file = plnc(&["--config", path.to_str().unwrap(), "rate"]);
    assert!(
        from_file.status.success(),
        "stderr: {}",
        stderr_of(&from_file)
    );
    let file_rows = data_rows(&stdout_of(&from_file));

    let overridden = plnc(&[
        "--config",
        path.to_str().unwrap(),
        "rate",
        "--lambda",
        "0",
    ]);
    assert!(overridden.status.success());
    let overridden_rows = data_rows(&stdout_of(&overridden));
    // lambda = 0 zeroes the INR columns; the file value (7) must not.
    assert_eq!(overridden_rows[0][4], "0.00000000e0");
    assert_ne!(file_rows[0][4], "0.00000000e0");
    std::fs::remove_file(&path).ok();
}

#[test]
fn malformed_config_file_exits_2() {
    let path = tmp_path("bad.conf");
    std::fs::write(&path, "this is not a pair\n").unwrap();
    let out = plnc(&["--config", path.to_str().unwrap(), "rate", "--snr-db", "20"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(&path).ok();
}

#[test]
fn json_output_mirrors_csv_columns() {
    let out = plnc(&[
        "--format", "json", "rate", "--snr-db", "20", "--lambda", "0", "--r0", "0.5",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["config"]["cmd"], "rate");
    assert_eq!(doc["config"]["seed"], "42");
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for col in [
        "scheme",
        "rate_per_area",
        "rate_a_to_c",
        "rate_c_to_a",
        "inr_relay",
        "inr_end",
        "area",
    ] {
        assert!(rows[0].get(col).is_some(), "missing column {col}");
    }
    assert_eq!(rows[0]["inr_relay"], 0.0);
}

#[test]
fn db_flag_converts_inr_columns() {
    let linear = plnc(&["inr", "--snr-db", "20", "--lambda", "7", "--r0", "0.5"]);
    let db = plnc(&[
        "inr", "--snr-db", "20", "--lambda", "7", "--r0", "0.5", "--db",
    ]);
    let linear_rows = data_rows(&stdout_of(&linear));
    let db_rows = data_rows(&stdout_of(&db));
    assert_eq!(linear_rows.len(), 9);
    for (lin, db) in linear_rows.iter().zip(db_rows.iter()) {
        let v: f64 = lin[1].parse().unwrap();
        let d: f64 = db[1].parse().unwrap();
        assert!((d - 10.0 * v.log10()).abs() < 1e-6);
    }
}

#[test]
fn output_file_is_written() {
    let path = tmp_path("rate.csv");
    let out = plnc(&[
        "--output",
        path.to_str().unwrap(),
        "rate",
        "--snr-db",
        "20",
        "--lambda",
        "0",
        "--r0",
        "0.5",
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# "));
    assert!(text.contains("scheme,rate_per_area"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn optimize_r0_reports_both_schemes() {
    let out = plnc(&[
        "optimize-r0",
        "--snr-db",
        "20",
        "--lambda",
        "7",
        "--r0-min",
        "0.33",
        "--r0-max",
        "0.45",
        "--r0-step",
        "0.01",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let rows = data_rows(&stdout_of(&out));
    assert_eq!(rows.len(), 2);
    for row in rows {
        let best_r0: f64 = row[1].parse().unwrap();
        assert!((0.33..=0.45).contains(&best_r0));
    }
}

#[test]
fn fixed_expected_count_model_is_accepted() {
    let out = plnc(&[
        "mc-validate",
        "--snr-db",
        "20",
        "--lambda",
        "0.3",
        "--r0",
        "0.5",
        "--trials",
        "300",
        "--count-model",
        "fixed-expected",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.lines().next().unwrap().contains("count-model=fixed-expected"));
    assert_eq!(data_rows(&text).len(), 9);
}

#[test]
fn r_n_flag_is_equivalent_to_snr_db() {
    let by_snr = plnc(&["rate", "--snr-db", "40", "--lambda", "1", "--r0", "0.5"]);
    let by_rn = plnc(&["rate", "--r-n", "0.1", "--lambda", "1", "--r0", "0.5"]);
    assert!(by_snr.status.success());
    assert!(by_rn.status.success());
    let body = |s: &str| s.lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&stdout_of(&by_snr)), body(&stdout_of(&by_rn)));
}
