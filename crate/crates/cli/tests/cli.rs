//! End-to-end checks of the `credible` binary: flag handling, file output,
//! config-file layering, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_credible"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn kv_value(stdout: &str, key: &str) -> f64 {
    let prefix = format!("{key} = ");
    stdout
        .lines()
        .find_map(|line| line.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("missing key {key} in:\n{stdout}"))
        .parse()
        .expect("numeric value")
}

fn temp_path(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("credible-cli-test-{}-{name}", std::process::id()));
    path
}

#[test]
fn interval_matches_reference_values() {
    let output = run(&[
        "interval",
        "--model",
        "location-normal",
        "--alpha",
        "0.05",
        "--spending",
        "equal-tails",
        "--x",
        "2.0",
    ]);
    assert!(output.status.success());
    let stdout = stdout_of(&output);
    assert!((kv_value(&stdout, "l") - 0.198427).abs() < 1e-3);
    assert!((kv_value(&stdout, "u") - 3.801573).abs() < 1e-3);
    assert!((kv_value(&stdout, "alpha_x") - 0.036640).abs() < 1e-5);
    assert!((kv_value(&stdout, "y0") - 1.668391).abs() < 1e-5);
    assert!(stdout.contains("l,u,alpha_x,t,y0,delta0"));
}

#[test]
fn interval_far_below_boundary_is_one_sided() {
    let output = run(&[
        "interval",
        "--model",
        "location-normal",
        "--alpha",
        "0.05",
        "--spending",
        "equal-tails",
        "--x",
        "-5.0",
    ]);
    assert!(output.status.success());
    let stdout = stdout_of(&output);
    assert_eq!(kv_value(&stdout, "l"), 0.0);
    assert_eq!(kv_value(&stdout, "alpha_x"), 0.05);
}

#[test]
fn coverage_writes_csv_and_exits_zero() {
    let out = temp_path("coverage.csv");
    let output = run(&[
        "coverage",
        "--model",
        "scale-gamma",
        "--shape",
        "2",
        "--alpha",
        "0.05",
        "--spending",
        "equal-tails",
        "--tau-max",
        "4",
        "--grid",
        "5",
        "--reps",
        "20000",
        "--seed",
        "42",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# credible "));
    assert_eq!(
        lines.next().unwrap(),
        "tau,estimate,std_error,quadrature,bound,pass"
    );
    assert!(text.contains("min_coverage,bound,verdict"));
    assert!(text.trim_end().ends_with("pass"));
    std::fs::remove_file(&out).ok();
}

#[test]
fn coverage_reruns_are_byte_identical() {
    let out_a = temp_path("det-a.csv");
    let out_b = temp_path("det-b.csv");
    let args = |out: &str| {
        vec![
            "coverage".to_string(),
            "--model".into(),
            "location-normal".into(),
            "--alpha".into(),
            "0.1".into(),
            "--tau-max".into(),
            "2".into(),
            "--grid".into(),
            "3".into(),
            "--reps".into(),
            "10000".into(),
            "--seed".into(),
            "7".into(),
            "--out".into(),
            out.into(),
        ]
    };
    assert!(bin()
        .args(args(out_a.to_str().unwrap()))
        .status()
        .unwrap()
        .success());
    assert!(bin()
        .args(args(out_b.to_str().unwrap()))
        .status()
        .unwrap()
        .success());
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert_eq!(a, b);
    std::fs::remove_file(&out_a).ok();
    std::fs::remove_file(&out_b).ok();
}

#[test]
fn tsv_format_uses_tabs() {
    let output = run(&[
        "validate",
        "--model",
        "location-normal",
        "--alpha",
        "0.1",
        "--format",
        "tsv",
    ]);
    assert!(output.status.success());
    let stdout = stdout_of(&output);
    assert!(stdout.contains("t\talpha_x\tband_lo\tband_hi\tpass"));
}

#[test]
fn validate_failure_still_writes_report() {
    let out = temp_path("reject.csv");
    let output = run(&[
        "validate",
        "--model",
        "location-normal",
        "--alpha",
        "0.1",
        "--spending",
        "constant:0.05",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("false"));
    std::fs::remove_file(&out).ok();
}

#[test]
fn unknown_labels_exit_two() {
    let output = run(&["coverage", "--model", "bogus", "--tau-max", "1"]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("known models"));

    let output = run(&[
        "interval",
        "--model",
        "location-normal",
        "--spending",
        "bogus",
        "--x",
        "1",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn config_file_supplies_values_and_flags_override() {
    let config_path = temp_path("config.toml");
    std::fs::write(
        &config_path,
        "model = \"location-normal\"\nalpha = 0.05\nspending = \"equal-tails\"\nx = [2.0]\n",
    )
    .unwrap();
    let output = run(&["interval", "--config", config_path.to_str().unwrap()]);
    assert!(output.status.success(), "{output:?}");
    let stdout = stdout_of(&output);
    assert!((kv_value(&stdout, "alpha_x") - 0.036640).abs() < 1e-5);

    // A flag overrides the file's alpha.
    let output = run(&[
        "interval",
        "--config",
        config_path.to_str().unwrap(),
        "--alpha",
        "0.1",
    ]);
    let stdout = stdout_of(&output);
    assert!((kv_value(&stdout, "y0") - 1.335178).abs() < 1e-4);
    std::fs::remove_file(&config_path).ok();
}

#[test]
fn out_dir_env_var_prefixes_relative_paths() {
    let dir = temp_path("outdir");
    std::fs::create_dir_all(&dir).unwrap();
    let output = bin()
        .args([
            "validate",
            "--model",
            "location-normal",
            "--alpha",
            "0.1",
            "--out",
            "report.csv",
        ])
        .env("CREDIBLE_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    assert!(dir.join("report.csv").exists());
    std::fs::remove_dir_all(&dir).ok();
}
