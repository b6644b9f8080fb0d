//! End-to-end tests of the command-line interface: golden outputs, exit
//! codes, and determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stokes-certify"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf8 stderr")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn coeffs_csv_matches_golden() {
    let output = run(&["coeffs", "--n-max", "8", "--format", "csv"]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout(&output);
    assert_eq!(text, include_str!("golden/coeffs_n8.csv"));
    // 9 data rows plus header; b column ends with the exact published value
    assert_eq!(text.lines().count(), 10);
    assert!(text
        .lines()
        .last()
        .unwrap()
        .contains("6575066918153233021/5744440195153920000"));
}

#[test]
fn coeffs_single_seed_row() {
    let output = run(&["coeffs", "--n-max", "0", "--format", "csv"]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout(&output);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("0,1/1,1/1,1/1,"));
}

#[test]
fn coeffs_json_is_valid_with_all_rows() {
    let output = run(&["coeffs", "--n-max", "40", "--format", "json"]);
    assert_eq!(exit_code(&output), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).expect("valid json");
    assert_eq!(doc["n_max"], 40);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 41);
    assert_eq!(doc["rows"][2]["b"], "169/160");
    assert!(doc["rows"][0]["q"].is_null());
}

#[test]
fn coeffs_json_thousand_rows() {
    let output = run(&["coeffs", "--n-max", "1000", "--format", "json"]);
    assert_eq!(exit_code(&output), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).expect("valid json");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 1001);
}

#[test]
fn coeffs_output_is_deterministic() {
    let first = run(&["coeffs", "--n-max", "25", "--format", "json"]);
    let second = run(&["coeffs", "--n-max", "25", "--format", "json"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn certify_json_matches_golden() {
    let output = run(&["certify", "--n-max", "50", "--format", "json"]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(stdout(&output), include_str!("golden/certificate_n50.json"));
}

#[test]
fn certify_small_a2_fails_at_first_base_case() {
    let output = run(&["certify", "--n-max", "50", "--a2", "1.05"]);
    assert_eq!(exit_code(&output), 2);
    // b_2 = 169/160 = 1.05625 is the first value above 1.05
    assert!(stderr(&output).contains("k = 2"));
}

#[test]
fn certify_rejects_unanchored_range() {
    let output = run(&["certify", "--n-max", "7"]);
    assert_eq!(exit_code(&output), 64);
}

#[test]
fn certify_rejects_inverted_constants() {
    let output = run(&["certify", "--n-max", "20", "--a1", "2", "--a2", "1"]);
    assert_eq!(exit_code(&output), 64);
}

#[test]
fn stokes_pipeline_certifies_nonzero() {
    let output = run(&[
        "stokes",
        "--n-max",
        "100",
        "--precision-bits",
        "64",
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&output), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).expect("valid json");
    assert_eq!(doc["nonzero_certified"], true);
    assert_eq!(doc["s1_phase_over_pi"], "1/2");
    assert_eq!(doc["s2_phase_over_pi"], "4/7");
}

#[test]
fn stokes_human_phases() {
    let output = run(&["stokes", "--n-max", "64", "--precision-bits", "32", "--format", "human"]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout(&output);
    assert!(text.contains("S1 phase = 1/2 pi"));
    assert!(text.contains("S2 phase = 4/7 pi"));
    assert!(text.contains("nonzero certified = true"));
}

#[test]
fn convergence_matches_golden() {
    let output = run(&["convergence", "--n-max", "16", "--precision-bits", "64"]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(stdout(&output), include_str!("golden/convergence_n16.csv"));
}

#[test]
fn convergence_header_schema() {
    let output = run(&["convergence", "--n-max", "8", "--precision-bits", "32"]);
    assert_eq!(exit_code(&output), 0);
    assert_eq!(
        stdout(&output).lines().next().unwrap(),
        "n,b_n,enclosure_lo,enclosure_hi,large_order_lo,large_order_hi"
    );
}

#[test]
fn oracle_passes_and_fails_on_injection() {
    let clean = run(&["oracle", "--n-max", "6", "--format", "json"]);
    assert_eq!(exit_code(&clean), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&clean)).expect("valid json");
    assert_eq!(doc["triple_agreement"], true);
    assert_eq!(doc["first_failure"], serde_json::Value::Null);

    let corrupted = run(&["oracle", "--n-max", "6", "--inject-corruption"]);
    assert_eq!(exit_code(&corrupted), 2);
    assert!(stderr(&corrupted).contains("triple agreement"));
}

#[test]
fn oracle_order_cap() {
    let output = run(&["oracle", "--n-max", "201"]);
    assert_eq!(exit_code(&output), 64);
}

#[test]
fn out_flag_writes_file_and_io_failures_exit_74() {
    let dir = std::env::temp_dir().join("stokes-certify-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("coeffs.csv");
    let output = run(&["coeffs", "--n-max", "3", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0);
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("169/160"));
    std::fs::remove_file(&path).ok();

    let bad = run(&["coeffs", "--n-max", "3", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(exit_code(&bad), 74);
}

#[test]
fn unknown_flag_is_usage_error() {
    let output = run(&["coeffs", "--bogus"]);
    assert_eq!(exit_code(&output), 64);
}
