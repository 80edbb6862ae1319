//! End-to-end runs of the `kratzer` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kratzer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kratzer"))
        .args(args)
        .env_remove("KRATZER_CONSTANTS")
        .output()
        .expect("binary runs")
}

fn kratzer_env(args: &[&str], constants: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kratzer"))
        .args(args)
        .env("KRATZER_CONSTANTS", constants)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn spectrum_json_has_twelve_digit_energies() {
    let o = kratzer(&[
        "spectrum", "--molecule", "LiH", "--potential", "kratzer", "--n-max", "2", "--l-max", "1", "--dim", "3",
        "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let ground = rows[0]["energy_ev"].as_f64().unwrap();
    assert!((ground + 2.467310304097).abs() < 1e-5 * 2.47, "{ground}");
}

#[test]
fn spectrum_csv_and_markdown() {
    let csv = kratzer(&["spectrum", "--molecule", "I2", "--n-max", "0", "--l-max", "0", "--format", "csv"]);
    assert_eq!(csv.status.code(), Some(0));
    let text = stdout(&csv);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("molecule,potential,n,l,dim,energy_ev"));
    assert!(lines.next().unwrap().starts_with("I2,kratzer,0,0,3,-1.5"));

    let md = kratzer(&["spectrum", "--molecule", "N2", "--potential", "modified", "--n-max", "0", "--l-max", "0"]);
    assert_eq!(md.status.code(), Some(0));
    assert!(stdout(&md).starts_with("| molecule |"));
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(kratzer(&["spectrum", "--molecule", "XeF6"]).status.code(), Some(2));
    assert_eq!(kratzer(&["spectrum", "--molecule", "LiH", "--dim", "1"]).status.code(), Some(2));
    assert_eq!(kratzer(&["tables", "6"]).status.code(), Some(2));
    assert_eq!(kratzer(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(kratzer(&["--amu-c2", "-1", "spectrum", "--molecule", "LiH"]).status.code(), Some(2));
    let o = kratzer(&["spectrum", "--molecule", "XeF6"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown molecule"));
}

#[test]
fn help_exits_0() {
    let o = kratzer(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verify"));
}

#[test]
fn large_quantum_numbers_warn() {
    let o = kratzer(&["spectrum", "--molecule", "LiH", "--n-max", "201", "--l-max", "0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn tables_report_and_calibration() {
    let o = kratzer(&["tables", "2", "--calibrate", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let report = json(&o);
    assert!(report["max_relative_deviation"].as_f64().unwrap() <= 1e-7);
    assert_eq!(report["rows"].as_array().unwrap().len(), 63);

    let md = stdout(&kratzer(&["tables", "7"]));
    assert!(md.contains("malformed entry: CO"), "{md}");
    assert!(md.contains("0.543929725307"));

    let md = stdout(&kratzer(&["tables", "4"]));
    assert!(md.contains("printed equal: 27; computed bit-identical: 27"), "{md}");
}

#[test]
fn verify_is_deterministic_and_fails_on_zero_tolerance() {
    let args = ["verify", "--seed", "7", "--count", "8", "--n-max", "2", "--oracle-n-max", "0", "--format", "json"];
    let a = kratzer(&args);
    let b = kratzer(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report = json(&a);
    assert!(report["summary"].as_array().unwrap().iter().all(|c| c["passed"] == true));

    let tampered = kratzer(&["verify", "--count", "4", "--no-oracle", "--tol-qc", "0"]);
    assert_eq!(tampered.status.code(), Some(1));
    assert!(stdout(&tampered).contains("FAIL"));
}

#[test]
fn degeneracy_partners() {
    let o = kratzer(&["degeneracy", "--n", "0", "--l", "4", "--dim", "2", "--d-max", "8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o);
    let states: Vec<(i64, i64)> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["l"].as_i64().unwrap(), r["dim"].as_i64().unwrap()))
        .collect();
    assert_eq!(states, vec![(4, 2), (3, 4), (2, 6), (1, 8)]);
    assert!(rows.as_array().unwrap().iter().all(|r| r["same_bits"] == true));

    let o = kratzer(&["degeneracy", "--n", "0", "--l", "1", "--dim", "2", "--d-max", "4", "--molecule", "I2", "--calibrate"]);
    let text = stdout(&o);
    assert_eq!(text.matches("-1.579079099175").count(), 2, "{text}");
}

#[test]
fn constants_from_environment_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("constants.json");
    std::fs::write(&path, r#"{"amu_c2": 9.0e8}"#).unwrap();
    let args = ["spectrum", "--molecule", "LiH", "--n-max", "0", "--l-max", "0", "--format", "json"];
    let energy = |o: Output| json(&o)[0]["energy_ev"].as_f64().unwrap();
    let plain = energy(kratzer(&args));
    let from_env = energy(kratzer_env(&args, &path));
    assert_ne!(plain, from_env);
    let mut flagged = vec!["--amu-c2", "9.31494028e8"];
    flagged.extend_from_slice(&args);
    assert_eq!(energy(kratzer_env(&flagged, &path)), plain);

    std::fs::write(&path, r#"{"amu_c2": "heavy"}"#).unwrap();
    assert_eq!(kratzer_env(&args, &path).status.code(), Some(2));
}

#[test]
fn molecules_file_adds_records() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mol.json");
    std::fs::write(
        &path,
        r#"{"molecules": [{"name": "ScO", "De": 56000.0, "De_unit": "cm-1", "re": 1.668, "mu": 12.3}]}"#,
    )
    .unwrap();
    let o = kratzer(&[
        "spectrum", "--molecule", "ScO", "--molecules", path.to_str().unwrap(), "--n-max", "0", "--l-max", "0",
        "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("ScO,kratzer,0,0,3,-6."));

    std::fs::write(&path, "{\"molecules\": [\n{\"name\": \"X\", \"De\": -1, \"re\": 1, \"mu\": 1}]}").unwrap();
    let o = kratzer(&["spectrum", "--molecule", "X", "--molecules", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("`De`") && err.contains("line 2"), "{err}");
}
