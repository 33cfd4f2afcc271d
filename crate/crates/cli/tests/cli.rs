use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kts")).args(args).output().expect("binary runs")
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (i32, Value, String) {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_owned();
    full.extend(["--out", &p]);
    let out = kts(&full);
    let code = out.status.code().expect("exit code");
    let text = std::fs::read_to_string(&path).unwrap_or_default();
    let json = if text.is_empty() { Value::Null } else { serde_json::from_str(&text).unwrap() };
    (code, json, text)
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify-theorem1", "--m", "2", "--r", "1", "--degree", "1", "--involution", "all"];
    let (c1, _, a) = run_to(dir.path(), "a.json", &args);
    let (c2, _, b) = run_to(dir.path(), "b.json", &args);
    assert_eq!(c1, c2);
    assert!(!a.is_empty());
    assert_eq!(a, b);

    let ids = ["verify-identities", "--m", "1", "--cases", "20", "--field-cases", "3", "--degree", "2"];
    let (_, _, a) = run_to(dir.path(), "c.json", &ids);
    let (_, _, b) = run_to(dir.path(), "d.json", &ids);
    assert_eq!(a, b);
}

#[test]
fn stdout_carries_the_report_without_out() {
    let out = kts(&["solve-twistor", "--variant", "riemannian", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "solve-twistor");
}

#[test]
fn zero_tolerance_is_a_usage_error() {
    let out = kts(&["verify-theorem1", "--tolerance", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn middle_type_with_odd_m_is_a_usage_error() {
    let out = kts(&["solve-twistor", "--variant", "middle", "--m", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even"));
}

#[test]
fn undefined_gap_constants_are_a_usage_error() {
    let out = kts(&["verify-theorem1", "--variant", "kirchberg-text", "--m", "2", "--r", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eta_pairing_is_rejected() {
    let out = kts(&["verify-theorem1", "--involution", "eta"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn float_identity_suite_is_a_usage_error() {
    let out = kts(&["verify-identities", "--backend", "float", "--cases", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn riemannian_linear_solutions_in_dimension_two() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v, _) = run_to(
        dir.path(),
        "s.json",
        &["solve-twistor", "--variant", "riemannian", "--m", "1", "--degree", "1"],
    );
    assert_eq!(code, 0);
    assert_eq!(v["dimension"], 4);
    assert_eq!(v["nonconstant_dimension"], 2);
    assert_eq!(v["basis"].as_array().unwrap().len(), 4);
}

#[test]
fn kahlerian_type_zero_passes_for_every_pairing() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v, _) = run_to(
        dir.path(),
        "t.json",
        &["verify-theorem1", "--m", "2", "--r", "0", "--degree", "1", "--involution", "all"],
    );
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
    assert_eq!(v["vacuous"], true);
    assert_eq!(v["involutions"].as_array().unwrap().len(), 4);
}

#[test]
fn constant_solutions_have_exactly_zero_residual() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v, _) = run_to(dir.path(), "z.json", &["verify-theorem1", "--m", "2", "--r", "1", "--degree", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["vacuous"], true);
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["max_residual"], "0 (exact)", "{row}");
    }
}

#[test]
fn float_backend_agrees_on_a_passing_case() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v, _) = run_to(
        dir.path(),
        "f.json",
        &["verify-theorem1", "--m", "2", "--r", "0", "--degree", "1", "--backend", "float"],
    );
    assert_eq!(code, 0);
    assert_eq!(v["backend"], "float");
}

#[test]
fn perturbed_basis_fails_the_precondition() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v, _) = run_to(dir.path(), "c.json", &["verify-theorem1", "--m", "1", "--degree", "1", "--corrupt"]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
    assert!(v["rows"][0]["precondition_failed"].is_string());
}
