use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn heightlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heightlab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error_kind(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    v["error"].as_str().unwrap().to_string()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("heightlab-{}-{}.json", std::process::id(), name));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn height_of_one_plus_sqrt2() {
    let out = heightlab(&["height", "a", "--scenario", "bundled:sqrt2"]);
    assert!(out.status.success());
    let v = json(&out);
    let value: f64 = v["value"].as_str().unwrap().parse().unwrap();
    assert!((value - 0.5 * (1.0 + 2f64.sqrt()).ln()).abs() < 1e-12);
    assert_eq!(v["field"]["degree"], 2);
}

#[test]
fn membership_of_sqrt6() {
    let out = heightlab(&["member", "sqrt6", "--D", "K1,K2", "--scenario", "bundled:biquadratic", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["is_member"], true);
    assert!(v["witness"]["factors"].as_array().unwrap().len() == 2);

    let out = heightlab(&["member", "sqrt2_plus_sqrt3", "--D", "K1,K2", "--scenario", "bundled:biquadratic", "--json"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["is_member"], false);
}

#[test]
fn verify_bundled_suite() {
    let out = heightlab(&["verify", "product-formula", "--scenario", "bundled:eisenstein", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["reports"][0]["cases"].as_u64().unwrap() >= 20);
}

#[test]
fn scenario_file_and_precision_override() {
    let path = scratch("golden", r#"{"v":1,"field":[1,0,-10,0,1],"elements":{"u":"1 + (11*t - t^3)/2"}}"#);
    let p = path.to_str().unwrap();
    let a = heightlab(&["height", "u", "--scenario", p, "--json"]);
    let b = heightlab(&["height", "u", "--scenario", p, "--json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let high = Command::new(env!("CARGO_BIN_EXE_heightlab"))
        .args(["height", "u", "--scenario", p, "--json"])
        .env("HEIGHTLAB_PRECISION", "512")
        .output()
        .unwrap();
    assert!(high.status.success());
    let v1: f64 = json(&a)["value"].as_str().unwrap().parse().unwrap();
    let v2: f64 = json(&high)["value"].as_str().unwrap().parse().unwrap();
    assert!((v1 - 0.5 * (1.0 + 3f64.sqrt()).ln()).abs() < 1e-12);
    assert!((v1 - v2).abs() < 1e-12);
    std::fs::remove_file(path).ok();
}

#[test]
fn usage_errors_exit_2() {
    let out = heightlab(&["frobnicate", "--scenario", "bundled:sqrt2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "InvalidInput");

    let path = scratch("broken", r#"{"v":1,"field":[-2,0,1],"#);
    let out = heightlab(&["height", "t", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "ParseError");
    std::fs::remove_file(path).ok();

    let out = heightlab(&["height", "nope", "--scenario", "bundled:sqrt2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn refusals_exit_1() {
    let path = scratch("reducible", r#"{"v":1,"field":[-4,0,0,0,0,0,1]}"#);
    let out = heightlab(&["height", "t", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "ReduciblePolynomial");
    std::fs::remove_file(path).ok();

    let path = scratch("zero", r#"{"v":1,"field":[-2,0,1],"elements":{"z":"t^2 - 2"}}"#);
    let out = heightlab(&["height", "z", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "ZeroElement");
    std::fs::remove_file(path).ok();

    let out = heightlab(&["project", "cbrt2", "--D", "K1,K2", "--scenario", "bundled:cube_root_two", "--strict"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "ConditionViolated");
}

#[test]
fn condition_violation_is_reported_without_strict() {
    let out = heightlab(&["project", "cbrt2", "--D", "K1,K2", "--scenario", "bundled:cube_root_two", "--json"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["condition_violating"], true);
}
