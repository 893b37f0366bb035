use std::process::{Command, Output};

use serde_json::Value;

fn esw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_esw"))
        .args(args)
        .env_remove("ESW_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn spaces_list_has_seventeen_entries() {
    let o = esw(&["spaces", "list"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 17);
}

#[test]
fn spaces_show_w11() {
    let o = esw(&["spaces", "show", "W11"]);
    let s = stdout(&o);
    assert!(s.contains("dims: (35, 35, 35)"));
    assert!(s.contains("[123] = 175/18"));
}

#[test]
fn unknown_space_is_usage_error() {
    let o = esw(&["spaces", "show", "nosuch"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nosuch"));
}

#[test]
fn classify_w13_standard_metric() {
    let o = esw(&["classify", "--space", "W13", "--metric", "1,1,1", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["verdict"]["kind"], "GStable");
    assert!((v["lambda_p"].as_f64().unwrap() - 0.8).abs() < 1e-12);
    assert!((v["two_rho"].as_f64().unwrap() - 11.0 / 15.0).abs() < 1e-12);
    assert_eq!(v["two_rho_exact"], "11/15");
}

#[test]
fn classify_kahler_metric_sets_kernel_flag() {
    let o = esw(&["classify", "--space", "W2:1,1,1", "--metric", "2,1,1", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["verdict"]["label"], "saddle, coindex 1");
    assert!(v["lambda_p"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(v["verdict"]["ricci_locally_invertible"], false);
}

#[test]
fn classify_non_einstein_exits_three() {
    let o = esw(&["classify", "--space", "W2:1,1,1", "--metric", "1,1,3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("residual"));
}

#[test]
fn tolerance_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_esw"))
        .args(["classify", "--space", "W13", "--metric", "1,1,1", "--format", "json"])
        .env("ESW_TOL", "0.5")
        .output()
        .unwrap();
    let v = json(&o);
    assert_eq!(v["verdict"]["tolerance"].as_f64().unwrap(), 0.5);
    assert_eq!(v["verdict"]["kind"], "Degenerate");
    let bad = Command::new(env!("CARGO_BIN_EXE_esw"))
        .args(["classify", "--space", "W13", "--metric", "1,1,1"])
        .env("ESW_TOL", "abc")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn einstein_counts() {
    let v = json(&esw(&["einstein", "--space", "W5:l=5", "--format", "json"]));
    assert_eq!(v["solutions"].as_array().unwrap().len(), 4);
    let v = json(&esw(&["einstein", "--space", "W12", "--format", "json"]));
    let labels: Vec<&str> = v["solutions"].as_array().unwrap().iter().map(|s| s["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["g_q+", "g_q-"]);
}

#[test]
fn einstein_numeric_w8() {
    let v = json(&esw(&["einstein", "--space", "W8", "--method", "numeric", "--format", "json"]));
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 2);
    for want in [[1.4618, 1.8845], [0.8640, 0.4838]] {
        assert!(sols.iter().any(|s| {
            let m = s["metric"].as_array().unwrap();
            let x = |i: usize| m[i].as_f64().unwrap() / m[0].as_f64().unwrap();
            (x(1) - want[0]).abs() < 1e-3 && (x(2) - want[1]).abs() < 1e-3
        }));
    }
}

#[test]
fn reproduce_w2_passes_and_is_deterministic() {
    let a = esw(&["reproduce", "--table", "W2"]);
    assert_eq!(a.status.code(), Some(0));
    let b = esw(&["reproduce", "--table", "W2"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("FAIL"));
}

#[test]
fn reproduce_json_round_trips() {
    let o = esw(&["reproduce", "--table", "W2Sc", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["table_id"], "W2Sc");
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.iter().all(|r| r["pass"] == true));
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
}

#[test]
fn reproduce_with_params() {
    let o = esw(&["reproduce", "--table", "W5", "--params", "1..4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("W2(2,3,4) g_0"));
}

#[test]
fn reproduce_fs3_without_directory_explains() {
    let o = esw(&["reproduce", "--table", "FS3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--descriptor-dir") || String::from_utf8_lossy(&o.stderr).contains("directory"));
}

#[test]
fn reproduce_fs3_with_fixtures() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/fixtures/fs3");
    let o = esw(&["reproduce", "--table", "FS3", "--descriptor-dir", dir]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn bad_table_and_range_are_usage_errors() {
    assert_eq!(esw(&["reproduce", "--table", "W9"]).status.code(), Some(2));
    assert_eq!(esw(&["reproduce", "--table", "W2", "--params", "5..1"]).status.code(), Some(2));
    assert_eq!(esw(&["classify", "--space", "W13"]).status.code(), Some(2));
}

#[test]
fn flow_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let o = esw(&[
        "flow", "--space", "W11", "--x0", "1,1,1", "--t-max", "1", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("ConvergedToEinstein"));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("t,x1,x2,x3,scalar\n"));
}

#[test]
fn flow_from_w15_standard_metric_escapes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let o = esw(&[
        "flow", "--space", "W15", "--x0", "1.01,0.99,1", "--t-max", "50", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(!s.contains("MaxTimeReached"), "{s}");
}
