use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ferchar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ferchar")).args(args).env_remove("FERCHAR_THREADS").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn coefficients(v: &Value) -> Vec<(i64, i64, i64, u64)> {
    v["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["z"].as_i64().unwrap(), r["u"].as_i64().unwrap(), r["q"].as_i64().unwrap(), r["dim"].as_u64().unwrap()))
        .collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ferchar-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn algebra_of_a_single_box_in_degree_zero() {
    let out = ferchar(&["char", "algebra", "--lambda", "1", "--qmax", "0", "--zmax", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(coefficients(&json(&out)), vec![(0, 0, 0, 1)]);
}

#[test]
fn gordon_level_one_by_hand() {
    // level one: z^n q^{n(n-1)} / (q)_n
    let out = ferchar(&["char", "gordon", "--k", "1", "--qmax", "3", "--zmax", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let expected = vec![(0, 0, 0, 1), (1, 0, 0, 1), (1, 0, 1, 1), (1, 0, 2, 1), (1, 0, 3, 1), (2, 0, 2, 1), (2, 0, 3, 1)];
    assert_eq!(coefficients(&json(&out)), expected);
}

#[test]
fn fusion_sum_matches_the_algebra_it_presents() {
    let w = ferchar(&["char", "fusion-w", "--i1", "0", "--k1", "1", "--i2", "0", "--k2", "1", "--qmax", "4", "--zmax", "4"]);
    let a = ferchar(&["char", "algebra", "--lambda", "2,0", "--c", "1,0", "--d", "1", "--qmax", "4", "--zmax", "4"]);
    assert_eq!(w.status.code(), Some(0));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(coefficients(&json(&w)), coefficients(&json(&a)));
}

#[test]
fn verify_gordon_and_convex_mf_are_equal() {
    for args in [&["verify", "gordon", "--k", "2", "--qmax", "8"][..], &["verify", "mf", "--lambda", "3,2,1", "--qmax", "6"][..]] {
        let out = ferchar(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let v = json(&out);
        assert_eq!(v.as_array().unwrap().len(), 1);
        assert_eq!(v[0]["verdict"], "EQUAL");
        assert!(v[0]["first_diff"].is_null());
        assert_eq!(v[0]["field"], "two-prime");
    }
}

#[test]
fn report_has_the_documented_keys() {
    let out = ferchar(&["verify", "gordon", "--k", "1", "--qmax", "3", "--field", "exact"]);
    let v = json(&out);
    let mut keys: Vec<&str> = v[0].as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["case", "field", "first_diff", "left", "millis", "right", "seed", "verdict", "window"]);
    assert_eq!(v[0]["field"], "exact");
    assert!(v[0]["seed"].is_null());
}

#[test]
fn fusion_where_the_sum_overcounts_exits_with_mismatch() {
    let out = ferchar(&["verify", "fusion", "--i1", "1", "--k1", "1", "--i2", "0", "--k2", "2", "--qmax", "6"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let verdicts: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["verdict"].as_str().unwrap()).collect();
    assert_eq!(verdicts, ["LE", "EQUAL", "LE"]);
    assert_eq!(v[0]["first_diff"], serde_json::json!({"z": 2, "u": 1, "q": 1, "left": 0, "right": 1}));
}

#[test]
fn fusion_at_level_one_is_equal_on_every_route() {
    let out = ferchar(&["verify", "fusion", "--i1", "1", "--k1", "1", "--i2", "0", "--k2", "1", "--qmax", "5", "--points", "3,-1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out).as_array().unwrap().iter().all(|r| r["verdict"] == "EQUAL"));
}

#[test]
fn empty_scan_is_an_empty_report() {
    let out = ferchar(&["scan", "gordon", "--max-level", "0", "--qmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), Value::Array(Vec::new()));
}

#[test]
fn scan_keeps_case_order() {
    let out = ferchar(&["--threads", "3", "scan", "gordon", "--max-level", "3", "--qmax", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let cases: Vec<String> = json(&out).as_array().unwrap().iter().map(|r| r["case"].as_str().unwrap().to_string()).collect();
    assert_eq!(cases, ["gordon k=1", "gordon k=2", "gordon k=3"]);
}

#[test]
fn nonconvex_partition_passes_with_an_upper_bound() {
    let out = ferchar(&["verify", "mf", "--lambda", "3,1,0", "--qmax", "4", "--zmax", "3", "--umax", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_ne!(json(&out)[0]["verdict"], "MISMATCH");
}

#[test]
fn bad_parameters_are_configuration_errors() {
    let cases: [&[&str]; 5] = [
        &["char", "fusion", "--i1", "3", "--k1", "1", "--i2", "0", "--k2", "1", "--qmax", "2", "--zmax", "2"],
        &["char", "gordon", "--k", "1"],
        &["verify", "gordon", "--k", "1", "--qmax", "-1"],
        &["char", "algebra", "--lambda", "1,2", "--qmax", "1", "--zmax", "1"],
        &["char", "algebra", "--lambda", "2", "--qmax", "1"],
    ];
    for args in cases {
        assert_eq!(ferchar(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn thread_override_must_be_a_count() {
    let out = Command::new(env!("CARGO_BIN_EXE_ferchar"))
        .args(["scan", "gordon", "--max-level", "1", "--qmax", "2"])
        .env("FERCHAR_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn timeout_is_a_resource_limit() {
    let out = ferchar(&["--timeout-secs", "0", "scan", "mf", "--max-size", "9", "--qmax", "12"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(json(&out).is_array());
}

#[test]
fn config_file_mirrors_the_flags() {
    let dir = scratch("config");
    let cfg = dir.join("run.json");
    let out_path = dir.join("out.csv");
    let first = ferchar(&["--save-config", cfg.to_str().unwrap(), "--format", "table", "verify", "gordon", "--k", "2", "--qmax", "4"]);
    assert_eq!(first.status.code(), Some(0));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&cfg).unwrap()).unwrap();
    assert_eq!(saved["verify"], serde_json::json!({"kind": "gordon", "k": 2}));
    assert_eq!(saved["qmax"], 4);
    let second = ferchar(&["--config", cfg.to_str().unwrap(), "--format", "csv", "--output", out_path.to_str().unwrap()]);
    assert_eq!(second.status.code(), Some(0));
    let csv = std::fs::read_to_string(&out_path).unwrap();
    assert!(csv.starts_with("case,left,right"));
    assert!(csv.lines().nth(1).unwrap().contains("EQUAL"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn malformed_config_is_rejected() {
    let dir = scratch("badconfig");
    let cfg = dir.join("run.json");
    std::fs::write(&cfg, r#"{"verify":{"kind":"gordon","k":2},"qmx":4}"#).unwrap();
    assert_eq!(ferchar(&["--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn pair_of_evaluators_from_json() {
    let out = ferchar(&[
        "verify",
        "pair",
        "--left",
        r#"{"evaluator":"lattice","gram":[[2]],"shift":[0]}"#,
        "--right",
        r#"{"evaluator":"gordon","k":1}"#,
        "--qmax",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)[0]["verdict"], "EQUAL");
}

#[test]
fn custom_presentation_file() {
    let dir = scratch("presentation");
    let path = dir.join("p.json");
    let dumped = ferchar(&["char", "algebra", "--lambda", "2", "--qmax", "4", "--zmax", "3"]);
    std::fs::write(&path, include_str!("data/gordon2.json")).unwrap();
    let custom = ferchar(&["char", "presentation", "--file", path.to_str().unwrap(), "--qmax", "4", "--zmax", "3"]);
    assert_eq!(custom.status.code(), Some(0), "{}", String::from_utf8_lossy(&custom.stderr));
    assert_eq!(coefficients(&json(&custom)), coefficients(&json(&dumped)));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn limit_character_reports_both_lattice_readings() {
    let out = ferchar(&["verify", "limform", "--i1", "0", "--k1", "1", "--i2", "0", "--k2", "1", "--qmax", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["verdict"], "EQUAL");
}

#[test]
fn csv_and_table_character_output() {
    let csv = ferchar(&["--format", "csv", "char", "gordon", "--k", "1", "--qmax", "2", "--zmax", "1"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap(), "z,u,q,dim\n0,0,0,1\n1,0,0,1\n1,0,1,1\n1,0,2,1\n");
    let table = ferchar(&["--format", "table", "char", "gordon", "--k", "1", "--qmax", "2", "--zmax", "1"]);
    assert!(String::from_utf8(table.stdout).unwrap().contains("z1u0"));
}
