use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bottbord(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bottbord"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &TempDir, name: &str, value: Value) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn matrix(dir: &TempDir, dims: &[i64], coefficients: &str, rows: Value) -> String {
    write(
        dir,
        "matrix.json",
        json!({"dims": dims, "coefficients": coefficients, "rows": rows}),
    )
}

fn records(path: &Path) -> Vec<Value> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn validate_accepts_and_rejects() {
    let dir = TempDir::new().unwrap();
    let good = matrix(&dir, &[1, 1], "Z2", json!([[1, 1], [0, 1]]));
    let out = bottbord(&["validate", &good]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["valid"], json!(true));

    let bad = matrix(&dir, &[1, 1], "Z2", json!([[1, 1], [1, 1]]));
    let out = bottbord(&["validate", &bad]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["valid"], json!(false));
}

#[test]
fn classify_nonorientable_triangular_cube() {
    let dir = TempDir::new().unwrap();
    let f = matrix(&dir, &[1, 1, 1], "Z2", json!([[1, 0, 1], [0, 1, 0], [0, 0, 1]]));
    let out = bottbord(&["classify", &f]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["orientable"], json!(false));
    assert_eq!(v["triangularizable"], json!(true));
    assert_eq!(v["generalized_real_bott"], json!(true));
}

#[test]
fn cobordism_of_the_cyclic_square() {
    let dir = TempDir::new().unwrap();
    let f = matrix(&dir, &[1, 1], "Z", json!([[1, 2], [1, 1]]));
    let out = bottbord(&["cobordism", &f]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["unoriented_boundary"], json!(true));
    assert_eq!(v["oriented_obstruction"], json!("pontryagin"));
}

#[test]
fn numbers_flags_select_analyses() {
    let dir = TempDir::new().unwrap();
    let f = matrix(&dir, &[2], "Z", json!([[1, 1]]));
    let v = json_of(&bottbord(&["numbers", &f, "--pontryagin"]));
    assert!(v.get("sw").is_none());
    assert_eq!(v["pontryagin"]["numbers"].as_array().unwrap().len(), 1);
    let v = json_of(&bottbord(&["numbers", &f]));
    assert!(v.get("sw").is_some() && v.get("pontryagin").is_some());

    let g = matrix(&dir, &[2], "Z2", json!([[1, 1]]));
    let out = bottbord(&["numbers", &g, "--pontryagin"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ring_reports_ranks() {
    let dir = TempDir::new().unwrap();
    let f = matrix(&dir, &[2, 1], "Z2", json!([[1, 1, 1], [0, 0, 1]]));
    let v = json_of(&bottbord(&["ring", &f, "--poincare"]));
    assert_eq!(v["engine"], json!("triangular"));
    assert_eq!(v["poincare"], json!([1, 2, 2, 1]));
    assert_eq!(v["total_rank"], json!(6));
}

#[test]
fn verify_example_reports_w3_squared() {
    let out = bottbord(&["verify", "example_3_7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["passed"], json!(true));
    assert_eq!(v["w3_squared"], json!(1));
}

#[test]
fn verify_counterexample_exits_one() {
    let out = bottbord(&["verify", "thm_3_4", "--dims", "2,2,1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["passed"], json!(false));
    assert!(!v["counterexamples"].as_array().unwrap().is_empty());
}

#[test]
fn verify_accepts_negative_b() {
    let out = bottbord(&["verify", "thm_4_5", "--b", "-1,-2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(bottbord(&["verify", "no_such_theorem"]).status.code(), Some(2));
    assert_eq!(
        bottbord(&["validate", "/nonexistent/matrix.json"]).status.code(),
        Some(2)
    );
    let ragged = matrix(&dir, &[1, 1], "Z2", json!([[1, 1]]));
    assert_eq!(bottbord(&["validate", &ragged]).status.code(), Some(2));
    let extra = write(
        &dir,
        "extra.json",
        json!({"dims": [1], "coefficients": "Z2", "rows": [[1]], "x": 0}),
    );
    assert_eq!(bottbord(&["validate", &extra]).status.code(), Some(2));
    let singular = matrix(&dir, &[1, 1], "Z2", json!([[1, 1], [1, 1]]));
    let out = bottbord(&["cobordism", &singular]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(bottbord(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = bottbord(&["verify", "thm_4_3"]);
    let b = bottbord(&["verify", "thm_4_3"]);
    assert_eq!(a.stdout, b.stdout);
    let a = bottbord(&["verify", "example_4_6", "--seed", "7"]);
    let b = bottbord(&["verify", "example_4_6", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn enumerate_writes_jsonl() {
    let dir = TempDir::new().unwrap();

    let spec = write(
        &dir,
        "cyclic.json",
        json!({"dims": [1, 1], "mode": "Z", "kind": "cyclic"}),
    );
    let out = dir.path().join("cyclic.jsonl");
    let run = bottbord(&["enumerate", "--spec", &spec, "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let recs = records(&out);
    assert_eq!(recs.len(), 4);
    assert!(recs.iter().all(|r| r["pontryagin_all_zero"] == json!(false)));

    let spec = write(
        &dir,
        "cube.json",
        json!({"dims": [1, 1, 1, 1], "mode": "Z2", "kind": "triangular"}),
    );
    let out = dir.path().join("cube.jsonl");
    let run = bottbord(&["enumerate", "--spec", &spec, "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 64);
    assert!(recs.iter().all(|r| r["sw_all_zero"] == json!(true)));
    assert_eq!(json_of(&run)["total"], json!(64));

    let spec = write(
        &dir,
        "empty.json",
        json!({"dims": [1, 1], "mode": "Z2", "kind": "explicit"}),
    );
    let out = dir.path().join("empty.jsonl");
    let run = bottbord(&["enumerate", "--spec", &spec, "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    assert!(records(&out).is_empty());
}
