use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn burnside(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_burnside"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn embed_quaternion_j_into_complex_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "j.json", r#"{"field":"H","n_rows":1,"n_cols":1,"entries":[[[0,0,1,0]]]}"#);
    let out = burnside(&["embed", &f, "--target", "M2C", "--output", "json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["field"], "C");
    assert_eq!(v["entries"], serde_json::json!([[[0.0, 0.0], [1.0, 0.0]], [[-1.0, 0.0], [0.0, -0.0]]]));
}

#[test]
fn eigs_of_diagonal_and_quaternion_unit() {
    let dir = tempfile::tempdir().unwrap();
    let d = write(dir.path(), "d.json", r#"{"field":"R","n_rows":2,"n_cols":2,"entries":[[1,0],[0,2]]}"#);
    let v = json_of(&burnside(&["eigs", &d, "--output", "json"]));
    let mut re: Vec<f64> = v["values"].as_array().unwrap().iter().map(|z| z[0].as_f64().unwrap()).collect();
    re.sort_by(f64::total_cmp);
    assert_eq!(re, vec![1.0, 2.0]);
    assert_eq!(v["real_spectrum"], true);
    let j = write(dir.path(), "j.json", r#"{"field":"H","n_rows":1,"n_cols":1,"entries":[[[0,0,1,0]]]}"#);
    let v = json_of(&burnside(&["eigs", &j, "--output", "json"]));
    let z = &v["values"][0];
    assert!(z[0].as_f64().unwrap().abs() < 1e-12 && (z[1].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn closure_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let eps = write(dir.path(), "e.json", r#"{"field":"R","n_rows":2,"n_cols":2,"entries":[[0,-1],[1,0]]}"#);
    assert_eq!(json_of(&burnside(&["closure", &eps, "--output", "json"]))["dim"], 2);
    let units = write(
        dir.path(),
        "u.json",
        r#"[{"field":"R","n_rows":2,"n_cols":2,"entries":[[0,1],[0,0]]},
            {"field":"R","n_rows":2,"n_cols":2,"entries":[[0,0],[1,0]]}]"#,
    );
    assert_eq!(json_of(&burnside(&["closure", &units, "--output", "json"]))["dim"], 4);
    let id = write(dir.path(), "i.json", r#"{"field":"R","n_rows":2,"n_cols":2,"entries":[[1,0],[0,1]]}"#);
    assert_eq!(json_of(&burnside(&["closure", &id, "--output", "json"]))["dim"], 1);
}

#[test]
fn irreducible_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(dir.path(), "t.json", r#"{"field":"R","n_rows":2,"n_cols":2,"entries":[[1,1],[0,2]]}"#);
    let out = burnside(&["irreducible", &tri, "--output", "json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["verdict"], "reducible");
    assert_eq!(v["witness"]["dim"], 1);
    let v = json_of(&burnside(&["irreducible", "--gen", "rank-one", "--n", "3", "--output", "json"]));
    assert_eq!(v["verdict"], "irreducible");
}

#[test]
fn classify_canonical_complex_in_real() {
    let args = ["classify", "--gen", "canonical", "--kind", "C", "--ambient", "R", "--n", "4", "--seed", "3", "--output", "json"];
    let a = burnside(&args);
    assert!(a.status.success());
    let v = json_of(&a);
    assert_eq!((v["kind"].as_str(), v["minimal_rank"].as_u64(), v["dim"].as_u64()), (Some("C"), Some(2), Some(8)));
    // same inputs, same bytes
    assert_eq!(a.stdout, burnside(&args).stdout);
}

#[test]
fn canonicalize_real_kind_in_quaternions() {
    let out = burnside(&["canonicalize", "--gen", "canonical", "--ambient", "H", "--n", "2", "--seed", "5", "--output", "json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert!(v["similarity_residual"].as_f64().unwrap() < 1e-6);
    assert_eq!(v["similarity"]["field"], "H");
}

#[test]
fn canonicalize_complex_kind_is_a_usage_error() {
    let out = burnside(&["canonicalize", "--gen", "canonical", "--kind", "C", "--ambient", "C", "--n", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported"));
}

#[test]
fn trace_reconstruction_exact_path() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.json", r#"{"field":"R","n_rows":2,"n_cols":2,"entries":[[7,-3],[12,5]]}"#);
    let v = json_of(&burnside(&["trace-recon", "--gen", "matrix-units", "--probe", &x, "--exact", "--output", "json"]));
    assert_eq!(v["round_trip_exact"], true);
    assert_eq!(v["exact"], serde_json::json!([["7", "-3"], ["12", "5"]]));
    assert_eq!(v["round_trip_error"], 0.0);
}

#[test]
fn verify_examples() {
    let out = burnside(&["verify", "2.3", "--gen", "rank-one", "--n", "4", "--seed", "7", "--output", "json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!((v["hypotheses_hold"].as_bool(), v["conclusion_holds"].as_bool()), (Some(true), Some(true)));

    let out = burnside(&["verify", "2.9", "--fixture", "paper-counterexample", "--output", "json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["hypotheses_hold"], false);
    assert!(v["conclusion_holds"].is_null());
    assert!(v["diagnostics"]["hypothesis_failure"].as_str().unwrap().contains("not triangularizable"));

    let v = json_of(&burnside(&["verify", "exercise-embeddings", "--output", "json"]));
    assert_eq!(v["conclusion_holds"], true);

    let v = json_of(&burnside(&["verify", "2.7", "--gen", "matrix-units", "--output", "json"]));
    assert_eq!(v["conclusion_holds"], true);
    assert_eq!(v["diagnostics"]["elements"], 5);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(burnside(&["verify", "2.6"]).status.code(), Some(1));
    assert_eq!(burnside(&["classify"]).status.code(), Some(1));
    assert_eq!(burnside(&["closure", "--gen", "nope"]).status.code(), Some(1));
    assert_eq!(burnside(&["closure", "--gen", "rank-one", "--tol", "-1"]).status.code(), Some(1));
    assert_eq!(burnside(&["closure", "/nonexistent.json"]).status.code(), Some(1));
    // domain mismatch between theorem and instance
    assert_eq!(burnside(&["verify", "2.4", "--gen", "rank-one"]).status.code(), Some(1));
    assert_eq!(burnside(&["--help"]).status.code(), Some(0));
}

#[test]
fn closure_cap_is_indeterminate() {
    let out = burnside(&["closure", "--gen", "rank-one", "--n", "3", "--max-dim", "4"]);
    assert_eq!(out.status.code(), Some(2));
}
