//! Runs the built binary against the example document.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn example() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/examples/example.json")
}

fn valsem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_valsem")).args(args).output().expect("binary runs")
}

fn with_example(cmd: &str, rest: &[&str]) -> Output {
    let path = example();
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(rest);
    valsem(&args)
}

fn report(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn write_temp(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("valsem-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn rational_form_lists_the_six_factors() {
    let r = report(&with_example("poincare", &["--rational"]));
    assert_eq!(r["command"], "poincare");
    assert!(r["inputDigest"].as_str().unwrap().starts_with("sha256:"));
    let mut factors: Vec<(Vec<u64>, i64)> = r["results"]["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| (serde_json::from_value(f["v"].clone()).unwrap(), f["e"].as_i64().unwrap()))
        .collect();
    factors.sort();
    assert_eq!(
        factors,
        vec![
            (vec![1, 4, 4], -1),
            (vec![3, 6, 6], -1),
            (vec![3, 12, 12], 1),
            (vec![3, 13, 13], -1),
            (vec![6, 26, 26], 1),
            (vec![6, 27, 26], -1),
        ]
    );
}

#[test]
fn membership_queries() {
    let r = report(&with_example("semigroup", &["--member", "0,1,0"]));
    assert_eq!(r["results"]["status"], "absent");
    let r = report(&with_example("semigroup", &["--member", "3,10,10"]));
    assert_eq!(r["results"]["status"], "member");
    assert_eq!(r["results"]["lambda"], serde_json::json!({"1": 1, "2": 1}));
    let r = report(&with_example("semigroup", &["--decompose", "6,27,26"]));
    assert_eq!(r["results"]["a"], serde_json::json!([0, 1, 0]));
    assert_eq!(r["results"]["d"], serde_json::json!([1, 2, 1]));
}

#[test]
fn generators_and_contact() {
    let r = report(&with_example("semigroup", &["--generators"]));
    assert_eq!(r["results"]["vertices"], serde_json::json!([1, 2, 3, 5, 7]));
    assert_eq!(r["results"]["generatingSequence"]["curvettes"], serde_json::json!([1, 3, 5, 7]));
    let r = report(&with_example("semigroup", &["--contact"]));
    let seven = &r["results"][1];
    assert_eq!(seven["vertex"], 7);
    assert_eq!(seven["data"]["beta_bar"], serde_json::json!([4, 6, 13, 27]));
    assert_eq!(seven["data"]["conductor"], 16);
}

#[test]
fn verify_passes_on_the_example() {
    let out = with_example("verify", &["--box", "24"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&out);
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.len() >= 10);
    assert!(checks.iter().all(|c| c["status"] == "pass"), "{checks:?}");
}

#[test]
fn single_check_and_listing() {
    let r = report(&with_example("verify", &["--check", "graph.tree", "--box", "8"]));
    assert_eq!(r["checks"].as_array().unwrap().len(), 1);
    let out = with_example("verify", &["--list"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("poincare.curve_identity"));
    let out = with_example("verify", &["--check", "no.such"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    let a = with_example("verify", &["--box", "12"]);
    let b = with_example("verify", &["--box", "12"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn graph_and_curve_outputs() {
    let out = with_example("graph", &["--format", "dot"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("graph dual {"));
    assert!(dot.contains("1 -- 4;"));
    let r = report(&with_example("curve", &["--limit", "--box", "6,13,13", "--kmax", "6"]));
    assert_eq!(r["results"]["profile"]["k0"], 4);
    let r = report(&with_example("curve", &["--alexander", "--box", "12,54,52"]));
    assert_eq!(r["results"]["polynomialOnBox"], true);
    let r = report(&with_example("curve", &["--vk", "1"]));
    assert_eq!(r["results"]["branches"], serde_json::json!([8, 9, 10]));
}

#[test]
fn input_errors_exit_with_two() {
    let bad = write_temp("bad.json", "{\"centers\": []}");
    assert_eq!(valsem(&["model", bad.to_str().unwrap()]).status.code(), Some(2));
    let satellite = write_temp(
        "sat.json",
        r#"{"centers":[{"id":1,"kind":"origin"},{"id":2,"kind":"satellite","on":[1,1]}],"marked":[2]}"#,
    );
    let out = valsem(&["model", satellite.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(valsem(&["model", "/nonexistent/input.json"]).status.code(), Some(2));
    assert_eq!(with_example("semigroup", &["--decompose", "0,1,0"]).status.code(), Some(2));
    assert_eq!(with_example("semigroup", &["--member", "1,2"]).status.code(), Some(2));
}

#[test]
fn non_minimal_model_skips_curve_checks() {
    // Vertex 2 is an unmarked leaf, so the model is not minimal for {3}.
    let doc = write_temp("nonmin.json", r#"{"centers":[{"id":1,"kind":"origin"},{"id":2,"kind":"free","on":1},{"id":3,"kind":"free","on":1}],"marked":[3]}"#);
    let out = valsem(&["verify", doc.to_str().unwrap(), "--box", "6"]);
    let r = report(&out);
    let status = |name: &str| r["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap()["status"].clone();
    assert_eq!(status("poincare.curve_identity"), "skipped");
    assert_eq!(status("semigroup.decomposition"), "pass");
}
