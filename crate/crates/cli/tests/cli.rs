use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn nullhyp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nullhyp")).args(args).output().expect("binary runs")
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn paths<const N: usize>(dir: &TempDir, names: [&str; N]) -> [String; N] {
    names.map(|s| path(dir, &format!("{s}.json")))
}

fn json(p: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(Path::new(p)).unwrap()).unwrap()
}

#[test]
fn gen_is_deterministic_and_stable() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.json"), path(&dir, "b.json"));
    assert!(nullhyp(&["gen", "--n", "4", "--seed", "1", "--out", &a]).status.success());
    assert!(nullhyp(&["gen", "--n", "4", "--seed", "1", "--out", &b]).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let out = nullhyp(&["check", &a, "--json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["stable"], Value::Bool(true));
    assert_eq!(json(&a)["type"], "point");
}

#[test]
fn solve_then_round_trip_through_higgs_and_charts() {
    let dir = TempDir::new().unwrap();
    let [x, y, r, h, c, h2, x2] = paths(&dir, ["x", "y", "r", "h", "c", "h2", "x2"]);
    assert!(nullhyp(&["gen", "--n", "6", "--seed", "5", "--out", &x]).status.success());
    assert!(nullhyp(&["solve", &x, "--out", &y, "--report", &r]).status.success());
    assert_eq!(json(&r)["converged"], Value::Bool(true));
    let check = nullhyp(&["check", &y, "--json"]);
    assert_eq!(serde_json::from_slice::<Value>(&check.stdout).unwrap()["in_p0n"], Value::Bool(true));
    assert!(nullhyp(&["to-higgs", &y, "--out", &h]).status.success());
    assert!(nullhyp(&["chart", &h, "--sigma", "1,3", "--out", &c]).status.success());
    assert_eq!(json(&c)["sigma"], serde_json::json!([1, 3]));
    assert!(nullhyp(&["unchart", &c, "--out", &h2]).status.success());
    assert!(nullhyp(&["from-higgs", &h2, "--out", &x2]).status.success());
    assert!(nullhyp(&["check", &x2]).status.success());
    let eval = nullhyp(&["higgs-eval", &h, "--z", "0.25,-0.5", "--json"]);
    assert!(eval.status.success());
    assert_eq!(serde_json::from_slice::<Value>(&eval.stdout).unwrap()["type"], "matrix");
}

#[test]
fn fixed_points_polygons_and_bending() {
    let dir = TempDir::new().unwrap();
    let [z, cl, p, back, t] = paths(&dir, ["z", "cl", "p", "back", "t"]);
    assert!(nullhyp(&["gen", "--n", "5", "--fixed-point", "--component", "1,3", "--out", &z]).status.success());
    assert!(nullhyp(&["involution", &z, "--out", &cl]).status.success());
    assert_eq!(json(&cl)["S"], serde_json::json!([1, 3]));
    let text = nullhyp(&["involution", &z]);
    assert_eq!(String::from_utf8(text.stdout).unwrap(), "fixed, S = {1, 3}\n");
    assert!(nullhyp(&["to-polygon", &z, "--out", &p]).status.success());
    assert_eq!(json(&p)["k1"], 2);
    assert!(nullhyp(&["from-polygon", &p, "--out", &back]).status.success());
    assert!(nullhyp(&["bend", &p, "--theta", "-3.0", "--steps", "7", "--out", &t]).status.success());
    assert_eq!(json(&t)["frames"].as_array().unwrap().len(), 8);
}

#[test]
fn census_and_verify() {
    let out = nullhyp(&["census", "--n", "4"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["count"], 3);
    assert_eq!(v["components"], serde_json::json!([[1, 2], [1, 3], [1, 4]]));
    let out = nullhyp(&["census", "--n", "3"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("no fixed components"));
    let out = nullhyp(&["gen", "--n", "3", "--fixed-point"]);
    assert_eq!(out.status.code(), Some(2));

    let out = nullhyp(&["verify", "census", "--n", "4..=12"]);
    assert!(out.status.success());
    let a = nullhyp(&["verify", "higgs-roundtrip", "--n", "6", "--count", "20", "--seed", "4"]);
    let b = nullhyp(&["verify", "higgs-roundtrip", "--n", "6", "--count", "20", "--seed", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(nullhyp(&["verify", "nonsense"]).status.code(), Some(2));
}

#[test]
fn bad_inputs_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.json");
    std::fs::write(&bad, "{\"type\": \"point\", \"n\": 4, \"p\": [1]}").unwrap();
    let out = nullhyp(&["check", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("not a valid point document"));
    assert_eq!(nullhyp(&["check", &path(&dir, "missing.json")]).status.code(), Some(2));
    assert_eq!(nullhyp(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn failing_checks_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let x = path(&dir, "x.json");
    assert!(nullhyp(&["gen", "--n", "5", "--p0n", "--out", &x]).status.success());
    let out = nullhyp(&["to-polygon", &x]);
    assert_eq!(out.status.code(), Some(1));
    let unstable = path(&dir, "u.json");
    let one = [1.0, 0.0];
    let zero = [0.0, 0.0];
    let doc = serde_json::json!({
        "type": "point", "n": 4,
        "p": vec![[zero, zero]; 4],
        "q": vec![[one, zero]; 4],
    });
    std::fs::write(&unstable, doc.to_string()).unwrap();
    assert_eq!(nullhyp(&["check", &unstable]).status.code(), Some(1));
    assert_eq!(nullhyp(&["solve", &unstable]).status.code(), Some(1));
}
