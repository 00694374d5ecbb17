//! End-to-end tests against the built binary and the shipped fixtures.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.to_str().unwrap().into()
}

fn satlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_saturated_example() {
    let out = satlab(&["analyze", &fixture("sign_flip.json")]);
    let v = json_of(&out);
    assert_eq!(v["saturated"], true);
    assert_eq!(v["consistent"], true);
    assert_eq!(v["index"]["scalar"], 2.0);
    assert_eq!(v["group_order"], 2);
}

#[test]
fn analyze_text_format() {
    let out = satlab(&["analyze", &fixture("sign_flip.json"), "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.trim(), "saturated: true, index: 2.0, |G|: 2");
}

#[test]
fn analyze_unsaturated_rotation() {
    let out = satlab(&["analyze", &fixture("rotation_z3.json"), "--format", "text"]);
    assert!(out.status.success(), "verdicts must not affect the exit code");
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.trim(), "saturated: false, index: 2.0, |G|: 3");
}

#[test]
fn analyze_malformed_input() {
    let out = satlab(&["analyze", &fixture("malformed.json")]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn analyze_reports_are_deterministic() {
    let a = satlab(&["analyze", &fixture("sign_flip.json"), "--seed", "7"]);
    let b = satlab(&["analyze", &fixture("sign_flip.json"), "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn strata_mixed_action() {
    let out = satlab(&["strata", &fixture("mixed_z2_space.json")]);
    let v = json_of(&out);
    assert_eq!(v["free"], false);
    assert_eq!(v["saturated"], false);
    assert_eq!(v["index_values"], serde_json::json!([2.0, 2.0, 1.0, 1.0]));
}

#[test]
fn strata_free_action() {
    let out = satlab(&["strata", &fixture("free_z3_space.json"), "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("free: true, saturated: true"), "got: {text}");
}

#[test]
fn strata_capacity_bound_is_named() {
    let out = satlab(&["strata", &fixture("s4_space.json")]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("capacity") && err.contains("16"), "got: {err}");
}

#[test]
fn hopf_axiom_battery() {
    let out = satlab(&["hopf", &fixture("hopf_z3_group.json")]);
    let v = json_of(&out);
    assert_eq!(v["axioms_pass"], true);
    assert_eq!(v["dim"], 3);
    assert_eq!(v["tau_e"], 0.3333333333);
}

#[test]
fn hopf_smash_criterion_on_action_file() {
    let out = satlab(&["hopf", &fixture("sign_flip.json")]);
    let v = json_of(&out);
    assert_eq!(v["saturated"], true);
    assert_eq!(v["span_full"], true);
    assert_eq!(v["index"]["scalar"], 2.0);
}

#[test]
fn graph_witness_single_target() {
    let out = satlab(&[
        "graph-witness",
        &fixture("two_loop.json"),
        "--vertex",
        "v",
        "--n",
        "1",
    ]);
    let v = json_of(&out);
    assert_eq!(v["verified"], true);
    assert_eq!(v["adjoint_route"], false);
    assert_eq!(v["a"], "s[(v)]s[e]*");
    assert_eq!(v["b"], "s[e]s[(v)]*");
}

#[test]
fn graph_witness_batch_sweep() {
    let out = satlab(&["graph-witness", &fixture("two_loop.json"), "--batch", "3"]);
    let v = json_of(&out);
    assert_eq!(v["all_verified"], true);
    assert!(v["cases"].as_u64().unwrap() > 1000);
    assert!(v["adjoint"].as_u64().unwrap() > 0);
    assert!(v["extend"].as_u64().unwrap() > 0);
}

#[test]
fn graph_witness_rejects_sinks() {
    let out = satlab(&["graph-witness", &fixture("sink.json"), "--batch", "1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no sinks"));
}
