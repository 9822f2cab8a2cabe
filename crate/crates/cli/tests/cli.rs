use std::process::{Command, Output};

use serde_json::Value;

fn subhardy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subhardy")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn real(v: &Value) -> f64 {
    v.as_str().expect("reals are strings").parse().unwrap()
}

#[test]
fn catalog_list_names_every_entry() {
    let out = subhardy(&["catalog", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in subhardy::catalog::NAMES {
        assert!(text.contains(name), "{name} missing");
    }
}

#[test]
fn catalog_show_prints_weights() {
    let out = subhardy(&["catalog", "show", "paper-n3", "--dim", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let first = format!("{:.16e}", 3f64.powf(1.0 / 3.0));
    assert!(text.contains(&format!("beta = ({first}, ")), "{text}");
}

#[test]
fn unknown_entry_is_an_input_error() {
    let out = subhardy(&["catalog", "show", "unknown"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("unknown"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(subhardy(&["analyze"]).status.code(), Some(1));
    assert_eq!(subhardy(&["analyze", "--space", "classical-h2", "--dim", "nope"]).status.code(), Some(1));
    assert_eq!(subhardy(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(subhardy(&["--help"]).status.code(), Some(0));
}

#[test]
fn budget_violation_is_an_input_error() {
    let out = subhardy(&["analyze", "--space", "classical-h2", "--dim", "6", "--nmax", "8"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn breaker_exits_two_and_skips_structure() {
    let out = subhardy(&["analyze", "--space", "cond2-breaker", "--dim", "12"]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["hypotheses"]["cond_ii"]["holds"], false);
    assert!(r["hypotheses"]["cond_ii"]["witness"]["f"].is_array());
    assert_eq!(r["structure"]["status"], "skipped");
    assert_eq!(r["verdict"]["exit_code"], 2);
}

#[test]
fn alternating_passes_with_informational_shimorin() {
    let out = subhardy(&["analyze", "--space", "paper-alternating", "--dim", "32", "--nmax", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let h = &r["hypotheses"];
    assert_eq!(h["cond_i"]["holds"], true);
    assert_eq!(real(&h["cond_i"]["delta_max"]), 0.5);
    assert_eq!(h["shimorin_1"]["holds"], false);
    assert_eq!(h["shimorin_2"]["holds"], false);
    assert_eq!(r["structure"]["status"], "completed");
    assert_eq!(r["structure"]["wandering_dim"], 1);

    let strict = subhardy(&["analyze", "--space", "paper-alternating", "--dim", "32", "--strict"]);
    assert_eq!(strict.status.code(), Some(2));
}

#[test]
fn classical_space_has_unit_weights() {
    let out = subhardy(&["analyze", "--space", "classical-h2", "--dim", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let weights = r["structure"]["shift_weights"].as_array().unwrap();
    assert_eq!(weights.len(), 15);
    assert!(weights.iter().all(|w| real(w) == 1.0));
}

#[test]
fn reals_carry_seventeen_digits() {
    let r = json(&subhardy(&["analyze", "--space", "paper-n3", "--dim", "24"]));
    let s = r["hypotheses"]["cond_i"]["delta_max"].as_str().unwrap();
    let mantissa = s.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{s}");
    let expected = 5f64.powf(0.2) / 4f64.powf(0.25);
    assert!((s.parse::<f64>().unwrap() - expected).abs() < 1e-12);
}

#[test]
fn report_goes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = subhardy(&["analyze", "--space", "classical-h2", "--dim", "12", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["source"], "classical-h2");
}

#[test]
fn input_files() {
    let dir = tempfile::tempdir().unwrap();
    let diag = dir.path().join("diag.json");
    let beta: Vec<String> = (0..16).map(|n| format!("{}", 0.5f64.powi(n / 2))).collect();
    std::fs::write(&diag, serde_json::json!({"kind": "diagonal", "beta": beta}).to_string()).unwrap();
    let r = subhardy(&["analyze", "--input", diag.to_str().unwrap(), "--nmax", "4"]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(real(&json(&r)["hypotheses"]["cond_i"]["delta_max"]), 0.5);

    // span{z, z^2, z^3} in a window of 4 with the H² metric
    let gram = dir.path().join("gram.json");
    let c = |x: &str| serde_json::json!([x, "0"]);
    let basis: Vec<Vec<Value>> = (1..4)
        .map(|k| (0..4).map(|i| c(if i == k { "1" } else { "0" })).collect())
        .collect();
    let g: Vec<Vec<Value>> = (0..3).map(|i| (0..3).map(|j| c(if i == j { "1" } else { "0" })).collect()).collect();
    let text = serde_json::json!({"kind": "gram", "ambient_dim": 4, "basis": basis, "gram": g}).to_string();
    std::fs::write(&gram, text).unwrap();
    let r = subhardy(&["analyze", "--input", gram.to_str().unwrap(), "--nmax", "1"]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let r = json(&r);
    assert_eq!(r["structure"]["vanishing_order"], 1);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"kind": "diagonal", "beta": ["1", "x"]}"#).unwrap();
    assert_eq!(subhardy(&["analyze", "--input", bad.to_str().unwrap()]).status.code(), Some(1));
    std::fs::write(&bad, r#"{"kind": "diagonal", "beta": ["1", "-2", "1"]}"#).unwrap();
    assert_eq!(subhardy(&["analyze", "--input", bad.to_str().unwrap(), "--nmax", "1"]).status.code(), Some(1));
    let missing = dir.path().join("missing.json");
    assert_eq!(subhardy(&["analyze", "--input", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn verify_single_entry_and_json() {
    let out = subhardy(&["verify", "--entry", "paper-alternating"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("paper-alternating") && !text.contains("paper-n3"));

    let out = subhardy(&["verify", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["passed"], true);
    let names: Vec<&str> = r["entries"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(names.len(), subhardy::catalog::NAMES.len());

    assert_eq!(subhardy(&["verify", "--entry", "nope"]).status.code(), Some(1));
}
