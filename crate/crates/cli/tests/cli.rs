mod common;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use common::*;

fn pongcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pongcert"))
        .args(args)
        .env_remove("PONGCERT_CONFIG")
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn growth_of_sanov_and_heisenberg() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_generators(dir.path(), "sanov.json", &sanov());
    let csv = dir.path().join("sizes.csv");
    let o = pongcert(&["growth", s(&g), "--radius", "5", "--csv", s(&csv)]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let counts: Vec<u64> = v["ball_sizes"].as_array().unwrap().iter().map(|b| b["count"].as_u64().unwrap()).collect();
    assert_eq!(counts, vec![1, 5, 17, 53, 161, 485]);
    assert_eq!(v["verdict"], "exponential-evidence");
    let table = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().next(), Some("n,count"));
    assert_eq!(table.lines().count(), 7);

    let h = write_generators(dir.path(), "heis.json", &heisenberg());
    let v = json(&pongcert(&["growth", s(&h), "--radius", "10"]));
    assert_eq!(v["verdict"], "polynomial-evidence");
    assert_eq!(v["poly_fit_degree"], 4);
}

#[test]
fn growth_budget_keeps_partial_table() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_generators(dir.path(), "sanov.json", &sanov());
    let csv = dir.path().join("sizes.csv");
    let o = pongcert(&["growth", s(&g), "--radius", "10", "--element-budget", "100", "--csv", s(&csv)]);
    assert_eq!(o.status.code(), Some(3));
    let table = std::fs::read_to_string(&csv).unwrap();
    let counts: Vec<u64> = table.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(!counts.is_empty() && counts.len() < 11);
    assert!(counts.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn oracle_budget_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_generators(dir.path(), "sanov.json", &sanov());
    let o = pongcert(&["certify", s(&g), "--oracle-budget", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["stage"], "freeness_oracle");
}

#[test]
fn identity_has_constant_balls() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_generators(dir.path(), "id.json", &[pongcert_core::exactnum::Matrix::identity(2)]);
    let v = json(&pongcert(&["growth", s(&g), "--radius", "6"]));
    assert!(v["ball_sizes"].as_array().unwrap().iter().all(|b| b["count"] == 1));
    assert_eq!(v["verdict"], "polynomial-evidence");
}

#[test]
fn certify_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_generators(dir.path(), "sanov.json", &sanov());
    let cert = dir.path().join("cert.json");
    let trace = dir.path().join("trace.jsonl");
    let o = pongcert(&["certify", s(&g), "--out", s(&cert), "--trace", s(&trace)]);
    assert_eq!(o.status.code(), Some(0));
    let printed = json(&o);
    let stored: Value = serde_json::from_slice(&std::fs::read(&cert).unwrap()).unwrap();
    assert_eq!(printed, stored);
    assert_eq!(stored["len_ab"], 3);
    assert_eq!(stored["len_a2b"], 5);
    let steps: Vec<String> = std::fs::read_to_string(&trace)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["step"].as_str().unwrap().to_owned())
        .collect();
    assert_eq!(
        steps,
        ["find_regular_pair", "balance_or_trace", "select_place_and_wedge", "ensure_l2", "derive_exponent", "certificate"]
    );

    let o = pongcert(&["verify", s(&cert), s(&g)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["valid"], true);

    // same certificate, different generators
    let other = write_generators(dir.path(), "heis.json", &heisenberg());
    let o = pongcert(&["verify", s(&cert), s(&other)]);
    assert_eq!(o.status.code(), Some(5));
    assert_eq!(json(&o)["valid"], false);
}

#[test]
fn certify_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(77);
    let g = write_generators(dir.path(), "pair.json", &hyperbolic_pair(true, &mut r));
    let one = pongcert(&["certify", s(&g)]);
    let two = pongcert(&["certify", s(&g)]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn heisenberg_certify_fails_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_generators(dir.path(), "heis.json", &heisenberg());
    let o = pongcert(&["certify", s(&g)]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(json(&o)["stage"], "find_regular_pair");
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(pongcert(&["growth", s(&bad)]).status.code(), Some(2));

    // determinant 2
    std::fs::write(&bad, r#"{"n": 2, "generators": [[["2", "0"], ["0", "1"]]]}"#).unwrap();
    assert_eq!(pongcert(&["certify", s(&bad)]).status.code(), Some(2));

    // ragged rows
    std::fs::write(&bad, r#"{"n": 2, "generators": [[["1", "0"], ["1"]]]}"#).unwrap();
    assert_eq!(pongcert(&["growth", s(&bad)]).status.code(), Some(2));

    let g = write_generators(dir.path(), "sanov.json", &sanov());
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "oracle_depth = 0\n").unwrap();
    assert_eq!(pongcert(&["--config", s(&cfg), "growth", s(&g)]).status.code(), Some(2));
    std::fs::write(&cfg, "no_such_key = 1\n").unwrap();
    assert_eq!(pongcert(&["--config", s(&cfg), "growth", s(&g)]).status.code(), Some(2));
}

#[test]
fn config_file_sets_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_generators(dir.path(), "sanov.json", &sanov());
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "oracle_depth = 8\n").unwrap();
    let o = pongcert(&["--config", s(&cfg), "certify", s(&g)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["oracle_depth_validated"], 8);
    // flags win over the file
    let o = pongcert(&["--config", s(&cfg), "certify", s(&g), "--oracle-depth", "10"]);
    assert_eq!(json(&o)["oracle_depth_validated"], 10);
}

#[test]
fn spectrum_and_find_pair() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_generators(dir.path(), "sanov.json", &sanov());
    let o = pongcert(&["spectrum", s(&g), "--word", "+0 +1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["matrix"][0][0], "5/1");
    let o = pongcert(&["find-pair", s(&g)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["word_a"].is_string());
}
