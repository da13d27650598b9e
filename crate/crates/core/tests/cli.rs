//! End-to-end runs of the `bellchain` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bellchain(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellchain"))
        .args(args)
        .env("BELLCHAIN_OUT_DIR", out_dir)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn empty_grid_is_a_usage_error_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["bounds", "--fix-f", "0.75", "--p-steps", "0"][..],
        &["bounds", "--fix-p", "0", "--f-min", "0.9", "--f-max", "0.6"][..],
        &["bounds", "--fix-p", "0", "--f-steps", "0"][..],
        &["qkd", "--n-min", "6", "--n-max", "3"][..],
    ] {
        let out = bellchain(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn bounds_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["bounds", "--fix-f", "0.8", "--p-steps", "3", "--grid-points", "20", "--seed", "7"];
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--output", path.to_str().unwrap()]);
        assert!(bellchain(&full, dir.path()).status.success());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), bellchain::bounds::BoundSweepRow::CSV_HEADER);
    assert_eq!(lines.count(), 3);
}

#[test]
fn qkd_csv_defaults_to_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    assert!(bellchain(&["qkd"], dir.path()).status.success());
    let first = std::fs::read(dir.path().join("qkd.csv")).unwrap();
    assert!(bellchain(&["qkd"], dir.path()).status.success());
    assert_eq!(first, std::fs::read(dir.path().join("qkd.csv")).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("n,skf_postselected,skf_bd,skf_werner\n2,"));
    assert_eq!(text.lines().count(), 14);
}

#[test]
fn theta_swap_report() {
    let dir = tempfile::tempdir().unwrap();
    let theta = format!(r#"{{"kind":"theta","theta":{}}}"#, std::f64::consts::PI / 6.0);
    let out = bellchain(&["swap", "--state1", &theta], dir.path());
    assert!(out.status.success());
    let v = json_of(&out);
    let mut odd = 0.0;
    for o in v["outcomes"].as_array().unwrap() {
        let label = o["label"].as_str().unwrap();
        if label == "X" || label == "XZ" {
            odd += o["probability"].as_f64().unwrap();
            assert!((o["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-12);
        }
    }
    assert!((odd - 0.375).abs() < 1e-12);
    assert_eq!(v["passed"], Value::Bool(true));
}

#[test]
fn chain_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = bellchain(&["chain", "--link", r#"{"kind":"bd","lambda":[0.9,0.1,0,0]}"#, "--n", "3"], dir.path());
    assert!(out.status.success());
    let v = json_of(&out);
    assert!((v["average"]["fidelity"].as_f64().unwrap() - 0.756).abs() < 1e-12);

    let perfect = r#"{"kind":"bd","lambda":[1,0,0,0]}"#;
    let out = bellchain(
        &["chain", "--link", perfect, "--link", perfect, "--link", perfect, "--protocol", "sequential"],
        dir.path(),
    );
    let v = json_of(&out);
    for o in v["outcomes"].as_array().unwrap() {
        assert_eq!(o["fidelity"].as_f64().unwrap(), 1.0);
    }
    assert_eq!(v["passed"], Value::Bool(true));
}

#[test]
fn invalid_protocol_is_echoed() {
    let dir = tempfile::tempdir().unwrap();
    // nobody corrects: the residual is the product of the outcomes
    let protocol = r#"{"n_links":3,"bsm_order":[1,2],"rules":[{},{},{},{}]}"#;
    let out =
        bellchain(&["chain", "--link", r#"{"kind":"werner","F":0.9}"#, "--n", "3", "--protocol", protocol], dir.path());
    assert!(!out.status.success());
    let v = json_of(&out);
    assert_eq!(v["validation"]["correct"], Value::Bool(false));
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("selftest.json");
    let out = bellchain(&["selftest", "--json", report.to_str().unwrap()], dir.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}");
    assert!(stdout.contains("PASS chain_equivalence"));
    assert!(stdout.contains("PASS symmetrized_vs_unsymmetrized"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 14);
}

#[test]
fn qkd_csv_matches_goldens() {
    let dir = tempfile::tempdir().unwrap();
    let golden = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden");
    for (link, name) in [(None, "qkd_opt.csv"), (Some(r#"{"kind":"r_state","p":0.95}"#), "qkd_r_state.csv")] {
        let path = dir.path().join(name);
        let mut args = vec!["qkd", "-o", path.to_str().unwrap()];
        if let Some(l) = link {
            args.extend(["--link", l]);
        }
        assert!(bellchain(&args, dir.path()).status.success());
        let got = std::fs::read_to_string(&path).unwrap();
        let want = std::fs::read_to_string(format!("{golden}/{name}")).unwrap();
        for (g, w) in got.lines().zip(want.lines()).skip(1) {
            let g: Vec<f64> = g.split(',').map(|x| x.parse().unwrap()).collect();
            let w: Vec<f64> = w.split(',').map(|x| x.parse().unwrap()).collect();
            for (a, b) in g.iter().zip(&w) {
                assert!((a - b).abs() < 1e-10, "{name}: {a} vs {b}");
            }
        }
        assert_eq!(got.lines().count(), want.lines().count());
    }
}
