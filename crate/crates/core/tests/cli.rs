use std::process::Command;

use critfpp::cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["critfpp"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend_from_slice(&["--format", "json"]);
    let (code, out, err) = call(&a);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn classify_lists_the_dimension_conclusions() {
    let v = json(&["classify", "--f0", "0.5", "--ak", "constant:1"]);
    let tags: Vec<&str> = v["details"]["conclusions"].as_array().unwrap().iter().map(|c| c["tag"].as_str().unwrap()).collect();
    assert!(tags.contains(&"hausdorff-dimension"));
    assert!(tags.contains(&"minkowski-matches-hausdorff"));
    assert_eq!(v["operation"], "classify");
    assert_eq!(v["status"], "ok");
}

#[test]
fn one_arm_to_radius_one() {
    let v = json(&["arm", "--spec", "open1", "--m", "0", "--n", "1", "--p", "0.5", "--samples", "100000"]);
    let est = v["estimate"].as_f64().unwrap();
    let se = v["stderr"].as_f64().unwrap();
    assert!((est - 63.0 / 64.0).abs() <= 4.0 * se, "{est} +- {se}");
    assert_eq!(v["n_samples"], 100000);
}

#[test]
fn dimension_pipeline() {
    let (code, out, _) = call(&["dyn-dim", "--dist", "bernoulli", "--n", "5", "--x", "0", "--s", "1", "--eps", "2^-3..2^-9"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "eps,count,ratio");
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[1].split(',').next().unwrap(), "0.125");
    let v = json(&["dyn-dim", "--dist", "bernoulli", "--n", "5", "--x", "0", "--s", "1", "--eps", "2^-3..2^-9"]);
    match v["status"].as_str().unwrap() {
        "ok" => assert!(v["estimate"].as_f64().unwrap() >= -1e-9),
        "empty-set" => assert!(v["estimate"].is_null()),
        other => panic!("status {other}"),
    }
}

#[test]
fn resolved_config_reproduces_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    let config = dir.path().join("run.toml");
    std::fs::write(&config, "command = \"crossing\"\nn = 12\nps = \"0.45,0.5,0.55\"\nsamples = 500\nseed = 9\n").unwrap();
    let (code, _, err) = call(&["--config", config.to_str().unwrap(), "--out", first.to_str().unwrap(), "--samples", "400"]);
    assert_eq!(code, 0, "{err}");
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(first.join("crossing.json")).unwrap()).unwrap();
    assert_eq!(summary["config"]["samples"], 400);
    assert_eq!(summary["config"]["rect"], "parallelogram");
    assert_eq!(summary["seed"], 9);

    let summary_path = first.join("crossing.json");
    let (code, _, err) = call(&["--config", summary_path.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let a = std::fs::read(first.join("crossing.csv")).unwrap();
    let b = std::fs::read(second.join("crossing.csv")).unwrap();
    assert_eq!(a, b);
    assert!(String::from_utf8(a).unwrap().starts_with("p,estimate,stderr,n_samples\n0.45,"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "command = \"arm\"\nwibble = 3\n").unwrap();
    let (code, _, err) = call(&["--config", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    let record: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(record["status"], "error");
    assert_eq!(record["kind"], "invalid-config");

    assert_eq!(call(&["growth", "--dist", "zhang:-1"]).0, 2);
    assert_eq!(call(&["arm", "--p", "1.5"]).0, 2);
    assert_eq!(call(&["arm", "--spec", "open7"]).0, 2);
    assert_eq!(call(&["pn", "--grid", "8..2"]).0, 2);
    assert_eq!(call(&[]).0, 2);
    let (code, _, err) = call(&["growth", "--grid", "4096"]);
    assert_eq!(code, 3);
    assert!(err.contains("budget-exceeded"));
    assert_eq!(call(&["noise-decay", "--n", "13", "--max-vertices", "100000000000"]).0, 3);
}

#[test]
fn unresolved_results_still_succeed() {
    let v = json(&["corrlen", "--p", "0.501", "--n-max", "8", "--samples", "200"]);
    assert_eq!(v["status"], "unresolved");
    assert!(v["estimate"].is_null());
}

#[test]
fn every_subcommand_runs_small() {
    let runs: [&[&str]; 16] = [
        &["classify", "--dist", "zhang:2"],
        &["crossing", "--n", "8", "--samples", "200"],
        &["corrlen", "--p", "0.7", "--n-max", "32", "--samples", "200"],
        &["pn", "--grid", "4..16", "--samples", "200"],
        &["arm", "--n", "8", "--samples", "200"],
        &["arm-exponent", "--grid", "2..16", "--samples", "300", "--max-samples", "300"],
        &["qm", "--triples", "1:4:8", "--samples", "300"],
        &["growth", "--grid", "4..16", "--samples", "20"],
        &["tail-profile", "--n", "2", "--samples", "20"],
        &["count-vn", "--n", "1", "--lhat", "1", "--samples", "5"],
        &["dyn-scan", "--n", "3", "--s", "0.5"],
        &["dyn-dim", "--n", "3", "--eps", "2^-2..2^-5"],
        &["covering-survey", "--n", "2", "--eps", "2^-2..2^-4", "--samples", "10", "--aux-samples", "50"],
        &["interval-count", "--n", "2", "--M", "8", "--samples", "10", "--aux-samples", "50"],
        &["hausdorff-cover", "--L", "2", "--k", "3", "--samples", "20", "--aux-samples", "40"],
        &["noise-decay", "--n", "3", "--t", "0,2^-4..2^-2", "--samples", "200"],
    ];
    let dir = tempfile::tempdir().unwrap();
    for args in runs {
        let mut a = args.to_vec();
        let out = dir.path().to_str().unwrap().to_string();
        a.extend_from_slice(&["--out", &out, "--threads", "1"]);
        let (code, csv, err) = call(&a);
        assert_eq!(code, 0, "{args:?}: {err}");
        assert!(csv.lines().count() >= 2, "{args:?}");
        let summary: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join(format!("{}.json", args[0]))).unwrap()).unwrap();
        assert_eq!(summary["operation"], args[0]);
        assert_eq!(summary["config"]["command"], args[0]);
    }
}

#[test]
fn binary_entry_point() {
    let out = Command::new(env!("CARGO_BIN_EXE_critfpp")).args(["arm", "--n", "2", "--samples", "100", "--seed", "3"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("spec,m,n,p,estimate,stderr,n_samples\n"));
    let out = Command::new(env!("CARGO_BIN_EXE_critfpp")).args(["crossing", "--n", "100000"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}
