use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn hcwork(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcwork")).args(args).env("WORKBENCH_THREADS", "2").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn ideal_table_l2() {
    let out = hcwork(&["ideal-table", "l(2)"]);
    assert_eq!(out.status.code(), Some(0));
    let first = &json(&out)["checks"][0]["detail"]["first_nonzero"];
    assert_eq!(first["degree"], 2);
    assert_eq!(first["value"], "ℂ⊕𝒱");
}

#[test]
fn hc_check_q2() {
    let out = hcwork(&["hc-check", "--n", "2", "--base", "q2", "--maxdeg", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let lhs: Vec<u64> =
        r["checks"][0]["detail"].as_object().unwrap().values().map(|v| v["lhs"].as_u64().unwrap()).collect();
    assert_eq!(lhs, vec![1, 0, 1, 0]);
}

#[test]
fn input_errors_exit_2() {
    let bad = scratch("bad.json");
    fs::write(&bad, "{not json").unwrap();
    let out = hcwork(&["homology", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("input"));
    assert_eq!(hcwork(&["suite", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(hcwork(&["ideal-table", "l(-1)"]).status.code(), Some(2));
    let out = hcwork(&["hc-check", "--n", "3", "--base", "q2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("base"));
}

#[test]
fn bad_thread_count_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_hcwork"))
        .args(["ideal-table", "c0"])
        .env("WORKBENCH_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    let a = hcwork(&["cgg-check", "--base", "x3", "--maxdeg", "2"]);
    let b = hcwork(&["cgg-check", "--base", "x3", "--maxdeg", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = hcwork(&["cgg-check", "--base", "x3", "--maxdeg", "2", "--format", "csv"]);
    assert!(String::from_utf8_lossy(&c.stdout).starts_with("path,value\n"));
}

#[test]
fn witness_verbs() {
    let input = scratch("seqs.json");
    fs::write(&input, r#"[["1", "0", "3"], ["0", "2", "1"]]"#).unwrap();
    let out = hcwork(&["witness", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["checks"][0]["detail"]["mu"], serde_json::json!(["1", "2", "3"]));
    let out = hcwork(&["witness", "--input", input.to_str().unwrap(), "--kind", "tfp"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hcwork(&["witness", "--input", input.to_str().unwrap(), "--kind", "tfp", "--certified"]);
    assert_eq!(out.status.code(), Some(0));
}

fn suite_failures(out: &Output) -> Vec<String> {
    json(out)["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn suite_and_perturbed_golden() {
    let out = hcwork(&["suite"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(suite_failures(&out), vec!["8. quillen spectral sequence"]);

    let mut golden = serde_json::to_value(hcwork::suite::Golden::default()).unwrap();
    golden["hc_crossed_q2"][2] = 2.into();
    let path = scratch("golden.json");
    fs::write(&path, golden.to_string()).unwrap();
    let out = hcwork(&["suite", "--input", path.to_str().unwrap()]);
    assert_eq!(suite_failures(&out), vec!["5. crossed-product cyclic homology", "8. quillen spectral sequence"]);
}

#[test]
fn output_file_matches_stdout() {
    let path = scratch("table.json");
    let out = hcwork(&["ideal-table", "l(3/2)", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read(&path).unwrap(), hcwork(&["ideal-table", "l(3/2)"]).stdout);
}
