mod common;

use std::process::{Command, Output};

use common::code_path;
use serde_json::Value;

fn cws(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cws")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(name: &str) -> String {
    code_path(name).to_string_lossy().into_owned()
}

#[test]
fn verify_five_qubit_code() {
    let o = cws(&["verify", "--code", &code("five_cycle.cws")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next().unwrap(), "n=5 K=2 d=3 t=1 valid");
}

#[test]
fn verify_reports_distance_one_for_unentangled_state() {
    let o = cws(&["verify", "--code", &code("trivial3.cws"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["d"], 1);
    assert_eq!(v["oracle_distance"], 1);
}

#[test]
fn verify_flags_wrong_declared_distance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wrong.cws");
    std::fs::write(
        &path,
        "n=5 K=2 d=4\nedges:\n1 2\n2 3\n3 4\n4 5\n5 1\ncodewords:\n00000\n11111\n",
    )
    .unwrap();
    let o = cws(&["verify", "--code", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("invalid"));
}

#[test]
fn asymmetric_duplicate_edge_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cws");
    std::fs::write(&path, "n=3 K=1\nedges:\n1 2\n2 1\ncodewords:\n000\n").unwrap();
    let o = cws(&["verify", "--code", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
}

#[test]
fn oversized_code_hits_size_cap() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.cws");
    let edges: String = (1..13).map(|i| format!("{} {}\n", i, i + 1)).collect();
    std::fs::write(
        &path,
        format!("n=13 K=1 d=1\nedges:\n{edges}codewords:\n{}\n", "0".repeat(13)),
    )
    .unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(cws(&["verify", "--code", p]).status.code(), Some(3));
    assert_eq!(
        cws(&["decode", "--code", p, "--t", "1", "--error", "X1"]).status.code(),
        Some(3)
    );
    let off = cws(&["decode", "--code", p, "--t", "1", "--error", "X1", "--oracle", "off"]);
    assert_eq!(off.status.code(), Some(0));
}

#[test]
fn decode_both_strategies_agree() {
    let o = cws(&[
        "decode",
        "--code",
        &code("five_cycle.cws"),
        "--error",
        "X2",
        "--strategy",
        "both",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["classes_agree"], true);
    assert!(v["results"]["clustered"]["measurements_used"].as_u64().unwrap() <= 6);
    assert!(v["results"]["exhaustive"]["measurements_used"].as_u64().unwrap() <= 16);
    assert_eq!(v["cws_gate_bound"], 128);
    assert!(v["results"]["clustered"]["gate_total"].is_u64());
}

#[test]
fn identity_error_costs_nothing_to_recover() {
    let o = cws(&[
        "decode",
        "--code",
        &code("five_cycle.cws"),
        "--error",
        "I",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = &v["results"]["clustered"];
    assert_eq!(r["identified_class"], "00000");
    assert_eq!(r["recovery"], "I");
}

#[test]
fn hundred_random_trials_all_recover() {
    let o = cws(&[
        "decode",
        "--code",
        &code("five_cycle.cws"),
        "--seed",
        "42",
        "--trials",
        "100",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["summary"]["trials"], 100);
    assert_eq!(v["summary"]["fidelity_ok"], 100);
}

#[test]
fn decode_output_is_deterministic() {
    let args = [
        "decode",
        "--code",
        &code("six_qubit.cws"),
        "--seed",
        "3",
        "--trials",
        "10",
        "--strategy",
        "both",
        "--format",
        "json",
    ];
    assert_eq!(stdout(&cws(&args)), stdout(&cws(&args)));
}

#[test]
fn decode_requires_error_or_seed() {
    assert_eq!(
        cws(&["decode", "--code", &code("five_cycle.cws")]).status.code(),
        Some(2)
    );
    assert_eq!(
        cws(&["decode", "--code", &code("trivial3.cws"), "--error", "X1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cws(&["decode", "--code", &code("five_cycle.cws"), "--error", "X9"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn weight_two_error_fails_decoding() {
    let o = cws(&["decode", "--code", &code("five_cycle.cws"), "--error", "X1 X2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn counts_examples() {
    let o = cws(&["counts", "--n", "5", "--t", "1", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["sphere_count"], 16);
    assert_eq!(v[0]["clustered_count"], 6);
    assert_eq!(v[0]["meets_bound"], true);

    let o = cws(&["counts", "--n", "9", "--t", "2", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["sphere_count"], 352);
    assert_eq!(v[0]["clustered_count"], 39);
    assert_eq!(v[0]["meets_bound"], true);

    let o = cws(&["counts", "--n", "7", "--t", "0", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["clustered_count"], 0);
    assert!(v[0]["note"].is_string());
}

#[test]
fn benchmark_full_sweep_worst_cases() {
    let o = cws(&["benchmark", "--code", &code("five_cycle.cws")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "code,n,K,t,error,strat,measurements,two_qubit_gates,class,fidelity_ok"
    );
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    assert_eq!(rows.len(), 30);
    let worst = |s: &str| {
        rows.iter()
            .filter(|r| r[5] == s)
            .map(|r| r[6].parse::<usize>().unwrap())
            .max()
            .unwrap()
    };
    assert_eq!(worst("clustered"), 6);
    assert_eq!(worst("exhaustive"), 16);
    assert!(rows.iter().all(|r| r[9] == "true"));
}

#[test]
fn benchmark_zero_weight_is_header_only() {
    let o = cws(&["benchmark", "--code", &code("five_cycle.cws"), "--t", "0"]);
    assert_eq!(
        stdout(&o),
        "code,n,K,t,error,strat,measurements,two_qubit_gates,class,fidelity_ok\n"
    );
}

#[test]
fn benchmark_random_codes_recover() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.json");
    let o = cws(&[
        "benchmark",
        "--random",
        "2",
        "--n",
        "6",
        "--seed",
        "4",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2 * 18 * 2);
    assert!(rows.iter().all(|r| r["fidelity_ok"] == true));
}
