use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellcopies"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (out.status.code().unwrap(), v)
}

fn check<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn verify_even_copies() {
    let (code, v) = json(&["verify", "even-copies", "--m", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
    assert_eq!(check(&v, "even_copy_candidate")["value_bits"], 2.0);
    let (code, v) = json(&["verify", "even-copies", "--m", "1", "--method", "dense"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"]["tol"], Value::Null);
    assert_eq!(check(&v, "even_copy_candidate")["tolerance"], 1e-8);
}

#[test]
fn documented_aliases_are_accepted() {
    let (code, v) = json(&["verify", "eq5", "--m", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"]["target"], "even-copies");
    let (_, v) = json(&["verify", "eq10", "--m", "1"]);
    assert_eq!(v["command"]["target"], "odd-doubled");
}

#[test]
fn verify_odd_doubled_reports_infinite_divergence() {
    let (code, v) = json(&["verify", "odd-doubled", "--m", "1"]);
    assert_eq!(code, 1);
    assert_eq!(check(&v, "odd_doubled_candidate")["value_bits"], "inf");
    assert_eq!(check(&v, "odd_doubled_candidate")["expected_bits"], 2.0);
    assert_eq!(v["report"]["support_leak"], 0.75);
}

#[test]
fn verify_er_pair() {
    let (code, v) = json(&["verify", "er-pair", "--n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(check(&v, "doubled_candidate")["value_bits"], 4.0);
    assert_eq!(run(&["verify", "er-pair", "--n", "4", "--method", "dense"]).status.code(), Some(2));
}

#[test]
fn distill_reports_yield() {
    let (code, v) = json(&["distill", "--n", "4", "--shots", "1000", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["ebits_per_shot"], 2.0);
    assert_eq!(v["report"]["success_rate"], 1.0);
    assert_eq!(v["report"]["seed"], 7);
    assert_eq!(v["report"]["transcript_sample"].as_array().unwrap().len(), 4);
}

#[test]
fn distill_is_byte_reproducible() {
    let a = run(&["distill", "--n", "3", "--shots", "200", "--seed", "5"]);
    let b = run(&["distill", "--n", "3", "--shots", "200", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["distill", "--n", "3", "--shots", "200", "--seed", "6"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn distill_csv_rows() {
    let out = run(&["distill", "--n", "3", "--shots", "10", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "shot,hidden,guess,alice_z,bob_z,alice_x,bob_x,z_parity,x_parity,correct,ebits,fidelity"
    );
    assert_eq!(lines.count(), 10);
}

#[test]
fn distill_small_n_gives_zero_yield_evidence() {
    let (code, v) = json(&["distill", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["ebits"], 0);
    assert_eq!(v["report"]["ppt"]["ppt"], true);
    let (code, v) = json(&["separability", "--n", "1"]);
    assert_eq!(code, 0);
    assert!(check(&v, "maximally_mixed")["pass"].as_bool().unwrap());
}

#[test]
fn permutations_table() {
    let out = run(&["permutations", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 25);
    assert!(text.lines().any(|l| l.starts_with("2134,SS,true")));
    assert!(text.lines().any(|l| l.starts_with("1234,,true")));
}

#[test]
fn discriminate_and_sigma_equivalence() {
    let (code, v) = json(&["discriminate", "--shots", "500", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["success_rate"], 1.0);
    let (code, v) = json(&["sigma-equiv", "--perms", "2134,3412,4321"]);
    assert_eq!(code, 0);
    assert!(v["report"]["residual"].as_f64().unwrap() <= 1e-9);
    let (code, _) = json(&["sigma-equiv", "--perms", "2134,4321", "--method", "structured"]);
    assert_eq!(code, 0);
}

#[test]
fn explore_is_non_asserting() {
    let (code, v) = json(&["explore", "er", "--n", "1", "--restarts", "2", "--budget", "2000"]);
    assert_eq!(code, 0);
    assert_eq!(v["asserting"], false);
    assert!(v["report"]["best_bits"].as_f64().unwrap() <= 0.01);
    assert_eq!(v["report"]["seed"], 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "even-copies"]).status.code(), Some(2));
    assert_eq!(run(&["distill", "--n", "0"]).status.code(), Some(2));
    assert_eq!(run(&["separability", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["sigma-equiv", "--perms", "1123"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "even-copies", "--m", "4", "--method", "dense"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("bellcopies-cli-{}.json", std::process::id()));
    let out = run(&["verify", "er-pair", "--n", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    std::fs::remove_file(path).unwrap();
}
