//! End-to-end CLI tests: exit-code contract, JSON shape, determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polya-lab"))
        .args(args)
        .env_remove("POLYA_LAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).to_string()
}

#[test]
fn field_report_json() {
    let o = run(&["field", "--poly", "23,0,1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["field_disc"], "-23");
    assert_eq!(v["result"]["signature"][1], 1);
    assert_eq!(v["seed"], 0);
}

#[test]
fn quad_command() {
    let o = run(&["quad", "-d", "-15"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["po_order"], 2);
    assert_eq!(v["result"]["is_polya"], false);
    // real field carries its fundamental unit
    let o = run(&["quad", "-d", "34"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["fundamental_unit"]["x"], "35");
    assert_eq!(v["result"]["fundamental_unit"]["y"], "6");
}

#[test]
fn polya_pure_cubic() {
    let o = run(&["polya", "--poly", "-19,0,0,1", "--bound", "120"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["order"], "3");
    assert_eq!(v["result"]["stabilized"], true);
}

#[test]
fn certify_exit_codes() {
    // decided: exit 0
    let o = run(&["certify", "--brumer", "5", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["verdict"], "POLYA");
    assert_eq!(v["result"]["d_E"], -1367);
    let o = run(&["certify", "--lavallee", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["verdict"], "NOT_POLYA");
    // undecided: exit 2 (h(K) = 5 = l blocks the tree at s = 4)
    let o = run(&["certify", "--lavallee", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["verdict"], "UNDECIDED");
    assert_eq!(v["result"]["h_K"], "5");
}

#[test]
fn parse_errors_exit_one() {
    let o = run(&["polya", "--poly", ""]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["field", "--poly", "1,banana,3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    // reducible polynomial is a domain error, also exit 1
    let o = run(&["field", "--poly", "-1,0,1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn brumer_degenerate_flagged() {
    let o = run(&["brumer", "0", "0"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["degenerate"], true);
    assert_eq!(v["result"]["radicand"], "0");
}

#[test]
fn sweep_determinism_and_jobs() {
    let a = run(&["sweep", "--from", "-3", "--to", "3", "--seed", "7"]);
    let b = run(&["sweep", "--from", "-3", "--to", "3", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b), "same seed must give identical bytes");
    // parallel run merges in input order: identical output
    let c = run(&["sweep", "--from", "-3", "--to", "3", "--seed", "7", "--jobs", "3"]);
    assert_eq!(stdout(&a), stdout(&c), "jobs must not affect output");
}

#[test]
fn sweep_expectation_files() {
    let dir = std::env::temp_dir().join("polya_lab_expect_test");
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.txt");
    std::fs::write(&good, "[polya]\n0\n1\n[notpolya]\n-3\n").unwrap();
    let o = run(&["sweep", "--from", "-3", "--to", "1", "--expect", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "[polya]\n-3\n").unwrap();
    let o = run(&["sweep", "--from", "-3", "--to", "1", "--expect", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("mismatch"));
}

#[test]
fn relative_identity() {
    // Po(L/L) = Cl(L) for Q(sqrt -23)
    let o = run(&[
        "relative",
        "--top",
        "23,0,1",
        "--sub",
        "23,0,1",
        "--image",
        "0,1",
        "--galois",
        "--bound",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["order"], "3");
    // a wrong embedding is rejected
    let o = run(&[
        "relative",
        "--top",
        "23,0,1",
        "--sub",
        "2,0,1",
        "--image",
        "0,1",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn seed_env_fallback() {
    let o = Command::new(env!("CARGO_BIN_EXE_polya-lab"))
        .args(["quad", "-d", "-7"])
        .env("POLYA_LAB_SEED", "42")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 42);
}

#[test]
fn text_format() {
    let o = run(&["quad", "-d", "-15", "--format", "text"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("#Po = 2"), "text output: {s}");
}
