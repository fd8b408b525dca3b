use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn abcsat(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abcsat"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

#[test]
fn encode_then_solve_base_case() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = abcsat(d, &["encode", "-m", "4", "-n", "3", "-k", "3", "--prop", "hare", "--sp", "subset", "--weak-eff", "-o", "base.cnf"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("variables: 7084"));
    assert!(d.join("base.cnf").exists() && d.join("base.cnf.manifest.json").exists());

    let o = abcsat(d, &["solve", "base.cnf"]);
    assert_eq!(code(&o), 20);
    assert!(stdout(&o).starts_with("UNSAT"));

    let o = abcsat(d, &["--format", "json", "solve", "-m", "4", "-n", "3", "-k", "3", "--weak-eff", "--symmetry-break"]);
    assert_eq!(code(&o), 20);
    assert_eq!(json(&o)["result"]["status"], "unsatisfiable");

    let o = abcsat(d, &["solve", "base.cnf", "--conflict-limit", "1"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn solve_writes_checked_table() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = abcsat(d, &["--format", "json", "solve", "-m", "3", "-n", "3", "-k", "1", "--weak-eff", "-o", "k1.json"]);
    assert_eq!(code(&o), 10);
    let v = json(&o);
    assert_eq!(v["result"]["model_verified"], true);
    assert!(v["result"]["verdicts"].as_array().unwrap().iter().all(|x| x["passed"] == true));

    let o = abcsat(d, &["check-rule", "table:k1.json", "--axioms", "proportionality,cardinality-sp"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    // a raw CNF without manifest still solves
    std::fs::write(d.join("tiny.cnf"), "p cnf 2 2\n1 2 0\n-1 0\n").unwrap();
    let o = abcsat(d, &["--format", "json", "solve", "tiny.cnf"]);
    assert_eq!(code(&o), 10);
    assert_eq!(json(&o)["result"]["model"], serde_json::json!([-1, 2]));
    let o = abcsat(d, &["solve", "tiny.cnf", "-o", "t.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn check_rule_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = abcsat(d, &["--format", "json", "check-rule", "av", "-m", "4", "-n", "3", "-k", "3", "--axioms", "jr"]);
    assert_eq!(code(&o), 3);
    let v = json(&o);
    let verdict = &v["result"]["verdicts"][0];
    assert_eq!(verdict["passed"], false);
    assert_eq!(verdict["witness"]["kind"], "outcome");

    let o = abcsat(d, &["--format", "json", "check-rule", "pav", "-m", "4", "-n", "5", "-k", "3", "--axioms", "subset-sp"]);
    assert_eq!(code(&o), 3);
    let w = &json(&o)["result"]["verdicts"][0]["witness"];
    assert_eq!(w["kind"], "manipulation");
    assert!(w["voter"].as_u64().unwrap() >= 1);

    let o = abcsat(d, &["check-rule", "av", "-m", "4", "-n", "3", "-k", "2", "--axioms", "jr,cardinality-sp"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).matches(": pass").count(), 2);

    let o = abcsat(d, &["check-rule", "av", "-m", "4", "-n", "3", "-k", "2", "--axioms", "nonsense"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for args in [
        &["encode", "-m", "4", "-n", "3"][..],
        &["frobnicate"][..],
        &["encode", "-m", "4", "-n", "3", "-k", "5"][..],
        &["encode", "-m", "4", "-n", "3", "-k", "3", "--sp", "cardinality"][..],
        &["encode", "-m", "4", "-n", "3", "-k", "3", "--ci-order", "abca"][..],
        &["encode", "-m", "5", "-n", "9", "-k", "3", "--cap", "1000"][..],
    ] {
        let o = abcsat(d, args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?} printed partial output");
    }
    let o = abcsat(d, &["solve", "missing.cnf"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn mus_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&abcsat(d, &["encode", "-m", "4", "-n", "3", "-k", "3", "--weak-eff", "-o", "base.cnf"])), 0);
    let o = abcsat(d, &["--format", "json", "extract-mus", "base.cnf", "-o", "core.cnf", "--gcnf", "base.gcnf"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["result"]["check"]["minimal"], true);
    assert_eq!(v["result"]["check"]["unsatisfiable"], true);
    assert!(!v["result"]["core"]["profiles"].as_array().unwrap().is_empty());
    assert_eq!(code(&abcsat(d, &["solve", "core.cnf"])), 20);
    assert!(std::fs::read_to_string(d.join("base.gcnf")).unwrap().contains("p gcnf"));

    // a satisfiable formula has no core
    let o = abcsat(d, &["extract-mus", "-m", "3", "-n", "2", "-k", "2"]);
    assert_eq!(code(&o), 10);

    let o = abcsat(d, &["replay-proof"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("15/15 steps verified"));
}

#[test]
fn reduce_and_tables() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&abcsat(d, &["solve", "-m", "3", "-n", "4", "-k", "2", "--weak-eff", "-o", "t.json"])), 10);
    let o = abcsat(d, &["--format", "json", "reduce", "voters", "--q", "2", "--in", "t.json", "-o", "small.json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&o);
    let rows = v["result"]["axioms"].as_array().unwrap();
    for name in ["proportionality", "subset-sp", "weak-efficiency"] {
        let row = rows.iter().find(|r| r["axiom"] == name).unwrap();
        assert_eq!(row["input"], true);
        assert_eq!(row["output"], true);
    }
    assert_eq!(code(&abcsat(d, &["reduce", "voters", "--q", "3", "--in", "t.json"])), 4);
    assert_eq!(code(&abcsat(d, &["reduce", "voters", "--in", "t.json"])), 2);

    assert_eq!(code(&abcsat(d, &["random-table", "-m", "3", "-n", "2", "-k", "2", "--seed", "5", "-o", "r1.json"])), 0);
    assert_eq!(code(&abcsat(d, &["random-table", "-m", "3", "-n", "2", "-k", "2", "--seed", "5", "-o", "r2.json"])), 0);
    assert_eq!(std::fs::read(d.join("r1.json")).unwrap(), std::fs::read(d.join("r2.json")).unwrap());

    assert_eq!(code(&abcsat(d, &["table", "av", "-m", "4", "-n", "2", "-k", "2", "-o", "av.json"])), 0);
    assert_eq!(code(&abcsat(d, &["reduce", "alternatives", "--in", "av.json"])), 0);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for i in 0..2 {
        let o = abcsat(d, &["--report", &format!("r{i}.json"), "encode", "-m", "4", "-n", "3", "-k", "3", "--weak-eff", "--threads", "3", "-o", &format!("f{i}.cnf")]);
        assert_eq!(code(&o), 0);
        let o = abcsat(d, &["--report", &format!("m{i}.json"), "extract-mus", &format!("f{i}.cnf")]);
        assert_eq!(code(&o), 0);
    }
    let read = |f: &str| std::fs::read(d.join(f)).unwrap();
    assert_eq!(read("f0.cnf"), read("f1.cnf"));
    assert_eq!(read("m0.json"), read("m1.json"));
    let r0: Value = serde_json::from_slice(&read("r0.json")).unwrap();
    let r1: Value = serde_json::from_slice(&read("r1.json")).unwrap();
    assert_eq!(r0["result"]["clauses"], r1["result"]["clauses"]);
    assert_eq!(r0["metadata"]["threads"], 3);

    // single-threaded encoding gives the same formula
    assert_eq!(code(&abcsat(d, &["encode", "-m", "4", "-n", "3", "-k", "3", "--weak-eff", "-o", "f2.cnf"])), 0);
    assert_eq!(read("f0.cnf"), read("f2.cnf"));
}

#[test]
fn cap_from_environment_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_abcsat"))
        .current_dir(dir.path())
        .env("ABCSAT_PROFILE_CAP", "5000")
        .args(["--format", "json", "check-rule", "av", "-m", "3", "-n", "2", "-k", "2", "--axioms", "cardinality-sp"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["metadata"]["profile_cap"], 5000);
    assert_eq!(v["metadata"]["cap_env"], "ABCSAT_PROFILE_CAP=5000");
    let o = Command::new(env!("CARGO_BIN_EXE_abcsat"))
        .current_dir(dir.path())
        .env("ABCSAT_PROFILE_CAP", "5000")
        .args(["check-rule", "av", "-m", "4", "-n", "4", "-k", "2", "--axioms", "jr"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("m=4, n=4"));
}
