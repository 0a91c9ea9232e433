use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cobweave_core::cobordism::{floating_line, Diagram, Generator};
use cobweave_core::fixtures;
use cobweave_core::transducer::Transducer;
use serde_json::{json, Value};
use tempfile::TempDir;

fn write<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn cobweave(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cobweave"));
    cmd.args(args).env_remove("COBWEAVE_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn accept_reports_membership_and_exits_zero() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", &fixtures::ab_star());
    for (word, accepted) in [("ABAB", true), ("ABA", false), ("", true)] {
        let out = cobweave(&["accept", s(&m), "--word", word], &[]);
        assert_eq!(out.status.code(), Some(0), "{word}");
        assert_eq!(records(&out)[0]["accepted"], json!(accepted), "{word}");
    }
}

#[test]
fn foreign_symbols_are_input_errors() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", &fixtures::ab_star());
    let out = cobweave(&["accept", s(&m), "--word", "ABZ"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_of_a_floating_line_is_membership() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", &fixtures::ab_star());
    for (word, bit) in [("ABAB", 1), ("BA", 0)] {
        let d = write(dir.path(), "d.json", &floating_line(word.into()).to_term());
        let out = cobweave(&["eval", s(&m), s(&d)], &[]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(records(&out)[0]["matrix"], json!([[bit]]), "{word}");
    }
}

#[test]
fn mistyped_diagrams_exit_two() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", &fixtures::ab_star());
    let cup = Diagram::<cobweave_core::automata::Word>::gen(Generator::Cup).to_term();
    let cup = serde_json::to_value(&cup).unwrap();
    let d = write(dir.path(), "d.json", &json!({ "op": "compose", "args": [cup, cup] }));
    let out = cobweave(&["eval", s(&m), s(&d)], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_json_names_the_path() {
    let dir = TempDir::new().unwrap();
    let mut m = serde_json::to_value(fixtures::ab_star()).unwrap();
    m["initial"] = json!(17);
    let m = write(dir.path(), "m.json", &m);
    let out = cobweave(&["accept", s(&m), "--word", "AB"], &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("$.initial"), "{err}");
}

#[test]
fn exhausted_budget_exits_three() {
    let dir = TempDir::new().unwrap();
    let even = fixtures::even_a();
    let t = write(dir.path(), "t.json", &Transducer::identity(even.alphabet()));
    let m = write(dir.path(), "m.json", &even);
    let ok = cobweave(&["apply", s(&t), s(&m)], &[]);
    assert_eq!(ok.status.code(), Some(0));
    let out = cobweave(&["apply", s(&t), s(&m)], &[("COBWEAVE_BUDGET", "configs=16")]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn apply_lists_the_image_language() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", &fixtures::ab_star());
    let t = write(dir.path(), "t.json", &fixtures::c_to_ab());
    let out = cobweave(&["--bound", "3", "apply", s(&t), s(&m)], &[]);
    assert_eq!(records(&out)[0]["language"], json!(["", "x", "xx", "xxx"]));
}

#[test]
fn natural_transducers_pass_their_squares() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", &fixtures::ab_star());
    let t = write(dir.path(), "t.json", &fixtures::rename_ab());
    let out = cobweave(&["check-naturality", s(&t), s(&m), "--spans"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!records(&out).is_empty());
}

#[test]
fn subregular_analyze_reports_locality() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", &fixtures::ab_star());
    let out = cobweave(&["subregular", "analyze", s(&m), "--k", "2"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = &records(&out)[0];
    assert_eq!(r["sl"], json!(true));
    assert!(r.get("factors").is_some() && r.get("nilpotent_pairs").is_some());
}

#[test]
fn suite_criterion_runs_and_writes_to_out() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.jsonl");
    let out = cobweave(&["--out", s(&report), "suite", "--seed", "7", "--criterion", "5"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&report).unwrap();
    let r: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(r["criterion"], json!(5));
    assert_eq!(r["passed"], json!(true));
}

#[test]
fn unknown_criteria_are_usage_errors() {
    let out = cobweave(&["suite", "--criterion", "12"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "g.json", &fixtures::dyck_grammar());
    let a = cobweave(&["--bound", "6", "grammar", "language", s(&g)], &[]);
    let b = cobweave(&["--bound", "6", "grammar", "language", s(&g)], &[]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let p = cobweave(&["suite", "--criterion", "2"], &[]);
    let q = cobweave(&["suite", "--criterion", "2", "--sequential"], &[]);
    assert_eq!(p.stdout, q.stdout);
}

#[test]
fn cat_and_grammar_commands_run_on_fixtures() {
    let dir = TempDir::new().unwrap();
    let (_, cat) = fixtures::fixture_cat_fsas().remove(0);
    let c = write(dir.path(), "c.json", &cat);
    let out = cobweave(&["cat", "check", s(&c)], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = cobweave(&["--bound", "4", "cat", "language", s(&c)], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let g = write(dir.path(), "g.json", &fixtures::dyck_grammar());
    let out = cobweave(&["--bound", "6", "cs-factorize", s(&g), "--depth", "2"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
