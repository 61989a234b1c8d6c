// End-to-end runs of the `tailbound` binary: output format and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn tailbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tailbound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_spec(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn bound_prints_value_branch_and_clamp() {
    let o = tailbound(&["bound", "--lambda", "2", "--n", "4", "--method", "theorem1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0.3125,first-max-term,false\n");

    let o = tailbound(&["bound", "--lambda", "0.5", "--n", "3", "--method", "bentkus"]);
    assert_eq!(stdout(&o), "1.0,not-applicable,true\n");

    let o = tailbound(&["bound", "--lambda", "2", "--method", "corollary1"]);
    assert_eq!(stdout(&o), "0.505195,not-applicable,false\n");
}

#[test]
fn bound_rejects_bad_input() {
    for args in [
        &["bound", "--lambda", "5", "--n", "4", "--method", "theorem1"][..],
        &["bound", "--lambda", "-1", "--n", "4", "--method", "theorem1"],
        &["bound", "--lambda", "0.5", "--n", "4", "--method", "hoeffding"],
        &["bound", "--lambda", "2", "--method", "theorem1"],
        &["bound", "--lambda", "2", "--n", "4", "--method", "chernoff"],
        &["frobnicate"],
    ] {
        let o = tailbound(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(tailbound(&["--help"]).status.code(), Some(0));
}

#[test]
fn compare_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let o = tailbound(&[
        "compare", "--lambda-min", "0.5", "--lambda-max", "2", "--step", "0.5", "--n", "4",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "lambda,n,theorem1,theorem1_limit,hoeffding,bentkus,bentkus_simple,corollary1"
    );
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[1].split(',').nth(4), Some(""));
    assert_eq!(lines[4], "2.0,4,0.3125,0.406006,0.84375,0.849463,1.0,0.505195");
}

#[test]
fn compare_rejects_inverted_range() {
    let o = tailbound(&["compare", "--lambda-min", "2", "--lambda-max", "1", "--n", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_lemma4_passes() {
    let o = tailbound(&["verify", "lemma4", "--n", "3", "--lambda", "2", "--resolution", "0.02"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("lemma4-bound,true,0,"));
    assert!(lines[1].starts_with("lemma4-argmax,true,0,"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("max=0.259259"));
}

#[test]
fn verify_lemma4_rejects_large_n() {
    let o = tailbound(&["verify", "lemma4", "--n", "7", "--lambda", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_two_point_passes() {
    let o = tailbound(&["verify", "two-point", "--n", "2", "--lambda", "1.5", "--resolution", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("two-point,true,0,"));
}

#[test]
fn verify_tightness_lines() {
    let o = tailbound(&["verify", "tightness", "--lambda", "2", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "tightness-first-max-term,true,0,1\ntightness-second-max-term,true,0,1\n"
    );
    let o = tailbound(&["verify", "tightness", "--lambda", "0.5", "--n", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_inequalities_all_pass() {
    let o = tailbound(&["verify", "inequalities", "--n-max", "50", "--lambda-step", "0.05"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 7);
    for line in lines {
        assert_eq!(line.split(',').nth(1), Some("true"), "{line}");
    }
}

#[test]
fn solve_r_prints_constants() {
    let o = tailbound(&["solve-r"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let fields: Vec<&str> = out.trim_end().split(',').collect();
    assert_eq!(fields.len(), 4);
    assert!(fields[0].starts_with("0.158594"));
    assert!(fields[1].starts_with("0.841405"));
    assert!(fields[1].len() >= 14);
    assert_eq!(tailbound(&["solve-r", "--tol", "0.5"]).status.code(), Some(2));
}

#[test]
fn mc_fair_coins_pass_and_repeat() {
    let dir = tempfile::tempdir().unwrap();
    let coin = r#"{"type": "two-point", "low": 0, "high": 1, "p": 0.5}"#;
    let spec = write_spec(dir.path(), "coins.json", &format!("[{coin},{coin},{coin},{coin}]"));
    let args = ["mc", "--spec", &spec, "--trials", "1000000", "--seed", "42"];
    let a = tailbound(&args);
    assert_eq!(a.status.code(), Some(0));
    let out = stdout(&a);
    let fields: Vec<&str> = out.trim_end().split(',').collect();
    assert_eq!(fields[2], "0.3125");
    assert_eq!(fields[3], "true");
    let estimate: f64 = fields[0].parse().unwrap();
    let ci: f64 = fields[1].parse().unwrap();
    assert!((estimate - 0.3125).abs() <= ci);

    let b = tailbound(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn mc_uniforms_use_bound_at_mean() {
    let dir = tempfile::tempdir().unwrap();
    let u = r#"{"type": "uniform", "lo": 0, "hi": 1}"#;
    let spec = write_spec(dir.path(), "u.json", &format!("[{u},{u},{u}]"));
    let o = tailbound(&["mc", "--spec", &spec, "--trials", "100000"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.split(',').nth(2), Some("0.5625"));
}

#[test]
fn mc_rejects_bad_specs() {
    let dir = tempfile::tempdir().unwrap();
    for (name, json) in [
        ("empty.json", ""),
        ("none.json", "[]"),
        ("bad.json", r#"[{"type": "uniform", "lo": 0.5, "hi": 2}]"#),
        ("unknown.json", r#"[{"type": "beta", "a": 1}]"#),
    ] {
        let spec = write_spec(dir.path(), name, json);
        let o = tailbound(&["mc", "--spec", &spec, "--trials", "1000"]);
        assert_eq!(o.status.code(), Some(2), "{name}");
    }
    let o = tailbound(&["mc", "--spec", "/nonexistent/spec.json"]);
    assert_eq!(o.status.code(), Some(2));
}
