use std::process::{Command, Output};

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_conserved-moments"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn system_all_distinct() {
    let o = run(&["system", "--word", "abcde", "--k", "2"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("rank 10 nullity 0"), "{out}");
    assert!(out.contains("<cde|ab> = (de;abc) + (ce;abd) + (cd;abe) = 0"), "{out}");
}

#[test]
fn system_json() {
    let o = run(&["system", "--word", "a2b2", "--k", "2", "--json"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["nullity"], 1);
    assert_eq!(v["unknowns"], serde_json::json!(["(aa;bb)", "(ab;ab)", "(bb;aa)"]));
    assert_eq!(v["nullspace"], serde_json::json!([["1", "-1/2", "1"]]));
}

#[test]
fn split_too_large_is_usage_error() {
    let o = run(&["system", "--word", "ab", "--k", "5"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("split too large"));
}

#[test]
fn bad_word_and_unknown_command() {
    assert_eq!(run(&["system", "--word", "a!", "--k", "1"], &[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], &[]).status.code(), Some(2));
    assert_eq!(run(&["system", "--word", "abc", "--k", "1", "--format", "csv"], &[]).status.code(), Some(2));
}

#[test]
fn sweep_reports_every_pattern() {
    let o = run(&["sweep", "--length", "5", "--k", "2", "--json"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 7);
    assert!(entries.iter().all(|e| e["verdict"]["nullity"] == 0));
}

#[test]
fn spectrum_k4() {
    let o = run(&["spectrum", "--k", "4"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("(+5)^1, (-4)^8, (+3)^27, (-2)^48, (+1)^42"), "{out}");
}

#[test]
fn table_csv() {
    let o = run(&["table", "--kmax", "3", "--format", "csv"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("k,N,det_exact,det_log10"));
    assert!(lines[3].starts_with("3,35,47775744,7.6792,4,1,-3,6,2,14,-1,14"));
}

#[test]
fn budget_exit_code() {
    let o = run(&["spectrum", "--k", "3"], &[("CM_MAX_ORDER", "10")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("budget exceeded"));
    let o = run(&["spectrum", "--k", "3", "--max-order", "10"], &[]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn boundary_cases() {
    let o = run(&["boundary", "--case", "antisym-abc"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(a;bc) = 1, (b;ac) = -1, (c;ab) = 1"));
    let o = run(&["boundary", "--case", "rank2-a2b2", "--json"], &[]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"]["nullity"], 1);
}

#[test]
fn analytic_and_oracle() {
    let o = run(&["analytic", "--case", "akbkc", "--k", "3"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("nullity 0"));
    let o = run(&["oracle", "--center", "0.1,-0.2,0.3"], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["oracle", "--width", "-1"], &[]);
    assert_eq!(o.status.code(), Some(2));
}
