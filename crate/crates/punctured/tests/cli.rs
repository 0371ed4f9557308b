use std::path::PathBuf;
use std::process::{Command, Output};

fn punctured(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_punctured")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).to_string()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn symbol_of_t_with_itself() {
    let o = punctured(&["cc", "--ring", "Q", "--f", "t", "--g", "t"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "-1");
}

#[test]
fn zero_is_not_invertible() {
    let o = punctured(&["cc", "--ring", "Q", "--f", "0", "--g", "t"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not invertible"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn both_symbol_algorithms_agree() {
    let o = punctured(&["cc", "--ring", "Q[e^2=0]", "--f", "1 + e*t^-1", "--g", "t + e", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(punctured(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(punctured(&["cc", "--f", "t"]).status.code(), Some(2));
    let o = punctured(&["cc", "--f", "t +* t", "--g", "t"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains('^'), "{}", stderr(&o));
    assert_eq!(punctured(&["cc", "--f", "x*t", "--g", "t"]).status.code(), Some(2));
    assert_eq!(punctured(&["verify", "--suite", "nonexistent"]).status.code(), Some(2));
}

#[test]
fn json_output_for_cocycles() {
    let o = punctured(&["--json", "cocycle", "--pair", "LO", "--ring", "Q[e^2=0]", "--x", "(h=1+e*t^-1; phi=t)", "--y", "(h=1+t; phi=t)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "cocycle");
    assert!(v["value"].is_string());
}

#[test]
fn determinant_reports_its_window() {
    let o = punctured(&["detD", "--ring", "Q[e^2=0]", "--x", "(h=1+t; phi=t)", "--y", "(h=1+e*t^-1; phi=t)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("1 - e"));
    assert!(lines.next().unwrap().starts_with("block "));
}

#[test]
fn lie_cocycle_on_vector_fields() {
    let o = punctured(&["lie", "--cocycle", "D", "--z", "(s=0; r=t^-1)", "--w", "(s=0; r=t^3)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "-1");
}

#[test]
fn verify_writes_a_clean_report() {
    let path = tmp("lie_tables.json");
    let o = punctured(&["verify", "--suite", "lie_tables", "--cases", "3", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["suite"], "lie_tables");
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert!(stdout(&o).starts_with("PASS"));
}

#[test]
fn identical_arguments_give_identical_reports() {
    let run = |name: &str| {
        let path = tmp(name);
        let o = punctured(&["verify", "--suite", "ring_laws", "--seed", "11", "--cases", "20", "--json", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        v["millis"] = 0.into();
        serde_json::to_string_pretty(&v).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}
