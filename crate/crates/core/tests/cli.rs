use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_interpnorm"));
    c.env_remove("INTERPNORM_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn tau_power_report() {
    let o = run(&["tau", "--power", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    let op = r["outputs"]["op_norm_l2"].as_f64().unwrap();
    assert!((op - 2f64.powf(-1.5)).abs() < 1e-10);
    assert_eq!(r["verified"], true);
    assert_eq!(r["inputs_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn norm_of_identity_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("id3.json");
    std::fs::write(&path, r#"{"rows":3,"cols":3,"re":[1,0,0,0,1,0,0,0,1]}"#).unwrap();
    let o = run(&["norm", "--in", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!((report(&o)["outputs"]["op_norm_l2"].as_f64().unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn random_k4_gap() {
    let o = run(&["expander", "--random", "4", "3", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let eps = report(&o)["outputs"]["epsilon"].as_f64().unwrap();
    assert!((eps - 1.0 / 3.0).abs() < 1e-10);
}

#[test]
fn stdin_and_inline_inputs_agree() {
    let m = r#"{"rows":2,"cols":2,"re":[0.5,0.5,0.5,-0.5],"im":[0,0,0,0]}"#;
    let a = report(&run_stdin(&["regnorm"], m));
    let b = report(&run(&["regnorm", "--in", m]));
    assert_eq!(a["outputs"], b["outputs"]);
    assert!((a["outputs"]["reg_norm_l2"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn malformed_json_is_an_input_error() {
    let o = run_stdin(&["norm"], r#"{"rows":2,"cols":2,"re":[1,2"#);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line") && err.contains("column"), "{err}");
    assert!(o.stdout.is_empty());

    let o = run(&["norm", "--in", r#"{"rows":2,"cols":2,"re":[1]}"#]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["norm", "--in", "/nonexistent/matrix.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["tau", "--power", "x"]).status.code(), Some(2));
    assert_eq!(run(&["tau", "--power", "11"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--only", "12"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verification_failure_exits_one() {
    let o = run(&["check", "--only", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&o);
    assert_eq!(r["verified"], false);
    let failing: Vec<&str> = r["verification"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|a| a["passed"] == false)
        .map(|a| a["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["criterion 2: op norm variation < 5%"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));
}

#[test]
fn reports_are_reproducible_across_thread_counts() {
    let args = ["delta", "--norm", r#"{"kind":"lp","p":1,"w":[1,1]}"#, "--eps", "0.3,0.6", "--budget", "20", "--seed", "5"];
    let a = bin().args(args).env("INTERPNORM_THREADS", "1").output().unwrap();
    let b = bin().args(args).env("INTERPNORM_THREADS", "3").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(without_timing(report(&a)), without_timing(report(&b)));
    let mut other = args;
    other[4] = "0.3,0.7";
    let c = run(&other);
    assert_eq!(c.status.code(), Some(0));
    assert_eq!(report(&a)["inputs_digest"], report(&b)["inputs_digest"]);
    assert_ne!(report(&a)["inputs_digest"], report(&c)["inputs_digest"]);
}

#[test]
fn invalid_thread_count() {
    let o = bin().args(["tau"]).env("INTERPNORM_THREADS", "0").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn report_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = run(&["hilbertmat", "--n", "16", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["outputs"]["n"], 16);
    assert!(r["outputs"]["op_norm_l2"].as_f64().unwrap() < std::f64::consts::PI);
}

#[test]
fn interp_and_calderon_bracket() {
    let fam = r#"{"dim":2,"arcs":[{"a":0,"b":3.141592653589793,"norm":{"kind":"lp","p":1,"w":[1,1]}},{"a":3.141592653589793,"b":6.283185307179586,"norm":{"kind":"lp","p":"inf","w":[1,1]}}]}"#;
    let o = run(&["interp", "--family", fam, "--vector", "[1,1]", "--degree", "16", "--grid", "128"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    let up = r["outputs"]["upper"]["value"].as_f64().unwrap();
    assert!((up / 2f64.sqrt() - 1.0).abs() < 0.03);

    let o = run(&[
        "calderon",
        "--x0",
        r#"{"kind":"lp","p":1,"w":[1,2]}"#,
        "--x1",
        r#"{"kind":"lp","p":2,"w":[1,1]}"#,
        "--theta",
        "0.5",
        "--vector",
        r#"{"re":[1,0.5],"im":[0,1]}"#,
        "--degree",
        "16",
        "--grid",
        "128",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["outputs"]["oracle"]["p"].as_f64().unwrap(), 4.0 / 3.0);
    assert_eq!(r["verified"], true);

    let o = run(&["calderon", "--x0", r#"{"kind":"lp","p":1,"w":[1]}"#, "--x1", r#"{"kind":"lp","p":2,"w":[1,1]}"#, "--theta", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn matrix_commands_verify() {
    let m = r#"{"rows":3,"cols":3,"re":[1,-2,0.5,0,1,1,2,0.25,-1],"im":[0,1,0,-1,0,0.5,0,0,1]}"#;
    for cmd in ["norm", "regnorm", "dualball", "gammah", "gammahstar", "densify"] {
        let o = run(&[cmd, "--in", m]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&o.stdout));
    }
    let o = run(&["densify", "--in", m]);
    assert_eq!(report(&o)["outputs"]["check"]["verified"], true);
}
