use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn polya(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polya"))
        .args(args)
        .env_remove("POLYA_MEMORY_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_result(o: &Output) -> Value {
    let doc: Value = serde_json::from_slice(&o.stdout).expect("json output");
    assert!(doc["provenance"]["config_sha256"].as_str().unwrap().len() == 64);
    doc["result"].clone()
}

fn csv_column(text: &str, name: &str) -> Vec<String> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(i).unwrap().to_string()).collect()
}

#[test]
fn count_csv_has_planar_return_counts() {
    let o = polya(&["count", "--dim", "2", "--steps", "8", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# polya "));
    assert_eq!(csv_column(&text, "b"), ["1", "0", "4", "0", "36", "0", "400", "0", "4900"]);
}

#[test]
fn robbins_bracket_for_seven() {
    let o = polya(&["bounds2d", "--n-list", "7", "--robbins", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(csv_column(&text, "lower")[0].starts_with("5039.33"));
    assert!(csv_column(&text, "upper")[0].starts_with("5040.04"));
}

#[test]
fn bounds2d_csv_columns() {
    let o = polya(&["bounds2d", "--n-list", "10,100", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("N,exact_gap,upper,lower,cor_lo,cor_hi,all_ok\n"));
    assert_eq!(csv_column(&text, "all_ok"), ["true", "true"]);
}

#[test]
fn verify_quick_passes() {
    let o = polya(&["verify", "--quick"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json_result(&o);
    assert_eq!(r["passed"], Value::Bool(true));
    assert_eq!(r["level"], "quick");
}

#[test]
fn exit_codes() {
    assert_eq!(polya(&["count", "--dim", "9", "--steps", "3"]).status.code(), Some(2));
    assert_eq!(polya(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(polya(&["count", "--dim", "2", "--steps", "3", "--target", "1,x"]).status.code(), Some(2));
    let big = ["count", "--dim", "2", "--steps", "3", "--memory-budget", "99999999999"];
    assert_eq!(polya(&big).status.code(), Some(3));
    let mut ack = big.to_vec();
    ack.push("--i-know");
    assert_eq!(polya(&ack).status.code(), Some(0));
    let sim = ["simulate", "--dim", "2", "--steps", "2000", "--trials", "1000000"];
    assert_eq!(polya(&sim).status.code(), Some(3));
    let tiny = ["count", "--dim", "3", "--steps", "40", "--memory-budget", "1000"];
    assert_eq!(polya(&tiny).status.code(), Some(3));
}

#[test]
fn memory_budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_polya"))
        .args(["count", "--dim", "2", "--steps", "3"])
        .env("POLYA_MEMORY_BUDGET", "99999999999")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn simulate_reports_exact_value_and_repeats() {
    let args = ["simulate", "--dim", "2", "--steps", "10", "--target", "0,0", "--trials", "20000", "--seed", "42"];
    let a = polya(&args);
    let b = polya(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r = json_result(&a);
    assert_eq!(r["exact"].as_f64().unwrap(), 0.4207611083984375);
    assert!(r["z"].as_f64().unwrap() < 5.0);
    assert!(r["stderr"].as_f64().unwrap() > 0.0);
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["provenance"]["seed"], 42);
}

#[test]
fn config_file_merges_under_flags() {
    let path = std::env::temp_dir().join(format!("polya-cli-config-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"dim": 1, "steps": 4, "format": "csv"}"#).unwrap();
    let p = path.to_str().unwrap();
    let o = polya(&["count", "--config", p]);
    assert_eq!(csv_column(&stdout(&o), "b"), ["1", "0", "2", "0", "6"]);
    let o = polya(&["count", "--config", p, "--dim", "2"]);
    assert_eq!(csv_column(&stdout(&o), "b"), ["1", "0", "4", "0", "36"]);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn weighted_graph_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_polya"))
        .args(["weighted", "--graph", "-", "--steps", "80"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"vertices": 2, "edges": [[1, 2, ["0", "1/2"]]], "target": 2}"#)
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    let r = json_result(&o);
    let a = &r["general"]["a_one"];
    assert!((a[0].as_f64().unwrap() + 0.2).abs() < 1e-10 && (a[1].as_f64().unwrap() + 0.1).abs() < 1e-10);
    assert_eq!(r["diagnostics"]["status"], "exists");
    assert_eq!(r["diagnostics"]["branch"], "+");
    assert!(r["identities"].as_array().unwrap().iter().all(|x| x["holds"] == Value::Bool(true)));
}

#[test]
fn limits_by_dimension() {
    let r = json_result(&polya(&["limit", "--dim", "2"]));
    assert_eq!(r["limit"], "ONE");
    let r = json_result(&polya(&["limit", "--dim", "3", "--steps", "400"]));
    let v = r["value"].as_array().unwrap();
    assert!(v[0].as_f64().unwrap() < 0.3405373 && 0.3405374 < v[1].as_f64().unwrap());
    let o = polya(&["vlimit", "--dim", "3", "--target", "1,0,0", "--steps", "200", "--format", "csv"]);
    assert!(o.status.success());
    let o = polya(&["asym", "--dim", "3", "--targets", "3,0,0;0,-4,0", "--steps", "100", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().count(), 4);
    let o = polya(&["profile", "--dim", "1", "--steps", "4", "--format", "table"]);
    assert!(stdout(&o).contains("limit: 1"));
}
