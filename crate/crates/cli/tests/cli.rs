use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fhl_core::geometry::total_cost;
use fhl_core::io::{parse_instance, COUNTEREXAMPLE_DOCUMENT};
use fhl_core::Point;
use serde_json::Value;
use tempfile::TempDir;

fn fhl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fhl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn point(v: &Value) -> Point {
    Point::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn solve_counterexample() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "ce.json", COUNTEREXAMPLE_DOCUMENT);
    let doc = json(&fhl(&["solve", &path]));
    assert_eq!(doc["cost"].as_f64().unwrap(), 16.0);
    assert_eq!(doc["assignment"].as_array().unwrap().len(), 5);
}

#[test]
fn printed_cost_matches_printed_endpoints() {
    let dir = TempDir::new().unwrap();
    let text = r#"{"length": 3.7, "speed": 2.5, "points": [
        {"x": 0.3, "y": 1.9, "w": 2},
        {"x": -4.1, "y": 0.2},
        {"x": 5.5, "y": -3.3, "w": 0.7},
        {"x": 2.2, "y": 6.1, "w": 1.5}
    ]}"#;
    let path = write(&dir, "inst.json", text);
    let inst = parse_instance(text).unwrap();
    for cmd in ["solve", "vertex-only", "oracle"] {
        let doc = json(&fhl(&[cmd, &path]));
        let cost = doc["cost"].as_f64().unwrap();
        let again = total_cost(&inst, point(&doc["facility"]), point(&doc["entry"]));
        assert!((cost - again).abs() <= 1e-9 * cost.max(1.0), "{cmd}: {cost} vs {again}");
    }
}

#[test]
fn compare_shows_the_vertex_only_gap() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "ce.json", COUNTEREXAMPLE_DOCUMENT);
    let doc = json(&fhl(&["compare", &path]));
    assert_eq!(doc["vertex_only_worse"], Value::Bool(true));
    assert!(doc["gap"].as_f64().unwrap() > 0.01);
    assert_eq!(doc["full"]["cost"].as_f64().unwrap(), 16.0);
}

#[test]
fn oracle_reports_its_gap() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "ce.json", COUNTEREXAMPLE_DOCUMENT);
    let doc = json(&fhl(&["oracle", &path, "--resolution", "1e-3"]));
    let gap = doc["certified_gap"].as_f64().unwrap();
    assert!(gap > 0.0);
    assert!((doc["cost"].as_f64().unwrap() - 16.0).abs() <= gap + 1e-6);

    let bad = fhl(&["oracle", &path, "--resolution", "0"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn counterexample_subcommand() {
    let out = fhl(&["counterexample"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("DISCREPANCY"));

    let doc = json(&fhl(&["counterexample", "--json"]));
    assert!(doc["gap"].as_f64().unwrap() > 0.01);
}

#[test]
fn table_subcommand() {
    let out = fhl(&["table"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("measured 49"), "{text}");

    let doc = json(&fhl(&["table", "--json"]));
    assert_eq!(doc["rows"].as_array().unwrap().len(), 13);
}

#[test]
fn plot_writes_svg() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "ce.json", COUNTEREXAMPLE_DOCUMENT);
    let svg = dir.path().join("out.svg");
    let out = fhl(&["plot", &path, "-o", svg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.contains("<svg xmlns=\"http://www.w3.org/2000/svg\""));
    assert!(text.trim_end().ends_with("</svg>"));
    assert!(text.contains("class=\"bisector\""));
    assert!(text.contains("class=\"highway\""));
    assert_eq!(text.matches("class=\"demand\"").count(), 5);
}

#[test]
fn validation_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let slow = write(&dir, "slow.json", r#"{"length": 1, "speed": 0.5, "points": [{"x": 0, "y": 0}]}"#);
    let out = fhl(&["solve", &slow]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("speed"));

    let broken = write(&dir, "broken.json", "{\"length\": 1,");
    assert_eq!(fhl(&["solve", &broken]).status.code(), Some(1));

    let missing = dir.path().join("nowhere.json");
    let out = fhl(&["solve", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nowhere.json"));
    assert!(!Path::new(&missing).exists());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(fhl(&["bogus"]).status.code(), Some(2));
    assert_eq!(fhl(&["solve"]).status.code(), Some(2));
    assert_eq!(fhl(&["oracle", "x.json", "--resolution", "fast"]).status.code(), Some(2));
}
