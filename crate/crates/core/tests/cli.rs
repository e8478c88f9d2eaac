use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const K3: &str = "p mg 3 3\ne 1 2 1\ne 2 3 1\ne 1 3 1\n";

fn mgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgame"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn solve_triangle_json() {
    let dir = TempDir::new().unwrap();
    let k3 = write(&dir, "k3.txt", K3);
    let out = mgame(&["solve", s(&k3), "--json", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["values"], serde_json::json!(["1/3", "1/3", "1/3"]));
    assert_eq!(v["factors"], serde_json::json!(["2/3", "2/3", "2/3"]));
    assert_eq!(v["factor_guarantee"], "2/3");
    assert_eq!(v["allocated"], "1");
    assert_eq!(v["matching_weight"], "1");
    assert_eq!(v["fractional_optimum"], "3/2");
    assert_eq!(v["matching"].as_array().unwrap().len(), 1);
}

#[test]
fn solve_single_edge_table() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "edge.txt", "p mg 2 1\ne 1 2 5\n");
    let out = mgame(&["solve", s(&path)]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("matching T: 1-2"));
    assert!(text.contains("allocated: 5"));
    assert!(text.contains("factor guarantee: 1"));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "bad.txt", "p mg 2 1\ne 1 1 5\n");
    let out = mgame(&["solve", s(&path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let missing = mgame(&["solve", "/nonexistent/instance.txt"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn verify_accepts_the_mechanism_output() {
    let dir = TempDir::new().unwrap();
    let k3 = write(&dir, "k3.txt", K3);
    let imp = write(&dir, "imp.json", r#"{"values":["1/3","1/3","1/3"]}"#);
    let out = mgame(&[
        "verify",
        s(&k3),
        s(&imp),
        "--alpha",
        "2/3",
        "--mode",
        "exhaustive",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["checked_count"], 8);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    assert_eq!(v["budget_ok"], true);

    let edges = mgame(&["verify", s(&k3), s(&imp), "--mode", "edges"]);
    assert_eq!(edges.status.code(), Some(0));
}

#[test]
fn verify_rejects_the_raw_cover_at_full_alpha() {
    let dir = TempDir::new().unwrap();
    let k3 = write(&dir, "k3.txt", K3);
    let imp = write(&dir, "imp.json", r#"{"values":["1/2","1/2","1/2"]}"#);
    let out = mgame(&["verify", s(&k3), s(&imp), "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["budget_ok"], false);
}

#[test]
fn verify_refuses_large_exhaustive_runs() {
    let dir = TempDir::new().unwrap();
    let big = write(&dir, "big.txt", "p mg 30 1\ne 1 2 1\n");
    let zeros = vec!["\"0\""; 30].join(",");
    let imp = write(&dir, "imp.json", &format!("{{\"values\":[{zeros}]}}"));
    let out = mgame(&["verify", s(&big), s(&imp), "--max-n", "20"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_rejects_bad_alpha_and_length() {
    let dir = TempDir::new().unwrap();
    let k3 = write(&dir, "k3.txt", K3);
    let imp = write(&dir, "imp.json", r#"{"values":["1/3","1/3","1/3"]}"#);
    assert_eq!(
        mgame(&["verify", s(&k3), s(&imp), "--alpha", "3/2"])
            .status
            .code(),
        Some(2)
    );
    let short = write(&dir, "short.json", r#"{"values":["1/3"]}"#);
    assert_eq!(mgame(&["verify", s(&k3), s(&short)]).status.code(), Some(2));
}

#[test]
fn gen_gap_writes_disjoint_triangles() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("g3.txt");
    let out = mgame(&["gen", "gap", "--n", "3", "-o", s(&path)]);
    assert_eq!(out.status.code(), Some(0));
    let g = mgame::instance::parse_instance(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(g.vertex_count(), 18);
    assert_eq!(g.edge_count(), 18);
    assert!(g.edges().iter().all(|e| e.weight == 1));
}

#[test]
fn gen_cycle_to_stdout() {
    let out = mgame(&["gen", "cycle", "--k", "2", "--weight", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let g = mgame::instance::parse_instance(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(g.vertex_count(), 5);
    assert_eq!(g.edge_count(), 5);
    assert!(g.edges().iter().all(|e| e.weight == 4));
}

#[test]
fn gen_random_is_reproducible() {
    let args = [
        "gen",
        "random",
        "--n",
        "12",
        "--p",
        "1/3",
        "--max-weight",
        "9",
        "--seed",
        "7",
    ];
    let a = mgame(&args);
    let b = mgame(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = mgame(&[
        "gen",
        "random",
        "--n",
        "12",
        "--p",
        "1/3",
        "--max-weight",
        "9",
        "--seed",
        "8",
    ]);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(
        mgame(&["gen", "random", "--n", "4", "--p", "3/2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn gap_reports() {
    let dir = TempDir::new().unwrap();
    let g1 = dir.path().join("g1.txt");
    assert_eq!(
        mgame(&["gen", "gap", "--n", "1", "-o", s(&g1)])
            .status
            .code(),
        Some(0)
    );
    let v = json(&mgame(&["gap", s(&g1)]));
    assert_eq!(v["opt_integral"], "2");
    assert_eq!(v["opt_fractional"], "3");
    assert_eq!(v["ratio"], "2/3");
    assert_eq!(v["core_nonempty"], false);

    let edge = write(&dir, "edge.txt", "p mg 2 1\ne 1 2 5\n");
    let v = json(&mgame(&["gap", s(&edge)]));
    assert_eq!(v["ratio"], "1");
    assert_eq!(v["core_nonempty"], true);

    let k3 = write(&dir, "k3.txt", K3);
    assert_eq!(json(&mgame(&["gap", s(&k3)]))["core_nonempty"], false);
}

#[test]
fn gap_refusal_is_exit_three() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("dense.txt");
    mgame(&["gen", "random", "--n", "12", "--p", "1", "-o", s(&path)]);
    let out = mgame(&["gap", s(&path)]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["core_nonempty"], "unknown");
    assert!(v["opt_fractional"].is_string());
}
