use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rainbow_giant::graph::{read_colored_edge_list, read_edge_list};
use tempfile::tempdir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rainbow-giant"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn theory_prints_json() {
    let out = run(&["theory", "--n", "200000", "--epsilon", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["mu"].as_f64().unwrap() - 0.9062524420050095).abs() < 1e-12);
    assert_eq!(v["colors"], 200000);
    assert_eq!(v["loss_prefix"], 10000);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["experiment"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        run(&["theory", "--n", "100", "--epsilon", "1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["experiment", "--n", "1000", "--format", "xml"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_distributions_passes() {
    let out = run(&["verify-distributions", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 4);
}

#[test]
fn oracle_check_passes_and_solves_files() {
    let out = run(&[
        "oracle-check",
        "--seed",
        "1",
        "--instances",
        "20",
        "--runs",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let dir = tempdir().unwrap();
    let file = dir.path().join("triangle.txt");
    fs::write(&file, "n 4\n0 1 0\n1 2 0\n2 0 1\n2 3 2\n").unwrap();
    let out = run(&["oracle-check", "--input", path(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["size"], 4);
}

#[test]
fn generate_decompose_process_pipeline() {
    let dir = tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let labels = dir.path().join("labels.txt");
    let colored = dir.path().join("colored.txt");
    let trace = dir.path().join("trace.csv");

    let out = run(&[
        "generate",
        "--generator",
        "dlp",
        "--n",
        "5000",
        "--epsilon",
        "0.1",
        "--seed",
        "3",
        "--out",
        path(&graph),
        "--labels",
        path(&labels),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let g = read_edge_list(fs::read(&graph).unwrap().as_slice()).unwrap();
    let label_text = fs::read_to_string(&labels).unwrap();
    assert_eq!(label_text.lines().count(), g.n());
    assert!(label_text.lines().all(|l| {
        let role = l.split_whitespace().nth(1).unwrap();
        ["kernel", "core", "mantle"].contains(&role)
    }));

    let out = run(&["decompose", "--input", path(&graph)]);
    assert_eq!(out.status.code(), Some(0));
    let d: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let core_labels = label_text
        .lines()
        .filter(|l| !l.ends_with("mantle"))
        .count() as u64;
    let core = d["core_vertices"].as_u64().unwrap();
    assert!(core > 0 && core <= core_labels, "{core} vs {core_labels}");

    let out = run(&[
        "process",
        "--input",
        path(&graph),
        "--n",
        "5000",
        "--seed",
        "9",
        "--out",
        path(&colored),
        "--trace",
        path(&trace),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let s: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(s["rainbow"], true);

    let (g2, colors) = read_colored_edge_list(fs::read(&colored).unwrap().as_slice()).unwrap();
    assert_eq!(g2, g);
    let kept: Vec<usize> = colors.iter().flatten().copied().collect();
    let distinct: std::collections::HashSet<_> = kept.iter().collect();
    assert_eq!(distinct.len(), kept.len());

    let trace_text = fs::read_to_string(&trace).unwrap();
    let mut lines = trace_text.lines();
    assert_eq!(lines.next(), Some("step,edge_id,color,kept,desc,X_i"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len() as u64, s["processed"].as_u64().unwrap());
    let deleted = rows
        .iter()
        .filter(|r| r.split(',').nth(3) == Some("0"))
        .count();
    assert_eq!(deleted as u64, s["deleted"].as_u64().unwrap());
}

#[test]
fn experiment_json_and_csv_are_reproducible() {
    let dir = tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let csv = dir.path().join("a.csv");
    let base = [
        "experiment",
        "--n",
        "5000",
        "--epsilon",
        "0.1",
        "--trials",
        "4",
        "--seed",
        "11",
        "--j-grid",
        "1,4,16",
    ];
    let code_a = run(&[&base[..], &["--workers", "1", "--out", path(&a)]].concat())
        .status
        .code();
    let code_b = run(&[&base[..], &["--workers", "3", "--out", path(&b)]].concat())
        .status
        .code();
    assert!(matches!(code_a, Some(0) | Some(1)));
    assert_eq!(code_a, code_b);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let report: serde_json::Value = serde_json::from_slice(&fs::read(&a).unwrap()).unwrap();
    assert_eq!(report["config"]["j_grid"], serde_json::json!([1, 4, 16]));
    assert_eq!(report["trials"].as_array().unwrap().len(), 4);
    let passed = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true);
    assert_eq!(code_a, Some(if passed { 0 } else { 1 }));

    run(&[&base[..], &["--format", "csv", "--out", path(&csv)]].concat());
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 5);
}
