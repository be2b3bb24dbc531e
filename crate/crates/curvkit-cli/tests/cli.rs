//! End-to-end CLI behavior: exit codes, file outputs, spec'd examples.

use std::path::Path;
use std::process::{Command, Output};

fn curvkit(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvkit"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) {
    std::fs::write(dir.join(name), contents).unwrap();
}

fn json(dir: &Path, name: &str) -> serde_json::Value {
    let text = std::fs::read_to_string(dir.join(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn resistance_on_k3_gives_k2() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "k3.edges", "0 1\n1 2\n0 2\n");
    let out = curvkit(&["resistance", "--in", "k3.edges", "--out", "k3.json"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(tmp.path(), "k3.json");
    for e in v["edges"].as_array().unwrap() {
        assert!((e["k"].as_f64().unwrap() - 2.0).abs() < 1e-6);
        assert!((e["k_norm"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-6);
    }
    for n in v["nodes"].as_array().unwrap() {
        assert!((n["p"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-6);
    }
}

#[test]
fn generate_then_resistance_complete_five() {
    let tmp = tempfile::tempdir().unwrap();
    let out = curvkit(
        &["generate", "--model", "complete", "--n", "5", "--out", "k5.edges"],
        tmp.path(),
    );
    assert!(out.status.success());
    let out = curvkit(&["resistance", "--in", "k5.edges", "--out", "k5.json"], tmp.path());
    assert!(out.status.success());
    let v = json(tmp.path(), "k5.json");
    for e in v["edges"].as_array().unwrap() {
        assert!((e["k_norm"].as_f64().unwrap() - 0.4).abs() < 1e-6);
    }
}

#[test]
fn disconnected_input_exits_two_with_single_line() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "disc.edges", "0 1\n2 3\n");
    let out = curvkit(&["resistance", "--in", "disc.edges"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("graph is disconnected"), "stderr: {err}");
    assert_eq!(err.trim().lines().count(), 1, "single-line diagnostic");
}

#[test]
fn missing_input_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out = curvkit(&["resistance", "--in", "nope.edges"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_flags_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "k2.edges", "0 1\n");
    let out = curvkit(
        &["reweight", "--in", "k2.edges", "--out", "o.edges", "--eta", "1.5"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let out = curvkit(
        &["generate", "--model", "warp", "--n", "5", "--out", "g.edges"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    // unknown flags rejected by the parser
    let out = curvkit(&["resistance", "--in", "k2.edges", "--frobnicate"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ollivier_k2_kappa_one() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "k2.edges", "0 1\n");
    let out = curvkit(
        &["ollivier", "--in", "k2.edges", "--out", "o.json", "--alpha", "0.5"],
        tmp.path(),
    );
    assert!(out.status.success());
    let v = json(tmp.path(), "o.json");
    let e = &v["edges"][0];
    assert_eq!(e["w1"].as_f64().unwrap(), 0.0);
    assert_eq!(e["kappa"].as_f64().unwrap(), 1.0);
}

#[test]
fn generate_is_seed_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let args = [
        "generate", "--model", "ws", "--n", "60", "--k", "4", "--p", "0.2", "--seed", "7",
    ];
    curvkit(&[&args[..], &["--out", "a.edges"]].concat(), tmp.path());
    curvkit(&[&args[..], &["--out", "b.edges"]].concat(), tmp.path());
    let a = std::fs::read(tmp.path().join("a.edges")).unwrap();
    let b = std::fs::read(tmp.path().join("b.edges")).unwrap();
    assert_eq!(a, b);
    assert!(!a.is_empty());
}

#[test]
fn reweight_eta_zero_is_identity() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "g.edges", "0 1 2\n1 2 0.5\n0 2 1\n");
    let out = curvkit(
        &["reweight", "--in", "g.edges", "--out", "same.edges", "--eta", "0"],
        tmp.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(tmp.path().join("same.edges")).unwrap();
    assert_eq!(text, "0 1 2\n1 2 0.5\n0 2 1\n");
}

#[test]
fn reweight_moves_weights_with_curvature() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "k3.edges", "0 1\n1 2\n0 2\n");
    let out = curvkit(
        &["reweight", "--in", "k3.edges", "--out", "r.edges", "--eta", "0.3"],
        tmp.path(),
    );
    assert!(out.status.success());
    // K_3 normalized curvature is 2/3 on every edge: w = 1 - 0.3·(2/3) = 0.8
    let text = std::fs::read_to_string(tmp.path().join("r.edges")).unwrap();
    for line in text.lines() {
        let w: f64 = line.split_whitespace().nth(2).unwrap().parse().unwrap();
        assert!((w - 0.8).abs() < 1e-6, "{line}");
    }
}

#[test]
fn analyze_writes_three_csvs() {
    let tmp = tempfile::tempdir().unwrap();
    // star plus a tail: unique hub, connected
    write(tmp.path(), "g.edges", "0 1\n0 2\n0 3\n0 4\n4 5\n");
    let out = curvkit(
        &["analyze", "--in", "g.edges", "--out-dir", "out", "--bins", "6"],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["distribution.csv", "patterns.csv", "density_ratio.csv"] {
        let text = std::fs::read_to_string(tmp.path().join("out").join(name)).unwrap();
        assert!(text.lines().count() >= 2, "{name} has rows");
    }
    let pat = std::fs::read_to_string(tmp.path().join("out/patterns.csv")).unwrap();
    assert!(pat.starts_with("graph_id,density,p21,p22,p31,p32"));
}

#[test]
fn analyze_reads_tu_dataset_directories() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("TOY");
    std::fs::create_dir_all(&data).unwrap();
    // two triangles as two graphs (directed duplicate rows)
    let mut a_rows = String::new();
    for (u, v) in [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)] {
        a_rows.push_str(&format!("{u}, {v}\n{v}, {u}\n"));
    }
    std::fs::write(data.join("TOY_A.txt"), a_rows).unwrap();
    std::fs::write(data.join("TOY_graph_indicator.txt"), "1\n1\n1\n2\n2\n2\n").unwrap();
    let out = curvkit(
        &["analyze", "--in", "TOY", "--out-dir", "out"],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dr = std::fs::read_to_string(tmp.path().join("out/density_ratio.csv")).unwrap();
    assert_eq!(dr.lines().count(), 3, "two graphs analyzed");
}

#[test]
fn bench_csv_has_fixed_columns() {
    let tmp = tempfile::tempdir().unwrap();
    let out = curvkit(
        &[
            "bench", "--models", "ring", "--n", "24", "--deg", "2", "--reps", "1", "--out",
            "bench.csv",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(tmp.path().join("bench.csv")).unwrap();
    assert!(csv.starts_with("method,model,n,degree,seed,reps,mean_s,std_s,threads,checksum"));
    assert_eq!(csv.lines().count(), 3);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("speedup ring"), "stdout: {stdout}");
}
