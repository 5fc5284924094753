use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn feast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_feast")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Writes the 8x8 FD Laplacian and returns the path of A.
fn fd_problem(dir: &TempDir) -> PathBuf {
    let a = dir.path().join("a.mtx");
    let out = feast(&[
        "generate",
        "--kind",
        "fd",
        "--nx",
        "8",
        "--ny",
        "8",
        "--out-a",
        path_str(&a),
    ]);
    assert_eq!(out.status.code(), Some(0));
    a
}

fn schema() -> Value {
    serde_json::from_str(feast_harness::report::RUN_REPORT_SCHEMA).unwrap()
}

fn assert_valid(report: &Value) {
    let validator = jsonschema::validator_for(&schema()).unwrap();
    let errors: Vec<String> = validator.iter_errors(report).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

fn strip_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn demo_report_matches_golden_file() {
    let out = feast(&["solve", "--demo"]);
    assert_eq!(out.status.code(), Some(0));
    let got = stdout_json(&out);
    assert_valid(&got);
    let golden: Value = serde_json::from_str(include_str!("golden/demo_report.json")).expect("golden file parses");
    assert_eq!(strip_timings(got), golden);
}

#[test]
fn solve_is_deterministic_and_thread_independent() {
    let dir = TempDir::new().unwrap();
    let a = fd_problem(&dir);
    let run = |threads: &str| {
        let out = feast(&[
            "solve",
            "--a",
            path_str(&a),
            "--lmin",
            "0",
            "--lmax",
            "1.5",
            "--m0",
            "16",
            "--threads",
            threads,
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        let v = stdout_json(&out);
        assert_valid(&v);
        (v["eigenvalues"].clone(), v["residuals"].clone())
    };
    let first = run("1");
    assert_eq!(first, run("1"));
    assert_eq!(first, run("4"));
    assert!(!first.0.as_array().unwrap().is_empty());
}

#[test]
fn report_and_csv_files() {
    let dir = TempDir::new().unwrap();
    let a = fd_problem(&dir);
    let report = dir.path().join("report.json");
    let csv = dir.path().join("table.csv");
    let out = feast(&[
        "solve",
        "--a",
        path_str(&a),
        "--lmin",
        "0",
        "--lmax",
        "1.5",
        "--m0",
        "16",
        "--out",
        path_str(&report),
        "--csv",
        path_str(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_valid(&v);
    let m = v["eigenvalues"].as_array().unwrap().len();
    let table = std::fs::read_to_string(&csv).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("index,eigenvalue,residual"));
    assert_eq!(lines.count(), m);
    let max = v["residuals"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_f64().unwrap())
        .fold(0.0, f64::max);
    assert_eq!(v["max_residual"].as_f64().unwrap(), max);
}

#[test]
fn exit_codes_follow_status() {
    let dir = TempDir::new().unwrap();
    let a = fd_problem(&dir);
    let a = path_str(&a);
    // 10 eigenvalues below 1.5 with room for only 4
    let out = feast(&["solve", "--a", a, "--lmin", "0", "--lmax", "1.5", "--m0", "4"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["status"], "subspace_saturated");

    let out = feast(&[
        "solve",
        "--a",
        a,
        "--lmin",
        "0",
        "--lmax",
        "1.5",
        "--m0",
        "16",
        "--max-loops",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["status"], "max_loops");

    let out = feast(&["solve", "--a", a, "--lmin", "20", "--lmax", "30", "--m0", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["status"], "no_eigenvalues_in_interval");
}

#[test]
fn input_errors_print_json_and_exit_4() {
    let bad = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/malformed/upper_triangle.mtx");
    let out = feast(&[
        "solve",
        "--a",
        path_str(&bad),
        "--lmin",
        "0",
        "--lmax",
        "1",
        "--m0",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let v = stdout_json(&out);
    assert_eq!(v["error"]["kind"], "parse");
    assert!(v["error"]["message"].as_str().unwrap().contains(":4:"));

    let dir = TempDir::new().unwrap();
    let a = fd_problem(&dir);
    for args in [
        vec!["--lmin", "1", "--lmax", "0", "--m0", "4"],
        vec!["--lmin", "0", "--lmax", "1", "--m0", "0"],
        vec!["--lmin", "0", "--lmax", "1", "--m0", "4", "--ne", "0"],
        vec![
            "--lmin",
            "0",
            "--lmax",
            "1",
            "--m0",
            "4",
            "--class",
            "hermitian",
            "--inner-tol",
            "2",
        ],
    ] {
        let mut full = vec!["solve", "--a", path_str(&a)];
        full.extend(args.iter().copied());
        let out = feast(&full);
        assert_eq!(out.status.code(), Some(4), "{args:?}");
        assert_eq!(stdout_json(&out)["error"]["kind"], "input", "{args:?}");
    }

    let out = feast(&["solve", "--lmin", "0"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stdout_json(&out)["error"]["kind"], "input");
}

#[test]
fn replicated_pencil_reports_doubled_eigenvalues() {
    let dir = TempDir::new().unwrap();
    let a = fd_problem(&dir);
    let a2 = dir.path().join("a2.mtx");
    let out = feast(&["replicate", "--a", path_str(&a), "--k", "2", "--out-a", path_str(&a2)]);
    assert_eq!(out.status.code(), Some(0));
    let solve = |p: &Path, m0: &str| {
        let out = feast(&["solve", "--a", path_str(p), "--lmin", "0", "--lmax", "1.5", "--m0", m0]);
        assert_eq!(out.status.code(), Some(0));
        let v = stdout_json(&out);
        v["eigenvalues"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_f64().unwrap())
            .collect::<Vec<_>>()
    };
    let base = solve(&a, "16");
    let doubled = solve(&a2, "32");
    assert_eq!(doubled.len(), 2 * base.len());
    for (k, l) in base.iter().enumerate() {
        for d in &doubled[2 * k..2 * k + 2] {
            assert!((d - l).abs() <= 1e-10);
        }
    }
}

#[test]
fn generated_fem_pencil_round_trips_through_solve() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("k.mtx"), dir.path().join("m.mtx"));
    let out = feast(&[
        "generate",
        "--kind",
        "fem",
        "--nx",
        "6",
        "--ny",
        "6",
        "--out-a",
        path_str(&a),
        "--out-b",
        path_str(&b),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = feast(&[
        "solve",
        "--a",
        path_str(&a),
        "--b",
        path_str(&b),
        "--lmin",
        "0",
        "--lmax",
        "60",
        "--m0",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let lowest = feast_harness::generators::fem_eigenvalues(6, 6)[0];
    assert!((v["eigenvalues"][0].as_f64().unwrap() - lowest).abs() <= 1e-9 * lowest);
}

#[test]
fn constant_sweep_needs_one_loop_after_the_first_step() {
    let dir = TempDir::new().unwrap();
    let a = fd_problem(&dir);
    let out = feast(&[
        "sweep",
        "--a",
        path_str(&a),
        "--s",
        path_str(&a),
        "--steps",
        "0,0,0,0",
        "--lmin",
        "0",
        "--lmax",
        "1.5",
        "--m0",
        "16",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 4);
    assert_eq!(steps[0]["warm_start"], false);
    for st in &steps[1..] {
        assert_eq!(st["warm_start"], true);
        assert_eq!(st["report"]["loops"], 1);
        assert_valid(&st["report"]);
    }
}

#[test]
fn sweep_with_wrong_sized_perturbation_is_input_error() {
    let dir = TempDir::new().unwrap();
    let a = fd_problem(&dir);
    let s = dir.path().join("s.mtx");
    feast(&[
        "generate",
        "--kind",
        "fd",
        "--nx",
        "3",
        "--ny",
        "3",
        "--out-a",
        path_str(&s),
    ]);
    let out = feast(&[
        "sweep",
        "--a",
        path_str(&a),
        "--s",
        path_str(&s),
        "--steps",
        "0,1e-3",
        "--lmin",
        "0",
        "--lmax",
        "1.5",
        "--m0",
        "16",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stdout_json(&out)["error"]["kind"], "input");
}
