use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_review-calib");

const SMALL: &str = r#"{
  "gen": {
    "n_papers": 300,
    "n_authors": 850,
    "author_multiplicity_targets": [
      {"threshold": 2, "count": 207},
      {"threshold": 5, "count": 23},
      {"threshold": 10, "count": 3},
      {"threshold": 15, "count": 1}
    ]
  },
  "repetitions": 2
}"#;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str], config: Option<&Path>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.env_remove("REVIEW_CALIB_SEED");
    if let Some(path) = config {
        cmd.arg("--config").arg(path);
    }
    cmd.args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn small() -> (TempDir, PathBuf) {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "small.json", SMALL);
    (dir, path)
}

#[test]
fn csv_has_one_row_per_case_and_method() {
    let (_dir, cfg) = small();
    let text = stdout(&run(&["--format", "csv", "--cases", "Base,NoBias"], Some(&cfg)));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "case,method,mean_rmse,sd_rmse");
    assert_eq!(lines.len(), 1 + 2 * 4);
    assert!(lines[1..].iter().all(|l| l.starts_with("Base,") || l.starts_with("NoBias,")));
}

#[test]
fn json_and_table_formats() {
    let (_dir, cfg) = small();
    let json = stdout(&run(&["--format", "json", "--cases", "BigBias", "--reps", "1"], Some(&cfg)));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&json).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["sd_rmse"] == 0.0 && r["mean_rmse"].as_f64().unwrap() > 0.0));

    let table = stdout(&run(&["--format", "table"], Some(&cfg)));
    assert!(table.contains("1. Average Scores (Benchmark)"));
    assert!(table.contains("BigVariance"));
    assert_eq!(table.matches('*').count(), 5 + 1);
}

#[test]
fn seed_controls_output_and_env_overrides_flag() {
    let (_dir, cfg) = small();
    let a = stdout(&run(&["--format", "csv", "--seed", "3"], Some(&cfg)));
    let b = stdout(&run(&["--format", "csv", "--seed", "3"], Some(&cfg)));
    let c = stdout(&run(&["--format", "csv", "--seed", "4"], Some(&cfg)));
    assert_eq!(a, b);
    assert_ne!(a, c);

    let env = Command::new(BIN)
        .env("REVIEW_CALIB_SEED", "3")
        .args(["--format", "csv", "--seed", "4", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(stdout(&env), a);
}

#[test]
fn worker_count_does_not_change_results() {
    let (_dir, cfg) = small();
    let one = stdout(&run(&["--format", "csv", "--workers", "1"], Some(&cfg)));
    let four = stdout(&run(&["--format", "csv", "--workers", "4"], Some(&cfg)));
    assert_eq!(one, four);
}

#[test]
fn comparison_source_and_blend_flags_take_effect() {
    let (_dir, cfg) = small();
    let scores = stdout(&run(&["--format", "csv", "--comparisons", "scores"], Some(&cfg)));
    let rankings = stdout(&run(&["--format", "csv", "--comparisons", "rankings"], Some(&cfg)));
    assert_ne!(scores, rankings);
    let avg_rows = |t: &str| t.lines().filter(|l| l.contains("Average")).map(String::from).collect::<Vec<_>>();
    assert_eq!(avg_rows(&scores), avg_rows(&rankings));

    let blended = stdout(&run(&["--format", "csv", "--blend", "0"], Some(&cfg)));
    assert_ne!(blended, scores);
}

#[test]
fn writes_to_out_file() {
    let (dir, cfg) = small();
    let out = dir.path().join("results.csv");
    let printed = run(&["--format", "csv", "--out", out.to_str().unwrap()], Some(&cfg));
    assert!(stdout(&printed).is_empty());
    let piped = stdout(&run(&["--format", "csv"], Some(&cfg)));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), piped);
}

#[test]
fn configuration_errors_exit_with_2() {
    let (dir, cfg) = small();
    for args in [
        vec!["--cases", "Huge"],
        vec!["--format", "xml"],
        vec!["--comparisons", "votes"],
        vec!["--workers", "0"],
        vec!["--reps", "0"],
        vec!["--blend", "1.5"],
        vec!["--no-such-flag"],
    ] {
        let out = run(&args, Some(&cfg));
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
        assert!(!out.stderr.is_empty());
    }
    let bad_seed = Command::new(BIN).env("REVIEW_CALIB_SEED", "minus one").arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(bad_seed.status.code(), Some(2));

    let bad_json = write(&dir, "bad.json", "{\"repetitions\": ");
    assert_eq!(run(&[], Some(&bad_json)).status.code(), Some(2));
}

#[test]
fn generation_failure_exits_with_3() {
    let dir = TempDir::new().unwrap();
    let starved = SMALL.replacen(
        "\"n_papers\": 300,",
        "\"n_papers\": 300, \"n_reviewers\": 10, \"reviewer_capacity_dist\": {\"values\": [3], \"weights\": [1.0]},",
        1,
    );
    let cfg = write(&dir, "starved.json", &starved);
    let out = run(&[], Some(&cfg));
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn io_failures_exit_with_4() {
    let (dir, cfg) = small();
    let missing = dir.path().join("absent.json");
    assert_eq!(run(&[], Some(&missing)).status.code(), Some(4));

    let unwritable = dir.path().join("no-dir").join("out.csv");
    let out = run(&["--reps", "1", "--cases", "Base", "--out", unwritable.to_str().unwrap()], Some(&cfg));
    assert_eq!(out.status.code(), Some(4));
}
