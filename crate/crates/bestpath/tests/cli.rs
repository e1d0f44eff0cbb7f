use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn bestpath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bestpath")).args(args).output().unwrap()
}

fn hitters() -> String {
    data("hitters.csv").display().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn select_writes_report_dot_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let (json, dot) = (dir.path().join("report.json"), dir.path().join("forest.dot"));
    let out = bestpath(&["select", "--input", &hitters(), "--target", "Salary", "--json", p(&json), "--dot", p(&dot)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.contains("final model"));

    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["best_step"], 8);
    assert_eq!(report["step_scores"].as_array().unwrap().len(), 8);
    assert_eq!(report["path_steps"][7]["vars"].as_array().unwrap().len(), 18);
    assert_eq!(report["containment"], true);
    let edges = report["forest"]["edges"].as_array().unwrap().len();

    let dot_text = std::fs::read_to_string(&dot).unwrap();
    assert!(dot_text.starts_with("graph {"));
    assert_eq!(dot_text.matches(" -- ").count(), edges);
    assert!(dot_text.contains("\"Salary\" [fillcolor=red]"));
    assert!(dot_text.contains("\"Division\" [fillcolor=yellow]"));

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "select");
    assert_eq!(manifest["input_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(manifest["config"]["seed"], 42);
}

#[test]
fn json_report_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<PathBuf> = (0..2).map(|i| dir.path().join(format!("r{i}.json"))).collect();
    for (i, path) in paths.iter().enumerate() {
        let threads = if i == 0 { "1" } else { "4" };
        let out = bestpath(&["select", "--input", &hitters(), "--target", "Salary", "--threads", threads, "--json", p(path)]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
}

#[test]
fn missing_target_is_a_usage_error() {
    let out = bestpath(&["select", "--input", &hitters()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--target"));
}

#[test]
fn bad_flag_values_are_usage_errors() {
    for args in [
        vec!["select", "--input", "x.csv", "--target", "y", "--penalty", "hqc"],
        vec!["select", "--input", "x.csv", "--target", "y", "--folds", "1"],
        vec!["select", "--input", "x.csv", "--target", "y", "--alpha", "1.5"],
        vec!["compare", "--input", "x.csv", "--target", "y", "--train-frac", "1"],
        vec!["frobnicate"],
    ] {
        assert_eq!(bestpath(&args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn help_exits_cleanly() {
    let out = bestpath(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("compare"));
}

#[test]
fn discrete_target_is_a_data_error() {
    let out = bestpath(&["select", "--input", &hitters(), "--target", "Division"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("Division"));
}

#[test]
fn unknown_target_and_missing_file_are_data_errors() {
    let out = bestpath(&["select", "--input", &hitters(), "--target", "Nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("Nope"));
    let out = bestpath(&["mi", "--input", "/nonexistent.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn singular_design_is_a_numerical_error() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rare.csv");
    // Level `b` occurs once, so the fold holding it trains on an all-zero dummy.
    let mut text = String::from("y,g\n");
    for i in 0..30 {
        let (y, g) = if i == 5 { (100.0, "b") } else { ((i as f64 * 0.37).sin(), "a") };
        text.push_str(&format!("{y},{g}\n"));
    }
    std::fs::write(&csv, text).unwrap();
    let out = bestpath(&["select", "--input", p(&csv), "--target", "y"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn mi_table_csv() {
    let out = bestpath(&["mi", "--input", &hitters(), "--penalty", "aic"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("u,v,kind_pair,i,dof,penalized"));
    assert_eq!(lines.count(), 20 * 19 / 2);
    assert!(text.contains("\nLeague,Division,dd,"));
}

#[test]
fn forest_json_and_isolated_division() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("forest.json");
    let out = bestpath(&["forest", "--input", &hitters(), "--json", p(&json)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("isolated: Division"));
    let f: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(f["nodes"].as_array().unwrap().len(), 20);
    assert_eq!(f["edges"].as_array().unwrap().len(), 18);
    let e = &f["edges"][0];
    assert!(e["u"].is_string() && e["v"].is_string() && e["i"].is_number() && e["penalized"].is_number());
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn compare_csv_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut csvs = Vec::new();
    for threads in ["1", "3"] {
        let out_path = dir.path().join(format!("cmp{threads}.csv"));
        let out = bestpath(&[
            "compare", "--input", &hitters(), "--target", "Salary", "--repeats", "6", "--seed", "7",
            "--threads", threads, "--out", p(&out_path),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        assert!(String::from_utf8_lossy(&out.stdout).contains("6 splits (leakage_free mode)"));
        csvs.push(std::fs::read_to_string(&out_path).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
    let mut lines = csvs[0].lines();
    assert_eq!(lines.next(), Some("split,mse_bestpath,mse_lasso,winner"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.ends_with(",bestpath") || r.ends_with(",lasso") || r.ends_with(",tie")));
}
