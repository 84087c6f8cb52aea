use std::path::Path;

use probid::harness::{self, ExperimentConfig, HarnessError, CHECKPOINTS_FILE, PLOT_FILE, SUMMARY_FILE};

const CONFIG: &str = r#"{
    "mode": "iid",
    "hypotheses": {"grid": {"family": "simple_pmf", "term": ["1", "j"], "symbols": [2, 3]}},
    "target_index": 3,
    "n_max": 3000,
    "checkpoint": {"stride": 1000},
    "seeds": [5, 9, 5]
}"#;

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> =
        std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    names
}

#[test]
fn writes_only_complete_files() {
    let exp = ExperimentConfig::from_json(CONFIG).unwrap().validate().unwrap();
    let res = harness::run_experiment(&exp, 3).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nested/out");
    harness::write_results(&res, &out, true).unwrap();
    assert_eq!(listing(&out), ["checkpoints.csv", "plot.gp", "stats.txt", "summary.csv"]);
    let cps = std::fs::read_to_string(out.join(CHECKPOINTS_FILE)).unwrap();
    let mut lines = cps.lines();
    assert_eq!(lines.next(), Some("run_id,seed,n,guess,changed"));
    assert_eq!(lines.count(), 9);
    let summary = std::fs::read_to_string(out.join(SUMMARY_FILE)).unwrap();
    assert!(summary.starts_with("run_id,seed,final_guess,converged_at,correct\n0,5,"));
    // repeated seeds give repeated rows
    let rows: Vec<&str> = summary.lines().skip(1).collect();
    assert_eq!(rows[0].split_once(',').unwrap().1, rows[2].split_once(',').unwrap().1);
    assert!(std::fs::read_to_string(out.join(PLOT_FILE)).unwrap().contains(CHECKPOINTS_FILE));

    // rewriting replaces files in place
    harness::write_results(&res, &out, false).unwrap();
    assert_eq!(std::fs::read_to_string(out.join(CHECKPOINTS_FILE)).unwrap(), cps);
    assert_eq!(listing(&out).len(), 4);
}

#[test]
fn io_errors_are_reported_with_path() {
    let e = ExperimentConfig::load(Path::new("/nonexistent/config.json")).unwrap_err();
    assert!(matches!(e, HarnessError::Io { .. }));
    assert_eq!(e.exit_code(), 3);
    assert!(e.to_string().contains("/nonexistent/config.json"));

    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let exp = ExperimentConfig::from_json(CONFIG).unwrap().validate().unwrap();
    let res = harness::run_experiment(&exp, 1).unwrap();
    let e = harness::write_results(&res, &blocker.join("out"), false).unwrap_err();
    assert_eq!(e.exit_code(), 3);
}

#[test]
fn malformed_json_points_at_field() {
    let e = ExperimentConfig::from_json(r#"{"mode": "iid", "seeds": {"count": -1}}"#).unwrap_err();
    assert_eq!(e.exit_code(), 2);
    assert_eq!(e.field(), Some("seeds"));
    let e = ExperimentConfig::from_json(r#"{"mode": "bayes"}"#).unwrap_err();
    assert_eq!(e.field(), Some("mode"));
    let e = ExperimentConfig::from_json("{").unwrap_err();
    assert_eq!(e.exit_code(), 2);
}
