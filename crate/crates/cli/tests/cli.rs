use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn probid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_probid")).args(args).output().expect("binary runs")
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL: &str = r#"{
    "mode": "markov",
    "hypotheses": {"inline": [
        {"family": "markov", "states": [1, 2], "rows": [["1/2", "1/2"], ["1/2", "1/2"]]},
        {"family": "markov", "states": [1, 2], "rows": [["1/2", "1/2"], ["1/4", "3/4"]]}
    ]},
    "target_index": 2,
    "n_max": 8000,
    "checkpoint": {"stride": 2000},
    "seeds": {"count": 6, "base": 100}
}"#;

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn stationary_prints_fractions() {
    let o = probid(&["stationary", "--chain", configs().join("chain_a.json").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "1\t1/3\n2\t2/3\n");
    let o = probid(&["stationary", "--chain", configs().join("chain_three.json").to_str().unwrap()]);
    assert_eq!(stdout(&o), "1\t1/4\n2\t3/8\n3\t3/8\n");
}

#[test]
fn stationary_rejects_bad_chains() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("chain.json");
    std::fs::write(&p, r#"{"states": [1, 2], "rows": [["1", "0"], ["0", "1"]]}"#).unwrap();
    let o = probid(&["stationary", "--chain", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&p, r#"{"states": [1, 2], "rows": [["1/2", "1/3"], ["0", "1"]]}"#).unwrap();
    assert_eq!(probid(&["stationary", "--chain", p.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(probid(&["stationary", "--chain", "/nonexistent.json"]).status.code(), Some(3));
}

#[test]
fn black_swan_demo() {
    let o = probid(&["demo", "black-swan"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("history: aaaaa\n"));
    assert!(out.contains("measure,history,history_mass,next,probability\n"));
    assert!(out.contains("mu1,aaaaa,1,a,1\n"));
    assert!(out.contains("mu0,aaaaa,1,a,1/2\nmu0,aaaaa,1,b,1/2\n"));
    let o = probid(&["demo", "black-swan", "--switch", "2"]);
    assert!(stdout(&o).contains("mu0,aa,1,b,1/2"));
    assert_eq!(probid(&["demo", "black-swan", "--switch", "0"]).status.code(), Some(2));
}

#[test]
fn validate_reports_field_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write_config(dir.path(), SMALL);
    let o = probid(&["validate", "--config", ok.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("ok: markov experiment, 6 seed(s)"));

    let bad = write_config(dir.path(), &SMALL.replace("\"stride\": 2000", "\"stride\": 0"));
    let o = probid(&["validate", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("checkpoint.stride"));

    let o = probid(&["validate", "--config", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));

    for f in [
        "iid_ten_pmfs",
        "iid_min_index",
        "markov_two_chains",
        "measure_black_swan",
        "measure_alternating",
        "demo_black_swan",
    ] {
        let p = configs().join(format!("{f}.json"));
        assert!(probid(&["validate", "--config", p.to_str().unwrap()]).status.success(), "{f}");
    }
}

#[test]
fn run_is_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let mut outputs = Vec::new();
    for (name, jobs) in [("a", "1"), ("b", "1"), ("c", "8")] {
        let out = dir.path().join(name);
        let o = probid(&["run", "--config", cfg.to_str().unwrap(), "--jobs", jobs, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        let read = |f: &str| std::fs::read(out.join(f)).unwrap();
        outputs.push((read("checkpoints.csv"), read("summary.csv")));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    let cps = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert!(cps.starts_with("run_id,seed,n,guess,changed\n0,100,2000,"));
    assert_eq!(cps.lines().count(), 1 + 6 * 4);
    let summary = String::from_utf8(outputs[0].1.clone()).unwrap();
    assert!(summary.starts_with("run_id,seed,final_guess,converged_at,correct\n"));
    assert!(summary.lines().skip(1).all(|l| l.split(',').nth(2) == Some("2")));
}

#[test]
fn run_writes_plot_script_and_demo_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let o = probid(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--emit-plot-script"]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(out.join("plot.gp")).unwrap().contains("checkpoints.csv"));

    let demo = dir.path().join("demo");
    let p = configs().join("demo_black_swan.json");
    let o = probid(&["run", "--config", p.to_str().unwrap(), "--out", demo.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(demo.join("black_swan.csv")).unwrap().contains("mu0,aaaaa,1,b,1/2"));
}

#[test]
fn run_fails_on_unwritable_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let blocker = dir.path().join("blocker");
    std::fs::write(&blocker, "").unwrap();
    let o = probid(&["run", "--config", cfg.to_str().unwrap(), "--out", blocker.join("x").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(probid(&["run"]).status.code(), Some(2));
    assert_eq!(probid(&["run", "--config", "x", "--jobs", "0"]).status.code(), Some(2));
}
