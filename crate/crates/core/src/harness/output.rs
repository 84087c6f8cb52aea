use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use super::run::{ExperimentResult, RunRecord, Summary};
use super::HarnessError;

pub const CHECKPOINTS_FILE: &str = "checkpoints.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const STATS_FILE: &str = "stats.txt";
pub const PLOT_FILE: &str = "plot.gp";
pub const DEMO_TEXT_FILE: &str = "black_swan.txt";
pub const DEMO_CSV_FILE: &str = "black_swan.csv";

pub fn checkpoints_csv(records: &[RunRecord]) -> String {
    let mut out = String::from("run_id,seed,n,guess,changed\n");
    for r in records {
        for c in &r.checkpoints {
            writeln!(out, "{},{},{},{},{}", r.run_id, r.seed, c.n, c.guess.code(), u8::from(c.changed)).unwrap();
        }
    }
    out
}

pub fn summary_csv(records: &[RunRecord]) -> String {
    let mut out = String::from("run_id,seed,final_guess,converged_at,correct\n");
    for r in records {
        let conv = r.converged_at.map(|n| n.to_string()).unwrap_or_default();
        let correct = r.correct.map(|c| u8::from(c).to_string()).unwrap_or_default();
        writeln!(out, "{},{},{},{},{}", r.run_id, r.seed, r.final_guess.code(), conv, correct).unwrap();
    }
    out
}

pub fn stats_text(s: &Summary) -> String {
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    format!(
        "runs {}\nconverged {} ({:.4})\ncorrect {} ({})\nmedian converged_at {}\n",
        s.runs,
        s.converged,
        s.fraction_converged,
        opt(s.correct.map(|c| c.to_string())),
        opt(s.fraction_correct.map(|f| format!("{f:.4}"))),
        opt(s.median_converged_at.map(|n| n.to_string())),
    )
}

/// Gnuplot script drawing each run's guess against `n`.
pub fn plot_script(records: &[RunRecord]) -> String {
    let last = records.len().saturating_sub(1);
    format!(
        "set datafile separator ','\n\
         set xlabel 'n'\n\
         set ylabel 'guess (0 = undecided)'\n\
         set key off\n\
         set term pngcairo size 900,600\n\
         set output 'guesses.png'\n\
         plot for [r=0:{last}] '{CHECKPOINTS_FILE}' every ::1 using 3:($1 == r ? $4 : 1/0) with steps\n"
    )
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so the path only ever holds a complete file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), HarnessError> {
    let io = |source| HarnessError::Io { path: path.to_owned(), source };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Writes the result files into `dir`, creating it if needed; returns the
/// paths written.
pub fn write_results(result: &ExperimentResult, dir: &Path, plot: bool) -> Result<Vec<PathBuf>, HarnessError> {
    std::fs::create_dir_all(dir).map_err(|source| HarnessError::Io { path: dir.to_owned(), source })?;
    let mut files: Vec<(&str, String)> = Vec::new();
    if let Some(report) = &result.demo {
        files.push((DEMO_TEXT_FILE, report.render_text()));
        files.push((DEMO_CSV_FILE, report.render_csv()));
    } else {
        files.push((CHECKPOINTS_FILE, checkpoints_csv(&result.records)));
        files.push((SUMMARY_FILE, summary_csv(&result.records)));
        if let Some(s) = &result.summary {
            files.push((STATS_FILE, stats_text(s)));
        }
        if plot {
            files.push((PLOT_FILE, plot_script(&result.records)));
        }
    }
    files
        .into_iter()
        .map(|(name, text)| {
            let p = dir.join(name);
            write_atomic(&p, &text)?;
            Ok(p)
        })
        .collect()
}
