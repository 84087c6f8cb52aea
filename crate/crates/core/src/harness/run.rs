use rayon::prelude::*;

use super::config::{Experiment, Plan};
use super::HarnessError;
use crate::enumeration::HypothesisList;
use crate::hypotheses::FromSpec;
use crate::iid_identify::{identify_stream, Guess, GuessTrace};
use crate::markov_identify::identify_chain_stream;
use crate::measure_identify::{MeasureIdentifier, MeasureSource};
use crate::predict::{black_swan_demo, BlackSwanReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub n: u64,
    pub guess: Guess,
    pub changed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunRecord {
    pub run_id: u64,
    pub seed: u64,
    pub checkpoints: Vec<Checkpoint>,
    pub converged_at: Option<u64>,
    pub final_guess: Guess,
    /// Whether the final guess is the least index equal to the target;
    /// `None` when no target was declared.
    pub correct: Option<bool>,
}

impl RunRecord {
    fn from_trace(
        run_id: u64,
        seed: u64,
        trace: &GuessTrace,
        correct: impl Fn(Guess) -> bool,
        has_target: bool,
    ) -> Self {
        let checkpoints = (0..trace.checkpoints.len())
            .map(|k| {
                let (n, guess) = trace.checkpoints[k];
                Checkpoint { n, guess, changed: trace.changed(k) }
            })
            .collect();
        let final_guess = trace.final_guess();
        RunRecord {
            run_id,
            seed,
            checkpoints,
            converged_at: trace.converged_at,
            final_guess,
            correct: has_target.then(|| correct(final_guess)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub runs: usize,
    pub converged: usize,
    pub fraction_converged: f64,
    pub correct: Option<usize>,
    pub fraction_correct: Option<f64>,
    /// Lower median of `converged_at` over converged runs.
    pub median_converged_at: Option<u64>,
}

/// Aggregate over runs.
pub fn summarize(records: &[RunRecord]) -> Result<Summary, HarnessError> {
    if records.is_empty() {
        return Err(HarnessError::EmptyInput);
    }
    let runs = records.len();
    let mut conv: Vec<u64> = records.iter().filter_map(|r| r.converged_at).collect();
    conv.sort_unstable();
    let converged = conv.len();
    let median_converged_at = (!conv.is_empty()).then(|| conv[(conv.len() - 1) / 2]);
    let judged: Vec<bool> = records.iter().filter_map(|r| r.correct).collect();
    let correct = (!judged.is_empty()).then(|| judged.iter().filter(|&&c| c).count());
    Ok(Summary {
        runs,
        converged,
        fraction_converged: converged as f64 / runs as f64,
        correct,
        fraction_correct: correct.map(|c| c as f64 / judged.len() as f64),
        median_converged_at,
    })
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub records: Vec<RunRecord>,
    pub summary: Option<Summary>,
    pub demo: Option<BlackSwanReport>,
}

fn least_equal<H: FromSpec>(list: &HypothesisList<H>, target: u64) -> Result<u64, HarnessError> {
    let t = list.get(target).map_err(|e| HarnessError::Run(e.to_string()))?;
    Ok(list
        .minimal_equal_index(&t, target)
        .map_err(|e| HarnessError::Run(e.to_string()))?
        .expect("the target equals itself"))
}

fn run_one(exp: &Experiment, run_id: u64, seed: u64) -> Result<RunRecord, HarnessError> {
    let fail = |e: &dyn std::fmt::Display| HarnessError::Run(format!("run {run_id} (seed {seed}): {e}"));
    match &exp.plan {
        Plan::Iid { list, target } => {
            let want = least_equal(list, *target)?;
            let t = list.get(*target).map_err(|e| fail(&e))?;
            let trace = identify_stream(list, &t, seed, exp.n_max, exp.stride).map_err(|e| fail(&e))?;
            Ok(RunRecord::from_trace(run_id, seed, &trace, |g| g == Guess::Index(want), true))
        }
        Plan::Markov { list, target, start } => {
            let want = least_equal(list, *target)?;
            let t = list.get(*target).map_err(|e| fail(&e))?;
            let trace = identify_chain_stream(list, &t, *start, seed, exp.n_max, exp.stride).map_err(|e| fail(&e))?;
            Ok(RunRecord::from_trace(run_id, seed, &trace, |g| g == Guess::Index(want), true))
        }
        Plan::Measure { list, target, fixed, estimator, stage_multiplier } => {
            let source = match (fixed, target) {
                (Some(x), _) => MeasureSource::Fixed(x.clone()),
                (None, Some(t)) => {
                    MeasureSource::Sample { measure: (*list.inner().get(*t).map_err(|e| fail(&e))?).clone(), seed }
                }
                (None, None) => unreachable!("validated"),
            };
            let want = target.map(|t| least_equal(list.inner(), t)).transpose()?;
            let sizes: Vec<u64> = crate::iid_identify::checkpoint_sizes(exp.n_max, exp.stride).collect();
            let x = match sizes.last() {
                Some(&last) => source.take(last).map_err(|e| fail(&e))?,
                None => Vec::new(),
            };
            let mut ident = MeasureIdentifier::new(list, estimator, x)
                .map_err(|e| fail(&e))?
                .with_stage_multiplier(*stage_multiplier);
            let checkpoints = sizes
                .into_iter()
                .map(|n| Ok((n, Guess::Index(ident.step(n).map_err(|e| fail(&e))?))))
                .collect::<Result<Vec<_>, HarnessError>>()?;
            let trace = GuessTrace::from_checkpoints(checkpoints);
            let correct = |g: Guess| match (g, want) {
                (Guess::Index(pos), Some(w)) => list.base_index(pos) == w,
                _ => false,
            };
            Ok(RunRecord::from_trace(run_id, seed, &trace, correct, want.is_some()))
        }
        Plan::Demo { .. } => unreachable!("demo has no runs"),
    }
}

/// Runs every seed (up to `jobs` at a time) and aggregates. Records come
/// back ordered by `run_id`, whatever the parallelism.
pub fn run_experiment(exp: &Experiment, jobs: usize) -> Result<ExperimentResult, HarnessError> {
    if let Plan::Demo { n_switch } = exp.plan {
        let report = black_swan_demo(n_switch).map_err(|e| HarnessError::Run(e.to_string()))?;
        return Ok(ExperimentResult { records: Vec::new(), summary: None, demo: Some(report) });
    }
    // a fixed input makes every seed identical: one run
    let seeds: Vec<u64> = match &exp.plan {
        Plan::Measure { fixed: Some(_), .. } => exp.seeds[..1].to_vec(),
        _ => exp.seeds.clone(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| HarnessError::Run(e.to_string()))?;
    let mut records = pool.install(|| {
        seeds.par_iter().enumerate().map(|(i, &seed)| run_one(exp, i as u64, seed)).collect::<Result<Vec<_>, _>>()
    })?;
    records.sort_by_key(|r| r.run_id);
    let summary = summarize(&records)?;
    Ok(ExperimentResult { records, summary: Some(summary), demo: None })
}
