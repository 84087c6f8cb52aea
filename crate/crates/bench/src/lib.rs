//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use probid::enumeration::HypothesisList;
use probid::hypotheses::{MarkovHypothesis, MeasureHypothesis, PmfHypothesis};
use probid::Rational;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Ten pmfs over four symbols, each mass a multiple of 1/20.
pub fn ten_pmfs() -> HypothesisList<PmfHypothesis> {
    let weights = [
        [5, 5, 5, 5],
        [8, 4, 4, 4],
        [4, 8, 4, 4],
        [4, 4, 8, 4],
        [4, 4, 4, 8],
        [2, 6, 7, 5],
        [6, 6, 4, 4],
        [4, 4, 6, 6],
        [3, 7, 3, 7],
        [7, 3, 7, 3],
    ];
    HypothesisList::from_hypotheses(
        weights
            .iter()
            .map(|w| PmfHypothesis::finite((1..).zip(w.iter().map(|&k| r(k, 20))).collect()).unwrap())
            .collect(),
    )
}

/// A dense `k`-state chain with rows `(1, 2, ..., k)` rotated per row.
pub fn dense_rows(k: usize) -> Vec<Vec<Rational>> {
    let total = (k * (k + 1) / 2) as i64;
    (0..k).map(|i| (0..k).map(|j| r(((i + j) % k + 1) as i64, total)).collect()).collect()
}

pub fn two_state_chains() -> HypothesisList<MarkovHypothesis> {
    HypothesisList::from_hypotheses(vec![
        MarkovHypothesis::new(vec![1, 2], vec![vec![r(1, 2), r(1, 2)], vec![r(1, 2), r(1, 2)]]).unwrap(),
        MarkovHypothesis::new(vec![1, 2], vec![vec![r(1, 2), r(1, 2)], vec![r(1, 4), r(3, 4)]]).unwrap(),
    ])
}

/// All-1, uniform, and `mu_k` for `k = 2..=5`, over symbols {1, 2}.
pub fn measure_models() -> Arc<HypothesisList<MeasureHypothesis>> {
    let mut models = vec![
        MeasureHypothesis::deterministic(vec![1, 2], 1).unwrap(),
        MeasureHypothesis::iid(PmfHypothesis::finite(vec![(1, r(1, 2)), (2, r(1, 2))]).unwrap()).unwrap(),
    ];
    models.extend((2..=5).map(|k| MeasureHypothesis::mu_k(k, 1).unwrap()));
    Arc::new(HypothesisList::from_hypotheses(models))
}
