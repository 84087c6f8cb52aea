//! Identification in the limit of a finite ergodic Markov chain from one run,
//! and the exact stationary-distribution solver.
//!
//! A candidate chain passes at run length `n` when (a) on every state
//! visited at least `sqrt(n)` times, each transition probability is within
//! `tau(row total)` of the observed conditional frequency, and (b) every
//! stationary mass is within `tau(n)` of the state's visit frequency.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_integer::Integer;

use crate::enumeration::{HypothesisList, ListError};
use crate::exactnum::{cmp_against_bracket, tau, Bracket, Rational, Verdict};
use crate::hypotheses::{HypothesisError, MarkovHypothesis, Symbol};
use crate::iid_identify::{checkpoint_sizes, Guess, GuessTrace, TestOutcome};
use crate::sampling::{ChainSampler, Rng, SamplingError};

fn validate(rows: &[Vec<Rational>]) -> Result<(), HypothesisError> {
    let k = rows.len();
    if k == 0 {
        return Err(HypothesisError::EmptySupport);
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != k {
            return Err(HypothesisError::RaggedRow { row: i, len: row.len(), expected: k });
        }
        if row.iter().any(Rational::is_negative) {
            return Err(HypothesisError::NegativeEntry(i));
        }
        let sum: Rational = row.iter().sum();
        if sum != 1 {
            return Err(HypothesisError::RowSumNotOne { row: i, sum });
        }
    }
    Ok(())
}

fn reachable(adj: &[Vec<usize>], from: usize) -> Vec<Option<usize>> {
    let mut level = vec![None; adj.len()];
    level[from] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        let next = level[u].map(|l| l + 1);
        for &v in &adj[u] {
            if level[v].is_none() {
                level[v] = next;
                queue.push_back(v);
            }
        }
    }
    level
}

/// Irreducible (every state reaches and is reached from state 0) and
/// aperiodic (gcd of cycle lengths, read off BFS levels, is 1).
fn check_ergodic(rows: &[Vec<Rational>]) -> Result<(), HypothesisError> {
    let k = rows.len();
    let adj: Vec<Vec<usize>> = rows.iter().map(|row| (0..k).filter(|&j| row[j].is_positive()).collect()).collect();
    let mut rev = vec![Vec::new(); k];
    for (u, out) in adj.iter().enumerate() {
        for &v in out {
            rev[v].push(u);
        }
    }
    let level = reachable(&adj, 0);
    if let Some(s) = level.iter().position(Option::is_none) {
        return Err(HypothesisError::NotErgodic(format!("state #{s} is unreachable from state #0")));
    }
    if let Some(s) = reachable(&rev, 0).iter().position(Option::is_none) {
        return Err(HypothesisError::NotErgodic(format!("state #0 is unreachable from state #{s}")));
    }
    let mut period = 0usize;
    for (u, out) in adj.iter().enumerate() {
        for &v in out {
            let (lu, lv) = (level[u].unwrap(), level[v].unwrap());
            period = period.gcd(&(lu + 1).abs_diff(lv));
        }
    }
    if period != 1 {
        return Err(HypothesisError::NotErgodic(format!("period {period}")));
    }
    Ok(())
}

/// Exact `pi` with `pi Q = pi`, `sum pi = 1`, by rational elimination on
/// `(Q^T - I)` with the last equation replaced by the normalization row.
pub fn stationary(rows: &[Vec<Rational>]) -> Result<Vec<Rational>, HypothesisError> {
    validate(rows)?;
    check_ergodic(rows)?;
    let k = rows.len();
    // augmented k x (k + 1)
    let mut a: Vec<Vec<Rational>> = (0..k)
        .map(|j| {
            let mut eq: Vec<Rational> = if j + 1 == k {
                vec![Rational::one(); k]
            } else {
                (0..k).map(|i| if i == j { &rows[i][j] - &Rational::one() } else { rows[i][j].clone() }).collect()
            };
            eq.push(if j + 1 == k { Rational::one() } else { Rational::zero() });
            eq
        })
        .collect();
    for col in 0..k {
        let p = (col..k).find(|&r| !a[r][col].is_zero()).ok_or(HypothesisError::SingularSystem)?;
        a.swap(col, p);
        let inv = a[col][col].recip();
        for v in &mut a[col][col..] {
            *v = &*v * &inv;
        }
        let pivot = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *v -= &(&f * p);
                }
            }
        }
    }
    Ok(a.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Visit and transition counts of a run `x_1..x_n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransitionCounts {
    pub n: u64,
    pub visits: BTreeMap<Symbol, u64>,
    pub trans: BTreeMap<(Symbol, Symbol), u64>,
    last: Option<Symbol>,
}

impl TransitionCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, s: Symbol) {
        self.n += 1;
        *self.visits.entry(s).or_insert(0) += 1;
        if let Some(prev) = self.last {
            *self.trans.entry((prev, s)).or_insert(0) += 1;
        }
        self.last = Some(s);
    }

    pub fn visits(&self, s: Symbol) -> u64 {
        self.visits.get(&s).copied().unwrap_or(0)
    }

    pub fn trans(&self, from: Symbol, to: Symbol) -> u64 {
        self.trans.get(&(from, to)).copied().unwrap_or(0)
    }

    /// Transitions observed out of `s`.
    pub fn row_total(&self, s: Symbol) -> u64 {
        self.visits(s) - u64::from(self.last == Some(s))
    }
}

pub fn empirical(run: &[Symbol]) -> TransitionCounts {
    let mut c = TransitionCounts::new();
    for &s in run {
        c.push(s);
    }
    c
}

struct TauCache(HashMap<u64, Bracket>);

impl TauCache {
    fn get(&mut self, n: u64) -> &Bracket {
        self.0.entry(n).or_insert_with(|| tau(n))
    }
}

fn within(dev: &Rational, t: &Bracket) -> bool {
    cmp_against_bracket(dev, t) == Verdict::Below
}

fn test_chain(m: &MarkovHypothesis, c: &TransitionCounts, taus: &mut TauCache) -> TestOutcome {
    if c.visits.keys().any(|&s| m.state_index(s).is_none()) {
        return TestOutcome::Fail;
    }
    let zero = Rational::zero();
    let n = Rational::from(c.n);
    for &x in m.states() {
        let v = c.visits(x);
        // (a) rows visited at least sqrt(n) times
        if v.saturating_mul(v) >= c.n {
            let total = c.row_total(x);
            if total > 0 {
                let t = taus.get(total).clone();
                let tr = Rational::from(total);
                for &y in m.states() {
                    let freq = &Rational::from(c.trans(x, y)) / &tr;
                    if !within(&(&m.transition(x, y, &zero) - &freq).abs(), &t) {
                        return TestOutcome::Fail;
                    }
                }
            }
        }
        // (b) stationary frequency
        let freq = &Rational::from(v) / &n;
        if !within(&(&m.stationary_mass(x, &zero) - &freq).abs(), taus.get(c.n)) {
            return TestOutcome::Fail;
        }
    }
    TestOutcome::Pass
}

pub fn chain_candidate_test(m: &MarkovHypothesis, c: &TransitionCounts) -> TestOutcome {
    assert!(c.n >= 1, "candidate test needs at least one observation");
    test_chain(m, c, &mut TauCache(HashMap::new()))
}

/// Least `i <= min(n, len)` passing [`chain_candidate_test`], else `Undecided`.
pub fn identify_chain(list: &HypothesisList<MarkovHypothesis>, c: &TransitionCounts) -> Result<Guess, ListError> {
    if c.n == 0 {
        return Ok(Guess::Undecided);
    }
    let mut taus = TauCache(HashMap::new());
    for i in 1..=list.scan_bound(c.n) {
        if test_chain(&*list.get(i)?, c, &mut taus) == TestOutcome::Pass {
            return Ok(Guess::Index(i));
        }
    }
    Ok(Guess::Undecided)
}

#[derive(Debug, thiserror::Error)]
pub enum ChainStreamError {
    #[error(transparent)]
    List(#[from] ListError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
}

/// Runs `target` from `x0` and records [`identify_chain`] at every checkpoint.
pub fn identify_chain_stream(
    list: &HypothesisList<MarkovHypothesis>,
    target: &MarkovHypothesis,
    x0: Symbol,
    seed: u64,
    n_max: u64,
    stride: u64,
) -> Result<GuessTrace, ChainStreamError> {
    let mut rng = Rng::new(seed);
    let mut sampler = ChainSampler::new(target, x0)?;
    let mut c = TransitionCounts::new();
    let mut checkpoints = Vec::new();
    for n in checkpoint_sizes(n_max, stride) {
        while c.n < n {
            c.push(sampler.step(&mut rng));
        }
        checkpoints.push((n, identify_chain(list, &c)?));
    }
    Ok(GuessTrace::from_checkpoints(checkpoints))
}

/// `sum_x pi_x * x`.
pub fn ergodic_mean(m: &MarkovHypothesis) -> Rational {
    m.states().iter().zip(m.stationary()).map(|(&x, p)| p * &Rational::from(x)).sum()
}

/// `(1/n) sum_t x_t`; zero for an empty run.
pub fn running_mean(run: &[Symbol]) -> Rational {
    if run.is_empty() {
        return Rational::zero();
    }
    let total: u128 = run.iter().map(|&s| s as u128).sum();
    Rational::from_big(total.into(), (run.len() as u64).into())
}

/// Reference chains: a 2-state chain `A` with `pi = (1/3, 2/3)`, a 2-state
/// chain `B` with `pi = (1/2, 1/2)`, and a 3-state chain.
pub fn reference_chains() -> Vec<MarkovHypothesis> {
    let r = Rational::new;
    vec![
        MarkovHypothesis::new(vec![1, 2], vec![vec![r(1, 2), r(1, 2)], vec![r(1, 4), r(3, 4)]]),
        MarkovHypothesis::new(vec![1, 2], vec![vec![r(1, 2), r(1, 2)], vec![r(1, 2), r(1, 2)]]),
        MarkovHypothesis::new(
            vec![1, 2, 3],
            vec![vec![r(1, 2), r(1, 4), r(1, 4)], vec![r(1, 3), r(1, 3), r(1, 3)], vec![r(0, 1), r(1, 2), r(1, 2)]],
        ),
    ]
    .into_iter()
    .map(|m| m.expect("reference chain is ergodic"))
    .collect()
}
