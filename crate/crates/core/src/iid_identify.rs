//! Identification in the limit of a probability mass function from i.i.d.
//! draws.
//!
//! At sample size `n` the identifier scans candidates `i = 1..=min(n, len)`
//! and outputs the least one whose masses agree with the empirical
//! frequencies to within `tau(n)` on every symbol that was either observed or
//! lies in the candidate's high-mass head. By the strong law and the
//! fluctuation bound, the target passes for all large `n` almost surely while
//! every candidate that differs from it eventually fails.

use std::collections::BTreeSet;
use std::fmt;

use crate::enumeration::{HypothesisList, ListError};
use crate::exactnum::{cmp_against_bracket, tau, Bracket, Rational, Verdict};
use crate::hypotheses::{PmfHypothesis, Symbol};
use crate::sampling::{IidSampler, Rng, SamplePrefix};

/// Identifier output at one checkpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Guess {
    /// No candidate passed.
    Undecided,
    /// 1-based list index (or interleaved position, for measures).
    Index(u64),
}

impl Guess {
    /// Numeric encoding with `0` for undecided.
    pub fn code(self) -> u64 {
        match self {
            Guess::Undecided => 0,
            Guess::Index(i) => i,
        }
    }

    pub fn index(self) -> Option<u64> {
        match self {
            Guess::Undecided => None,
            Guess::Index(i) => Some(i),
        }
    }
}

impl fmt::Display for Guess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guess::Undecided => f.write_str("undecided"),
            Guess::Index(i) => write!(f, "{i}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestOutcome {
    Pass,
    Fail,
}

/// Guesses recorded at increasing sample sizes.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GuessTrace {
    pub checkpoints: Vec<(u64, Guess)>,
    /// Least checkpoint from which every recorded guess is the same decided
    /// index.
    pub converged_at: Option<u64>,
}

impl GuessTrace {
    pub fn from_checkpoints(checkpoints: Vec<(u64, Guess)>) -> Self {
        debug_assert!(checkpoints.windows(2).all(|w| w[0].0 < w[1].0));
        let converged_at = match checkpoints.last() {
            Some(&(_, last @ Guess::Index(_))) => {
                let start = checkpoints.iter().rposition(|&(_, g)| g != last).map_or(0, |k| k + 1);
                Some(checkpoints[start].0)
            }
            _ => None,
        };
        GuessTrace { checkpoints, converged_at }
    }

    pub fn final_guess(&self) -> Guess {
        self.checkpoints.last().map_or(Guess::Undecided, |&(_, g)| g)
    }

    /// Whether checkpoint `k` differs from its predecessor (the first
    /// checkpoint is compared against `Undecided`).
    pub fn changed(&self, k: usize) -> bool {
        let prev = if k == 0 { Guess::Undecided } else { self.checkpoints[k - 1].1 };
        self.checkpoints[k].1 != prev
    }

    /// The guess is the same at every checkpoint with `n >= from`.
    pub fn stable_from(&self, from: u64) -> bool {
        let mut tail = self.checkpoints.iter().filter(|&&(n, _)| n >= from).map(|&(_, g)| g);
        match tail.next() {
            Some(first) => tail.all(|g| g == first),
            None => true,
        }
    }
}

/// `stride, 2*stride, ..., <= n_max`.
pub fn checkpoint_sizes(n_max: u64, stride: u64) -> impl Iterator<Item = u64> {
    assert!(stride >= 1, "stride must be positive");
    (1..=n_max / stride).map(move |k| k * stride)
}

/// Symbols with positive count.
pub fn observed_support(s: &SamplePrefix) -> BTreeSet<Symbol> {
    s.counts().keys().copied().collect()
}

/// Least `m` with `(1 - sum_{j <= m} q(a_j))^2 * n < 1`, i.e. tail mass
/// below `1/sqrt(n)`.
pub fn mass_cutoff(q: &PmfHypothesis, n: u64) -> u64 {
    assert!(n >= 1, "sample size must be positive");
    let n = Rational::from(n);
    let cap = q.support_len();
    let mut m = 0;
    loop {
        if cap == Some(m) {
            return m;
        }
        let tail = Rational::one() - q.prefix_mass(m, &Rational::zero());
        if &(&tail * &tail) * &n < Rational::one() {
            return m;
        }
        m += 1;
    }
}

/// Symbols the candidate test inspects: observed symbols plus the head
/// `a_1..a_m` of `q`'s support.
pub fn cutoff_set(q: &PmfHypothesis, s: &SamplePrefix) -> BTreeSet<Symbol> {
    let mut set = observed_support(s);
    let m = mass_cutoff(q, s.len().max(1));
    set.extend((1..=m).filter_map(|j| q.symbol_at(j)));
    set
}

/// Evaluation precision used for `q`; exact hypotheses are queried exactly.
fn precision(q: &PmfHypothesis) -> Rational {
    if q.is_exact() {
        Rational::zero()
    } else {
        Rational::pow2(-40)
    }
}

fn test_against(q: &PmfHypothesis, s: &SamplePrefix, t: &Bracket) -> TestOutcome {
    let n = s.len();
    let eps = precision(q);
    let nr = Rational::from(n);
    for a in cutoff_set(q, s) {
        let freq = &Rational::from(s.count(a)) / &nr;
        // the approximation error counts against the candidate
        let dev = &(&q.eval(a, &eps) - &freq).abs() + &eps;
        if cmp_against_bracket(&dev, t) != Verdict::Below {
            return TestOutcome::Fail;
        }
    }
    TestOutcome::Pass
}

/// Pass iff every inspected symbol's mass is strictly within `tau(n)` of its
/// empirical frequency. A comparison that lands inside the bracket fails.
pub fn candidate_test(q: &PmfHypothesis, s: &SamplePrefix) -> TestOutcome {
    assert!(!s.is_empty(), "candidate test needs at least one observation");
    test_against(q, s, &tau(s.len()))
}

/// Least `i <= min(n, len)` passing [`candidate_test`], else `Undecided`.
pub fn identify_step(list: &HypothesisList<PmfHypothesis>, s: &SamplePrefix) -> Result<Guess, ListError> {
    let n = s.len();
    if n == 0 {
        return Ok(Guess::Undecided);
    }
    let t = tau(n);
    for i in 1..=list.scan_bound(n) {
        if test_against(&*list.get(i)?, s, &t) == TestOutcome::Pass {
            return Ok(Guess::Index(i));
        }
    }
    Ok(Guess::Undecided)
}

/// Draws one growing sample from `target` and records [`identify_step`] at
/// every checkpoint.
pub fn identify_stream(
    list: &HypothesisList<PmfHypothesis>,
    target: &PmfHypothesis,
    seed: u64,
    n_max: u64,
    stride: u64,
) -> Result<GuessTrace, ListError> {
    let mut rng = Rng::new(seed);
    let mut sampler = IidSampler::new(target);
    let mut s = SamplePrefix::new();
    let mut checkpoints = Vec::new();
    for n in checkpoint_sizes(n_max, stride) {
        while s.len() < n {
            s.push(sampler.sample(&mut rng));
        }
        checkpoints.push((n, identify_step(list, &s)?));
    }
    Ok(GuessTrace::from_checkpoints(checkpoints))
}

/// `max |p(a) - #a/n|` over observed symbols and the finite support of `p`.
pub fn max_deviation(p: &PmfHypothesis, s: &SamplePrefix) -> Rational {
    let n = Rational::from(s.len().max(1));
    let mut symbols = observed_support(s);
    if let Some(m) = p.finite_masses() {
        symbols.extend(m.into_iter().map(|(a, _)| a));
    }
    symbols
        .into_iter()
        .map(|a| (&p.eval_exact(a) - &(&Rational::from(s.count(a)) / &n)).abs())
        .max()
        .unwrap_or_else(Rational::zero)
}
