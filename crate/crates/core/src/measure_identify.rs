//! Identification in the limit of a computable measure for which the data
//! sequence is typical.
//!
//! The randomness deficiency of a prefix under `mu` is
//! `sigma(j) = log2 1/mu(x_1..x_j) - K(x_1..x_j)`; a sequence is typical for
//! `mu` exactly when `sigma` stays bounded. With `K` replaced by the stage-`n`
//! estimate `K̂ⁿ`, `sigma` is approximated from below and nondecreasing in the
//! stage. At stage `n` the identifier outputs the least interleaved position
//! `i <= n` with `max_{j <= n} sigma_i^n(j) < i`, or `1` if there is none.
//! Because every hypothesis recurs at ever larger positions, one whose
//! deficiency is bounded eventually clears its position for good.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;

use crate::complexity::{ComplexityEstimator, KhatError, PrefixKhat};
use crate::enumeration::{InterleavedList, ListError};
use crate::exactnum::{log2_bracket, Rational};
use crate::hypotheses::{MeasureHypothesis, Symbol};
use crate::iid_identify::{checkpoint_sizes, Guess, GuessTrace};
use crate::sampling::{draw_from_measure, SamplingError};

/// Fixed-point scale of the log-mass endpoints (`2^-96` grid).
const SCALE_BITS: u32 = 96;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeasureError {
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Khat(#[from] KhatError),
    #[error(transparent)]
    List(#[from] ListError),
    #[error("input sequence has {got} symbols, {needed} needed")]
    SequenceTooShort { needed: u64, got: u64 },
}

/// A deficiency value; `Infinite` when the prefix has zero mass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sigma {
    Finite(Rational),
    Infinite,
}

impl PartialOrd for Sigma {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Sigma {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Sigma::Finite(a), Sigma::Finite(b)) => a.cmp(b),
            (Sigma::Finite(_), Sigma::Infinite) => Ordering::Less,
            (Sigma::Infinite, Sigma::Finite(_)) => Ordering::Greater,
            (Sigma::Infinite, Sigma::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sigma::Finite(v) => write!(f, "{v}"),
            Sigma::Infinite => f.write_str("inf"),
        }
    }
}

/// Upper endpoint of the `log2 1/mu` bracket.
fn log_inv_hi(mass: &Rational) -> Rational {
    log2_bracket(&mass.recip()).hi().clone()
}

/// `sigma_mu^n(j)`: upper endpoint of `log2 1/mu(x_1..x_j)` minus
/// `K̂ⁿ(x_1..x_j)`.
pub fn sigma_stage(
    mu: &MeasureHypothesis,
    x: &[Symbol],
    j: usize,
    stage: u64,
    est: &ComplexityEstimator,
) -> Result<Sigma, KhatError> {
    let prefix = &x[..j];
    let mass = mu.eval_exact(prefix);
    if mass.is_zero() {
        return Ok(Sigma::Infinite);
    }
    let k = est.khat(prefix, stage)?;
    Ok(Sigma::Finite(&log_inv_hi(&mass) - &Rational::from(k)))
}

/// Per-hypothesis log-mass endpoints over the prefixes of the input, scaled
/// to integers on the `2^-96` grid (rounded up).
struct LogMasses {
    masses: Vec<Rational>,
    /// first `j >= 1` with zero mass
    first_zero: Option<usize>,
    scaled: Vec<u128>,
}

impl LogMasses {
    fn new(mu: &MeasureHypothesis, x: &[Symbol]) -> Self {
        let masses = mu.prefix_masses(x);
        let first_zero = masses.iter().position(Rational::is_zero);
        LogMasses { masses, first_zero, scaled: vec![0] }
    }

    /// Scaled endpoints for `j = 0..=upto`; `None` if some prefix up to
    /// `upto` has zero mass.
    fn upto(&mut self, upto: usize) -> Option<&[u128]> {
        if self.first_zero.is_some_and(|z| z <= upto) {
            return None;
        }
        while self.scaled.len() <= upto {
            let hi = log_inv_hi(&self.masses[self.scaled.len()]);
            let v = (&hi * &Rational::pow2(i64::from(SCALE_BITS))).ceil();
            self.scaled.push(v.to_u128().expect("log-mass fits the fixed-point grid"));
        }
        Some(&self.scaled[..=upto])
    }
}

/// Runs the stage-`n` identification step over prefixes of one fixed
/// sequence, caching per-hypothesis masses and per-model code lengths.
pub struct MeasureIdentifier<'a> {
    list: &'a InterleavedList<MeasureHypothesis>,
    khat: PrefixKhat<'a>,
    logs: HashMap<u64, LogMasses>,
    stage_multiplier: u64,
}

impl<'a> MeasureIdentifier<'a> {
    pub fn new(
        list: &'a InterleavedList<MeasureHypothesis>,
        est: &'a ComplexityEstimator,
        x: Vec<Symbol>,
    ) -> Result<Self, MeasureError> {
        Ok(MeasureIdentifier { list, khat: PrefixKhat::new(est, x)?, logs: HashMap::new(), stage_multiplier: 1 })
    }

    /// Use complexity stage `multiplier * n` at sample size `n` (default 1).
    pub fn with_stage_multiplier(mut self, multiplier: u64) -> Self {
        assert!(multiplier >= 1, "stage multiplier must be positive");
        self.stage_multiplier = multiplier;
        self
    }

    pub fn sequence(&self) -> &[Symbol] {
        self.khat.sequence()
    }

    /// Scaled `max_{1 <= j <= n} sigma_b^n(j)`, or `None` for `+inf`.
    fn max_sigma(&mut self, base: u64, n: usize, khat: &[u64]) -> Result<Option<i128>, MeasureError> {
        if !self.logs.contains_key(&base) {
            let mu = self.list.inner().get(base)?;
            self.logs.insert(base, LogMasses::new(&mu, self.khat.sequence()));
        }
        let Some(logs) = self.logs.get_mut(&base).expect("inserted").upto(n) else {
            return Ok(None);
        };
        Ok((1..=n).map(|j| logs[j] as i128 - (i128::from(khat[j]) << SCALE_BITS)).max())
    }

    /// Guess at stage `n`, using the prefix `x_1..x_n`.
    pub fn step(&mut self, n: u64) -> Result<u64, MeasureError> {
        let len = self.sequence().len() as u64;
        if n > len {
            return Err(MeasureError::SequenceTooShort { needed: n, got: len });
        }
        let nu = n as usize;
        let khat = self.khat.stage(n.saturating_mul(self.stage_multiplier), nu)?;
        let base_len = self.list.inner().len();
        let mut memo: HashMap<u64, Option<i128>> = HashMap::new();
        for pos in 1..=n {
            let base = self.list.base_index(pos);
            if base_len.is_some_and(|l| base > l) {
                continue;
            }
            let s = match memo.get(&base) {
                Some(&s) => s,
                None => {
                    let s = self.max_sigma(base, nu, &khat)?;
                    memo.insert(base, s);
                    s
                }
            };
            if s.is_some_and(|s| s < (i128::from(pos) << SCALE_BITS)) {
                return Ok(pos);
            }
        }
        Ok(1)
    }
}

/// Stage-`n` output on the prefix `x_1..x_n` of `x`.
pub fn identify_measure_step(
    list: &InterleavedList<MeasureHypothesis>,
    x: &[Symbol],
    n: u64,
    est: &ComplexityEstimator,
) -> Result<u64, MeasureError> {
    let len = x.len().min(n as usize);
    MeasureIdentifier::new(list, est, x[..len].to_vec())?.step(n)
}

/// Where the data sequence comes from.
#[derive(Clone, Debug)]
pub enum MeasureSource {
    /// Drawn from a measure with the given seed.
    Sample { measure: MeasureHypothesis, seed: u64 },
    /// A given sequence, at least `n_max` long.
    Fixed(Vec<Symbol>),
}

impl MeasureSource {
    /// The first `n` symbols.
    pub fn take(&self, n: u64) -> Result<Vec<Symbol>, MeasureError> {
        match self {
            MeasureSource::Sample { measure, seed } => Ok(draw_from_measure(measure, *seed, n)?.symbols().to_vec()),
            MeasureSource::Fixed(x) => {
                if (x.len() as u64) < n {
                    return Err(MeasureError::SequenceTooShort { needed: n, got: x.len() as u64 });
                }
                Ok(x[..n as usize].to_vec())
            }
        }
    }
}

/// Records the identifier's output at `n = stride, 2*stride, ..., <= n_max`.
pub fn identify_measure_stream(
    list: &InterleavedList<MeasureHypothesis>,
    source: &MeasureSource,
    n_max: u64,
    stride: u64,
    est: &ComplexityEstimator,
) -> Result<GuessTrace, MeasureError> {
    let sizes: Vec<u64> = checkpoint_sizes(n_max, stride).collect();
    let Some(&last) = sizes.last() else {
        return Ok(GuessTrace::default());
    };
    let x = source.take(last)?;
    let mut ident = MeasureIdentifier::new(list, est, x)?;
    let checkpoints =
        sizes.into_iter().map(|n| Ok((n, Guess::Index(ident.step(n)?)))).collect::<Result<Vec<_>, MeasureError>>()?;
    Ok(GuessTrace::from_checkpoints(checkpoints))
}
