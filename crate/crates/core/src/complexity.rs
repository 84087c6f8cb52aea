//! Stage-monotone upper bounds on prefix complexity from a fixed set of
//! prefix-free coding schemes.
//!
//! A description starts with a two-bit tag naming its scheme:
//!
//! | tag | scheme  | description length                                        |
//! |-----|---------|-----------------------------------------------------------|
//! | 00  | literal | `2 + gamma(|x|) + |x| * ceil(log2 |L|)`                   |
//! | 01  | run     | `2 + gamma(|x|) + ceil(log2 |L|)` (x is one symbol repeated) |
//! | 10  | model   | `2 + gamma(i) + gamma(|x|) + ceil(log2 1/mu_i(x)) + 1`     |
//!
//! where `gamma(k) = 2 floor(log2 k) + 1` is the Elias gamma length. The
//! empty string is described by the bare tag `00`. At stage `n` a scheme is
//! admissible when its stage index (0, 1, 2 in table order) is at most `n`,
//! and the model scheme may only use measures `mu_i` with `i <= n`, so the
//! estimate can only shrink as the stage grows.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::enumeration::{HypothesisList, ListError};
use crate::exactnum::{ceil_log2, Rational};
use crate::hypotheses::{MeasureHypothesis, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Literal,
    Run,
    Model,
}

impl Scheme {
    pub fn tag(self) -> &'static str {
        match self {
            Scheme::Literal => "00",
            Scheme::Run => "01",
            Scheme::Model => "10",
        }
    }

    /// Least stage at which the scheme is searched.
    pub fn stage_index(self) -> u64 {
        match self {
            Scheme::Literal => 0,
            Scheme::Run => 1,
            Scheme::Model => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KhatError {
    #[error("no admissible scheme describes the string")]
    NoScheme,
    #[error("symbol {0} is not in the alphabet")]
    SymbolOutsideAlphabet(Symbol),
    #[error(transparent)]
    List(#[from] ListError),
}

/// Elias gamma code length of `k >= 1`.
pub fn gamma(k: u64) -> u64 {
    assert!(k >= 1, "gamma is defined for k >= 1");
    2 * u64::from(k.ilog2()) + 1
}

/// Upper bound on prefix complexity, in bits, by minimum over schemes.
#[derive(Clone, Debug)]
pub struct ComplexityEstimator {
    schemes: Vec<Scheme>,
    alphabet: Vec<Symbol>,
    models: Option<Arc<HypothesisList<MeasureHypothesis>>>,
}

impl ComplexityEstimator {
    /// Schemes are deduplicated; the alphabet is sorted and deduplicated.
    pub fn new(
        schemes: &[Scheme],
        alphabet: &[Symbol],
        models: Option<Arc<HypothesisList<MeasureHypothesis>>>,
    ) -> Self {
        let mut schemes = schemes.to_vec();
        schemes.sort();
        schemes.dedup();
        let mut alphabet = alphabet.to_vec();
        alphabet.sort();
        alphabet.dedup();
        ComplexityEstimator { schemes, alphabet, models }
    }

    /// All three schemes.
    pub fn standard(alphabet: &[Symbol], models: Option<Arc<HypothesisList<MeasureHypothesis>>>) -> Self {
        Self::new(&[Scheme::Literal, Scheme::Run, Scheme::Model], alphabet, models)
    }

    pub fn schemes(&self) -> &[Scheme] {
        &self.schemes
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn models(&self) -> Option<&Arc<HypothesisList<MeasureHypothesis>>> {
        self.models.as_ref()
    }

    fn has(&self, s: Scheme) -> bool {
        self.schemes.contains(&s)
    }

    fn admissible(&self, s: Scheme, stage: u64) -> bool {
        self.has(s) && s.stage_index() <= stage
    }

    /// `ceil(log2 |L|)`.
    pub fn symbol_bits(&self) -> u64 {
        match self.alphabet.len() {
            0 | 1 => 0,
            k => u64::from((k - 1).ilog2()) + 1,
        }
    }

    fn check_symbols(&self, x: &[Symbol]) -> Result<(), KhatError> {
        match x.iter().find(|a| self.alphabet.binary_search(a).is_err()) {
            Some(&a) => Err(KhatError::SymbolOutsideAlphabet(a)),
            None => Ok(()),
        }
    }

    fn literal_len(&self, m: u64) -> u64 {
        if m == 0 {
            2
        } else {
            2 + gamma(m) + m * self.symbol_bits()
        }
    }

    fn run_len(&self, m: u64) -> u64 {
        2 + gamma(m) + self.symbol_bits()
    }

    /// Number of models the stage-`n` search may use.
    fn model_bound(&self, stage: u64) -> u64 {
        match &self.models {
            Some(list) if self.admissible(Scheme::Model, stage) => list.scan_bound(stage),
            _ => 0,
        }
    }

    /// `K̂ⁿ(x)`.
    pub fn khat(&self, x: &[Symbol], stage: u64) -> Result<u64, KhatError> {
        self.check_symbols(x)?;
        let m = x.len() as u64;
        let mut best: Option<u64> = None;
        let mut offer = |v: u64| best = Some(best.map_or(v, |b| b.min(v)));
        if self.admissible(Scheme::Literal, stage) {
            offer(self.literal_len(m));
        }
        if m > 0 && self.admissible(Scheme::Run, stage) && x.iter().all(|&a| a == x[0]) {
            offer(self.run_len(m));
        }
        if m > 0 {
            for i in 1..=self.model_bound(stage) {
                let mu = self.models.as_ref().expect("bounded by model list").get(i)?.eval_exact(x);
                if mu.is_positive() {
                    offer(model_len(i, m, &mu));
                }
            }
        }
        best.ok_or(KhatError::NoScheme)
    }

    /// `K̂ⁿ` of every prefix `x_1..x_j`, `j = 0..=|x|`.
    pub fn khat_prefixes(&self, x: &[Symbol], stage: u64) -> Result<Vec<u64>, KhatError> {
        PrefixKhat::new(self, x.to_vec())?.stage(stage, x.len())
    }
}

fn model_len(i: u64, m: u64, mu: &Rational) -> u64 {
    let bits = ceil_log2(&mu.recip());
    debug_assert!(bits >= 0);
    2 + gamma(i) + gamma(m) + bits as u64 + 1
}

/// `K̂ⁿ` over the prefixes of a fixed sequence, with the per-model code
/// lengths of every prefix computed once and reused across stages.
pub struct PrefixKhat<'a> {
    est: &'a ComplexityEstimator,
    x: Vec<Symbol>,
    /// model code length of `x_1..x_j` per model; `None` entries for zero mass
    model_bits: Vec<ModelBits>,
}

enum ModelBits {
    /// Never beats the literal/run bound on any prefix.
    Useless,
    Bits(Vec<Option<u64>>),
}

impl<'a> PrefixKhat<'a> {
    pub fn new(est: &'a ComplexityEstimator, x: Vec<Symbol>) -> Result<Self, KhatError> {
        est.check_symbols(&x)?;
        Ok(PrefixKhat { est, x, model_bits: Vec::new() })
    }

    pub fn sequence(&self) -> &[Symbol] {
        &self.x
    }

    /// Best literal or run length of each `x_1..x_j` among the schemes
    /// admissible at `stage`.
    fn simple_bounds(&self, stage: u64, upto: usize) -> Vec<Option<u64>> {
        let est = self.est;
        let lit = est.admissible(Scheme::Literal, stage);
        let run = est.admissible(Scheme::Run, stage);
        let mut out = Vec::with_capacity(upto + 1);
        let mut is_run = true;
        for j in 0..=upto {
            if j >= 2 {
                is_run &= self.x[j - 1] == self.x[0];
            }
            let m = j as u64;
            let mut b = lit.then(|| est.literal_len(m));
            if run && j > 0 && is_run {
                let r = est.run_len(m);
                b = Some(b.map_or(r, |v| v.min(r)));
            }
            out.push(b);
        }
        out
    }

    fn ensure_model(&mut self, i: u64, floor: &[Option<u64>]) -> Result<(), KhatError> {
        while (self.model_bits.len() as u64) < i {
            let idx = self.model_bits.len() as u64 + 1;
            // every model description of x_1..x_j costs at least 3 + gamma(i) + gamma(j)
            let useful =
                floor.iter().enumerate().skip(1).any(|(j, b)| b.is_none_or(|b| 3 + gamma(idx) + gamma(j as u64) < b));
            let entry = if useful {
                let list = self.est.models.as_ref().expect("bounded by model list");
                let masses = list.get(idx)?.prefix_masses(&self.x);
                ModelBits::Bits(
                    masses
                        .iter()
                        .enumerate()
                        .map(|(j, mu)| (j > 0 && mu.is_positive()).then(|| model_len(idx, j as u64, mu)))
                        .collect(),
                )
            } else {
                ModelBits::Useless
            };
            self.model_bits.push(entry);
        }
        Ok(())
    }

    /// `K̂ⁿ(x_1..x_j)` for `j = 0..=upto`.
    pub fn stage(&mut self, stage: u64, upto: usize) -> Result<Vec<u64>, KhatError> {
        assert!(upto <= self.x.len(), "prefix longer than the sequence");
        let mut best = self.simple_bounds(stage, upto);
        // usefulness is judged against the weakest floor: literal and run over the whole sequence
        let floor = self.simple_bounds(u64::MAX, self.x.len());
        let bound = self.est.model_bound(stage);
        self.ensure_model(bound, &floor)?;
        for bits in &self.model_bits[..bound as usize] {
            if let ModelBits::Bits(v) = bits {
                for (b, m) in best.iter_mut().zip(v.iter()) {
                    if let Some(m) = *m {
                        *b = Some(b.map_or(m, |v| v.min(m)));
                    }
                }
            }
        }
        best.into_iter().map(|b| b.ok_or(KhatError::NoScheme)).collect()
    }
}

/// Kraft sum `sum 2^-len` over every decodable description of length at
/// most `cap`, across all stages.
pub fn kraft_audit(est: &ComplexityEstimator, cap: u64) -> Result<Rational, ListError> {
    assert!(cap <= 24, "length cap above 24");
    let mut total = Rational::zero();
    let add = |total: &mut Rational, len: u64, count: u128| {
        *total += &(&Rational::from_big(count.into(), 1u8.into()) * &Rational::pow2(-(len as i64)));
    };
    let l = est.alphabet.len() as u128;
    if est.has(Scheme::Literal) && 2 <= cap {
        add(&mut total, 2, 1);
        for m in 1.. {
            let len = est.literal_len(m);
            if 2 + gamma(m) > cap {
                break;
            }
            if len <= cap {
                add(&mut total, len, l.pow(m as u32));
            }
        }
    }
    if est.has(Scheme::Run) {
        for m in 1.. {
            let len = est.run_len(m);
            if len > cap {
                break;
            }
            add(&mut total, len, l);
        }
    }
    if let (true, Some(list)) = (est.has(Scheme::Model), &est.models) {
        // smallest model description: tag, gamma(i), gamma(1), 0 mass bits, slack bit
        for i in 1..=list.len().unwrap_or(u64::MAX) {
            if 2 + gamma(i) + 1 + 1 > cap {
                break;
            }
            let mu = list.get(i)?;
            for m in 1.. {
                let head = 2 + gamma(i) + gamma(m) + 1;
                if head > cap {
                    break;
                }
                model_mass(&mu, &est.alphabet, m, head, cap, &mut Vec::new(), &mut total);
            }
        }
    }
    Ok(total)
}

/// Adds `2^-(head + ceil(log2 1/mu(x)))` for every string `x` of length `m`
/// whose description fits in `cap`, walking the prefix tree and pruning
/// zero-mass and over-long branches (mass bits only grow along a branch).
fn model_mass(
    mu: &MeasureHypothesis,
    alphabet: &[Symbol],
    m: u64,
    head: u64,
    cap: u64,
    x: &mut Vec<Symbol>,
    total: &mut Rational,
) {
    let mass = mu.eval_exact(x);
    if !mass.is_positive() {
        return;
    }
    let bits = ceil_log2(&mass.recip()) as u64;
    if head + bits > cap {
        return;
    }
    if x.len() as u64 == m {
        *total += &Rational::pow2(-((head + bits) as i64));
        return;
    }
    for &a in alphabet {
        x.push(a);
        model_mass(mu, alphabet, m, head, cap, x, total);
        x.pop();
    }
}
