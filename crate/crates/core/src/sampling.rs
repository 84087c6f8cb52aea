//! Seeded, platform-independent sampling of i.i.d. draws, Markov chain runs
//! and sequences from measures.
//!
//! Draws use inversion: a 53-bit dyadic uniform `u = k / 2^53` selects the
//! least support point whose exact cumulative mass is `>= u`. Comparing
//! `k <= floor(cum * 2^53)` decides this exactly with integer arithmetic.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use crate::exactnum::Rational;
use crate::hypotheses::{MarkovHypothesis, MeasureHypothesis, PmfHypothesis, Symbol};

const UNIFORM_BITS: u32 = 53;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SamplingError {
    #[error("start state {0} is not a state of the chain")]
    BadStart(Symbol),
    #[error("prefix of length {0} has zero mass")]
    ZeroMassPrefix(usize),
}

/// SplitMix64.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Numerator `k` of a uniform draw `k / 2^53` from `[0, 1)`.
    pub fn next_dyadic(&mut self) -> u64 {
        self.next_u64() >> (64 - UNIFORM_BITS)
    }

    pub fn next_uniform(&mut self) -> Rational {
        Rational::from_big(self.next_dyadic().into(), (1u64 << UNIFORM_BITS).into())
    }
}

/// Observed sequence `x_1..x_n` with per-symbol counts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SamplePrefix {
    symbols: Vec<Symbol>,
    counts: BTreeMap<Symbol, u64>,
}

impl SamplePrefix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, a: Symbol) {
        self.symbols.push(a);
        *self.counts.entry(a).or_insert(0) += 1;
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> u64 {
        self.symbols.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn count(&self, a: Symbol) -> u64 {
        self.counts.get(&a).copied().unwrap_or(0)
    }

    /// Symbols with positive count, with their counts.
    pub fn counts(&self) -> &BTreeMap<Symbol, u64> {
        &self.counts
    }
}

impl FromIterator<Symbol> for SamplePrefix {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        let mut s = SamplePrefix::new();
        for a in iter {
            s.push(a);
        }
        s
    }
}

/// Cumulative thresholds `floor(cum_j * 2^53)` over a finite list of masses.
#[derive(Debug, Clone)]
struct InversionTable {
    symbols: Vec<Symbol>,
    thresholds: Vec<u64>,
    cum: Rational,
}

impl InversionTable {
    fn new() -> Self {
        InversionTable { symbols: Vec::new(), thresholds: Vec::new(), cum: Rational::zero() }
    }

    fn from_masses<'a>(masses: impl IntoIterator<Item = (Symbol, &'a Rational)>) -> Self {
        let mut t = Self::new();
        for (a, p) in masses {
            t.extend(a, p);
        }
        t
    }

    /// Zero masses are skipped so they can never be selected.
    fn extend(&mut self, a: Symbol, p: &Rational) {
        if !p.is_positive() {
            return;
        }
        self.cum += p;
        let th = self.cum.floor_scaled(UNIFORM_BITS).to_u64().expect("cumulative mass <= 1");
        self.symbols.push(a);
        self.thresholds.push(th);
    }

    fn covers(&self, k: u64) -> bool {
        self.thresholds.last().is_some_and(|&t| t >= k)
    }

    fn pick(&self, k: u64) -> Symbol {
        let j = self.thresholds.partition_point(|&t| t < k);
        self.symbols[j]
    }
}

/// Inversion sampler for a pmf; infinite supports grow the table by
/// doubling its length until it covers the draw.
#[derive(Debug, Clone)]
pub struct IidSampler {
    pmf: PmfHypothesis,
    table: InversionTable,
}

impl IidSampler {
    pub fn new(pmf: &PmfHypothesis) -> Self {
        let table = match pmf.finite_masses() {
            Some(m) => InversionTable::from_masses(m.iter().map(|(a, p)| (*a, p))),
            None => InversionTable::new(),
        };
        IidSampler { pmf: pmf.clone(), table }
    }

    pub fn sample(&mut self, rng: &mut Rng) -> Symbol {
        let k = rng.next_dyadic();
        while !self.table.covers(k) {
            let have = self.table.symbols.len() as u64;
            let want = (2 * have).max(1);
            for j in have + 1..=want {
                let a = self.pmf.symbol_at(j).expect("support exhausted before mass 1");
                let p = self.pmf.eval_exact(a);
                self.table.extend(a, &p);
            }
        }
        self.table.pick(k)
    }
}

/// `n` i.i.d. draws from `p`.
pub fn draw_iid(p: &PmfHypothesis, seed: u64, n: u64) -> SamplePrefix {
    let mut rng = Rng::new(seed);
    let mut sampler = IidSampler::new(p);
    (0..n).map(|_| sampler.sample(&mut rng)).collect()
}

/// Row-wise inversion tables for a chain.
#[derive(Debug, Clone)]
pub struct ChainSampler {
    states: Vec<Symbol>,
    rows: Vec<InversionTable>,
    current: usize,
}

impl ChainSampler {
    pub fn new(chain: &MarkovHypothesis, x0: Symbol) -> Result<Self, SamplingError> {
        let current = chain.state_index(x0).ok_or(SamplingError::BadStart(x0))?;
        let states = chain.states().to_vec();
        let rows = chain
            .matrix()
            .iter()
            .map(|row| InversionTable::from_masses(states.iter().copied().zip(row.iter())))
            .collect();
        Ok(ChainSampler { states, rows, current })
    }

    pub fn step(&mut self, rng: &mut Rng) -> Symbol {
        let s = self.rows[self.current].pick(rng.next_dyadic());
        self.current = self.states.iter().position(|&x| x == s).expect("row over states");
        s
    }
}

/// `X_1..X_n` of a run started at `X_0 = x0`.
pub fn run_chain(chain: &MarkovHypothesis, x0: Symbol, seed: u64, n: u64) -> Result<Vec<Symbol>, SamplingError> {
    let mut rng = Rng::new(seed);
    let mut sampler = ChainSampler::new(chain, x0)?;
    Ok((0..n).map(|_| sampler.step(&mut rng)).collect())
}

/// Draws `x_{k+1}` from the conditionals `mu(x a) / mu(x)`.
pub fn draw_from_measure(mu: &MeasureHypothesis, seed: u64, n: u64) -> Result<SamplePrefix, SamplingError> {
    let mut rng = Rng::new(seed);
    let mut out = SamplePrefix::new();
    for _ in 0..n {
        let cond = mu.conditionals(out.symbols()).ok_or(SamplingError::ZeroMassPrefix(out.symbols().len()))?;
        let table = InversionTable::from_masses(cond.iter().map(|(a, p)| (*a, p)));
        out.push(table.pick(rng.next_dyadic()));
    }
    Ok(out)
}
