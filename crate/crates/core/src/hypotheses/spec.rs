use std::fmt;

use serde::{Deserialize, Serialize};

use super::{HypothesisError, MarkovHypothesis, MeasureHypothesis, PmfHypothesis, Symbol, Term};
use crate::exactnum::Rational;

/// Which of the three hypothesis families a spec or list holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisKind {
    Pmf,
    Markov,
    Measure,
}

impl fmt::Display for HypothesisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HypothesisKind::Pmf => "pmf",
            HypothesisKind::Markov => "markov",
            HypothesisKind::Measure => "measure",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwanBranch {
    /// all-`a`
    Mu1,
    /// half all-`a`, half switching to `b` after `n_switch` symbols
    Mu0,
}

fn default_a() -> Symbol {
    1
}

fn default_b() -> Symbol {
    2
}

/// Finite description of a hypothesis: family tag plus exact parameters.
///
/// This is the unit of the configuration file format; it round-trips
/// through JSON without loss (rationals are `"num/den"` strings).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum HypothesisSpec {
    FinitePmf {
        masses: Vec<(Symbol, Rational)>,
    },
    SimplePmf {
        term: Term,
        symbols: u64,
    },
    GeometricPmf,
    Markov {
        states: Vec<Symbol>,
        rows: Vec<Vec<Rational>>,
    },
    IidMeasure {
        masses: Vec<(Symbol, Rational)>,
    },
    MuK {
        k: u64,
        a: Symbol,
    },
    Deterministic {
        alphabet: Vec<Symbol>,
        symbol: Symbol,
    },
    BlackSwan {
        n_switch: u64,
        branch: SwanBranch,
        #[serde(default = "default_a")]
        a: Symbol,
        #[serde(default = "default_b")]
        b: Symbol,
    },
}

impl HypothesisSpec {
    pub fn kind(&self) -> HypothesisKind {
        match self {
            HypothesisSpec::FinitePmf { .. } | HypothesisSpec::SimplePmf { .. } | HypothesisSpec::GeometricPmf => {
                HypothesisKind::Pmf
            }
            HypothesisSpec::Markov { .. } => HypothesisKind::Markov,
            HypothesisSpec::IidMeasure { .. }
            | HypothesisSpec::MuK { .. }
            | HypothesisSpec::Deterministic { .. }
            | HypothesisSpec::BlackSwan { .. } => HypothesisKind::Measure,
        }
    }
}

/// Hypothesis types constructible from a [`HypothesisSpec`].
pub trait FromSpec: Sized + Send + Sync {
    const KIND: HypothesisKind;

    fn from_spec(spec: &HypothesisSpec) -> Result<Self, HypothesisError>;

    /// Extensional equality: identical values on every input.
    fn same_as(&self, other: &Self) -> bool;
}

fn wrong(expected: HypothesisKind, spec: &HypothesisSpec) -> HypothesisError {
    HypothesisError::WrongFamily { expected, found: spec.kind() }
}

impl FromSpec for PmfHypothesis {
    const KIND: HypothesisKind = HypothesisKind::Pmf;

    fn from_spec(spec: &HypothesisSpec) -> Result<Self, HypothesisError> {
        match spec {
            HypothesisSpec::FinitePmf { masses } => PmfHypothesis::finite(masses.clone()),
            HypothesisSpec::SimplePmf { term, symbols } => PmfHypothesis::simple(term, *symbols),
            HypothesisSpec::GeometricPmf => Ok(PmfHypothesis::geometric()),
            other => Err(wrong(Self::KIND, other)),
        }
    }

    fn same_as(&self, other: &Self) -> bool {
        self.same_distribution(other)
    }
}

impl FromSpec for MarkovHypothesis {
    const KIND: HypothesisKind = HypothesisKind::Markov;

    fn from_spec(spec: &HypothesisSpec) -> Result<Self, HypothesisError> {
        match spec {
            HypothesisSpec::Markov { states, rows } => MarkovHypothesis::new(states.clone(), rows.clone()),
            other => Err(wrong(Self::KIND, other)),
        }
    }

    fn same_as(&self, other: &Self) -> bool {
        self.same_chain(other)
    }
}

impl FromSpec for MeasureHypothesis {
    const KIND: HypothesisKind = HypothesisKind::Measure;

    fn from_spec(spec: &HypothesisSpec) -> Result<Self, HypothesisError> {
        match spec {
            HypothesisSpec::IidMeasure { masses } => MeasureHypothesis::iid(PmfHypothesis::finite(masses.clone())?),
            HypothesisSpec::MuK { k, a } => MeasureHypothesis::mu_k(*k, *a),
            HypothesisSpec::Deterministic { alphabet, symbol } => {
                MeasureHypothesis::deterministic(alphabet.clone(), *symbol)
            }
            HypothesisSpec::BlackSwan { n_switch, branch, a, b } => {
                let (mu1, mu0) = MeasureHypothesis::black_swan_pair(*a, *b, *n_switch)?;
                Ok(match branch {
                    SwanBranch::Mu1 => mu1,
                    SwanBranch::Mu0 => mu0,
                })
            }
            other => Err(wrong(Self::KIND, other)),
        }
    }

    /// Structural equality of the normalized representation; measure
    /// equality is undecidable in general, so distinct families are never
    /// reported equal.
    fn same_as(&self, other: &Self) -> bool {
        self == other
    }
}
