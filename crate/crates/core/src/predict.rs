//! Next-symbol prediction from a given hypothesis.
//!
//! For i.i.d. data the prediction ignores the history, for a Markov chain
//! it is the transition row of the last state, and for a general measure it
//! is the conditional `mu(x a) / mu(x)`. The black-swan pair shows why the
//! last case is fragile: two measures can agree on every observed symbol and
//! still disagree about the next one.

use std::fmt::Write as _;

use crate::exactnum::Rational;
use crate::hypotheses::{HypothesisError, MarkovHypothesis, MeasureHypothesis, PmfHypothesis, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PredictError {
    #[error("history is empty")]
    EmptyHistory,
    #[error("state {0} is not a state of the chain")]
    UnknownState(Symbol),
    #[error("history has zero mass")]
    ZeroMassPrefix,
}

/// Distribution of the next symbol. For infinite supports the listed masses
/// stop once the unlisted remainder is below the requested bound; that
/// remainder is kept in `tail`, so listed masses plus `tail` is exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prediction {
    pub masses: Vec<(Symbol, Rational)>,
    pub tail: Rational,
}

impl Prediction {
    pub fn mass(&self, a: Symbol) -> Rational {
        self.masses.iter().find(|(s, _)| *s == a).map_or_else(Rational::zero, |(_, p)| p.clone())
    }

    pub fn total(&self) -> Rational {
        &self.masses.iter().map(|(_, p)| p).sum::<Rational>() + &self.tail
    }
}

/// Default remainder bound for infinite supports.
pub fn default_tail_bound() -> Rational {
    Rational::pow2(-32)
}

/// `p` itself, whatever the history.
pub fn predict_iid(p: &PmfHypothesis, _history: &[Symbol]) -> Prediction {
    predict_iid_truncated(p, &default_tail_bound())
}

/// `p`, listing support points until the remainder drops below `max_tail`.
pub fn predict_iid_truncated(p: &PmfHypothesis, max_tail: &Rational) -> Prediction {
    if let Some(masses) = p.finite_masses() {
        return Prediction { masses, tail: Rational::zero() };
    }
    let mut masses = Vec::new();
    let mut tail = Rational::one();
    let mut j = 1;
    while &tail >= max_tail {
        let a = p.symbol_at(j).expect("infinite support");
        let m = p.eval_exact(a);
        tail -= &m;
        masses.push((a, m));
        j += 1;
    }
    Prediction { masses, tail }
}

/// Transition row of the last state in `history`.
pub fn predict_markov(m: &MarkovHypothesis, history: &[Symbol]) -> Result<Prediction, PredictError> {
    let &last = history.last().ok_or(PredictError::EmptyHistory)?;
    let row = m.row(last).ok_or(PredictError::UnknownState(last))?;
    Ok(Prediction { masses: m.states().iter().copied().zip(row.iter().cloned()).collect(), tail: Rational::zero() })
}

/// `a -> mu(x a) / mu(x)` over the alphabet.
pub fn predict_measure(mu: &MeasureHypothesis, x: &[Symbol]) -> Result<Prediction, PredictError> {
    let masses = mu.conditionals(x).ok_or(PredictError::ZeroMassPrefix)?;
    Ok(Prediction { masses, tail: Rational::zero() })
}

/// One side of the black-swan comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwanSide {
    pub name: &'static str,
    pub history: Vec<Symbol>,
    pub history_mass: Rational,
    pub next: Prediction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlackSwanReport {
    pub n_switch: u64,
    pub a: Symbol,
    pub b: Symbol,
    pub mu1: SwanSide,
    pub mu0: SwanSide,
}

/// Predictions of `mu1` and `mu0` after the history `a^n_switch`, with
/// `a = 1`, `b = 2`.
pub fn black_swan_demo(n_switch: u64) -> Result<BlackSwanReport, HypothesisError> {
    let (a, b) = (1, 2);
    let (mu1, mu0) = MeasureHypothesis::black_swan_pair(a, b, n_switch)?;
    let history = vec![a; n_switch as usize];
    let side = |name, mu: &MeasureHypothesis| SwanSide {
        name,
        history: history.clone(),
        history_mass: mu.eval_exact(&history),
        next: predict_measure(mu, &history).expect("a-runs have positive mass under both measures"),
    };
    Ok(BlackSwanReport { n_switch, a, b, mu1: side("mu1", &mu1), mu0: side("mu0", &mu0) })
}

impl BlackSwanReport {
    fn letter(&self, s: Symbol) -> char {
        if s == self.a {
            'a'
        } else if s == self.b {
            'b'
        } else {
            '?'
        }
    }

    fn word(&self, x: &[Symbol]) -> String {
        x.iter().map(|&s| self.letter(s)).collect()
    }

    fn sides(&self) -> [&SwanSide; 2] {
        [&self.mu1, &self.mu0]
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "black swan, switch after {} symbols", self.n_switch).unwrap();
        writeln!(out, "history: {}", self.word(&self.mu1.history)).unwrap();
        for side in self.sides() {
            let next: Vec<String> =
                side.next.masses.iter().map(|(s, p)| format!("{} {}", self.letter(*s), p)).collect();
            writeln!(out, "{}: P(history) = {}; next: {}", side.name, side.history_mass, next.join(", ")).unwrap();
        }
        writeln!(
            out,
            "Both measures fit the history. Which prediction is right cannot be told from the data, \
             and an identifier only settles after an unknown number of observations."
        )
        .unwrap();
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("measure,history,history_mass,next,probability\n");
        for side in self.sides() {
            for (s, p) in &side.next.masses {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    side.name,
                    self.word(&side.history),
                    side.history_mass,
                    self.letter(*s),
                    p
                )
                .unwrap();
            }
        }
        out
    }
}
