//! Computable hypotheses: probability mass functions, finite ergodic Markov
//! chains and measures on infinite sequences.
//!
//! Every hypothesis answers evaluation requests with a requested precision
//! `eps`: the returned rational is within `eps` of the true value. All
//! shipped families are exact, so `eps = 0` returns the true value; a
//! positive `eps` returns a dyadic truncation, which is what an identifier
//! written against the precision contract has to cope with.

mod markov;
mod measure;
mod pmf;
mod spec;
mod term;

pub use markov::MarkovHypothesis;
pub use measure::MeasureHypothesis;
pub use pmf::PmfHypothesis;
pub use spec::{FromSpec, HypothesisKind, HypothesisSpec, SwanBranch};
pub use term::{Term, TermError};

use crate::exactnum::{ceil_log2, Rational};

/// Elements of the observation alphabet `L`, a subset of the naturals.
pub type Symbol = u64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HypothesisError {
    #[error("masses sum to {0}, not 1")]
    SumNotOne(Rational),
    #[error("symbol {0} has nonpositive mass")]
    NonpositiveMass(Symbol),
    #[error("symbol {0} listed twice")]
    DuplicateSymbol(Symbol),
    #[error("empty support")]
    EmptySupport,
    #[error("term sums to zero over the support")]
    ZeroDenominator,
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("symbol {symbol} is outside 1..={k}")]
    BadSymbol { symbol: Symbol, k: u64 },
    #[error("alphabet does not contain {0}")]
    SymbolNotInAlphabet(Symbol),
    #[error("transition matrix is {rows} rows for {states} states")]
    DimensionMismatch { states: usize, rows: usize },
    #[error("row {row} has {len} entries, expected {expected}")]
    RaggedRow { row: usize, len: usize, expected: usize },
    #[error("negative transition probability in row {0}")]
    NegativeEntry(usize),
    #[error("row {row} sums to {sum}, not 1")]
    RowSumNotOne { row: usize, sum: Rational },
    #[error("chain is not ergodic: {0}")]
    NotErgodic(String),
    #[error("internal error: stationary system is singular")]
    SingularSystem,
    #[error("a {found} hypothesis cannot be used where a {expected} is expected")]
    WrongFamily { expected: HypothesisKind, found: HypothesisKind },
    #[error("parameter out of range: {0}")]
    BadParameter(String),
}

/// Answer to a precision-`eps` request for an exactly known value: the value
/// itself for `eps = 0`, otherwise its truncation to the coarsest dyadic grid
/// finer than `eps`.
pub(crate) fn approximate(exact: Rational, eps: &Rational) -> Rational {
    assert!(!eps.is_negative(), "negative precision");
    if eps.is_zero() {
        return exact;
    }
    let bits = ceil_log2(&eps.recip()).max(0) as u32;
    exact.truncate_dyadic(bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn approximation_respects_precision() {
        let v = Rational::new(1, 3);
        for eps in [Rational::pow2(-10), Rational::pow2(-20), Rational::new(1, 1000)] {
            let a = approximate(v.clone(), &eps);
            assert!((&a - &v).abs() <= eps);
            assert!(a.denom().bits() <= 21);
        }
        assert_eq!(approximate(v.clone(), &Rational::zero()), v);
    }
}
