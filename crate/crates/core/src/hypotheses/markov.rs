use std::collections::BTreeMap;

use super::{approximate, HypothesisError, Symbol};
use crate::exactnum::Rational;
use crate::markov_identify::stationary;

/// Finite time-homogeneous ergodic Markov chain with exact rational
/// transition probabilities and its stationary distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovHypothesis {
    states: Vec<Symbol>,
    index: BTreeMap<Symbol, usize>,
    q: Vec<Vec<Rational>>,
    pi: Vec<Rational>,
}

impl MarkovHypothesis {
    /// Validates row-stochasticity and ergodicity, then solves for `pi`.
    pub fn new(states: Vec<Symbol>, rows: Vec<Vec<Rational>>) -> Result<Self, HypothesisError> {
        if states.is_empty() {
            return Err(HypothesisError::EmptySupport);
        }
        let mut index = BTreeMap::new();
        for (i, &s) in states.iter().enumerate() {
            if index.insert(s, i).is_some() {
                return Err(HypothesisError::DuplicateSymbol(s));
            }
        }
        if rows.len() != states.len() {
            return Err(HypothesisError::DimensionMismatch { states: states.len(), rows: rows.len() });
        }
        let pi = stationary(&rows)?;
        Ok(MarkovHypothesis { states, index, q: rows, pi })
    }

    pub fn states(&self) -> &[Symbol] {
        &self.states
    }

    pub fn state_index(&self, s: Symbol) -> Option<usize> {
        self.index.get(&s).copied()
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.q
    }

    pub fn row(&self, s: Symbol) -> Option<&[Rational]> {
        self.state_index(s).map(|i| self.q[i].as_slice())
    }

    /// Transition probability `from -> to`; zero for unknown states.
    pub fn transition(&self, from: Symbol, to: Symbol, eps: &Rational) -> Rational {
        match (self.state_index(from), self.state_index(to)) {
            (Some(i), Some(j)) => approximate(self.q[i][j].clone(), eps),
            _ => Rational::zero(),
        }
    }

    pub fn stationary(&self) -> &[Rational] {
        &self.pi
    }

    pub fn stationary_mass(&self, s: Symbol, eps: &Rational) -> Rational {
        self.state_index(s).map_or_else(Rational::zero, |i| approximate(self.pi[i].clone(), eps))
    }

    pub fn is_exact(&self) -> bool {
        true
    }

    /// Same state set and transition probabilities, in any state order.
    pub fn same_chain(&self, other: &MarkovHypothesis) -> bool {
        self.states.len() == other.states.len()
            && self.states.iter().all(|&a| {
                other.state_index(a).is_some()
                    && self
                        .states
                        .iter()
                        .all(|&b| self.transition(a, b, &Rational::zero()) == other.transition(a, b, &Rational::zero()))
            })
    }
}
