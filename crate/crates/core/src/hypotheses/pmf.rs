use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::term::{term_total, Term};
use super::{approximate, HypothesisError, Symbol};
use crate::exactnum::Rational;

/// A computable probability mass function with a canonical support
/// enumeration `a_1, a_2, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PmfHypothesis {
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Finite {
        symbols: Vec<Symbol>,
        masses: Vec<Rational>,
        index: BTreeMap<Symbol, usize>,
    },
    /// `p(j) = 2^-j` on `j = 1, 2, ...`
    Geometric,
}

impl PmfHypothesis {
    /// Exact pmf with the given masses; support order follows input order.
    pub fn finite(probs: Vec<(Symbol, Rational)>) -> Result<Self, HypothesisError> {
        if probs.is_empty() {
            return Err(HypothesisError::EmptySupport);
        }
        let mut index = BTreeMap::new();
        let mut symbols = Vec::with_capacity(probs.len());
        let mut masses = Vec::with_capacity(probs.len());
        for (i, (a, p)) in probs.into_iter().enumerate() {
            if !p.is_positive() {
                return Err(HypothesisError::NonpositiveMass(a));
            }
            if index.insert(a, i).is_some() {
                return Err(HypothesisError::DuplicateSymbol(a));
            }
            symbols.push(a);
            masses.push(p);
        }
        let sum: Rational = masses.iter().sum();
        if sum != 1 {
            return Err(HypothesisError::SumNotOne(sum));
        }
        Ok(PmfHypothesis { repr: Repr::Finite { symbols, masses, index } })
    }

    /// `p(a_j) = f(j) / sum_{h <= n} f(h)` on symbols `a_j = j`, `1 <= j <= n`.
    pub fn simple(f: &Term, n: u64) -> Result<Self, HypothesisError> {
        if n == 0 {
            return Err(HypothesisError::EmptySupport);
        }
        let (vals, total) = term_total(f, n)?;
        if total == 0u32.into() {
            return Err(HypothesisError::ZeroDenominator);
        }
        let total = BigInt::from(total);
        let probs =
            vals.into_iter().zip(1..).map(|(v, j)| (j, Rational::from_big(BigInt::from(v), total.clone()))).collect();
        Self::finite(probs)
    }

    /// `p(j) = 2^-j` for `j >= 1`.
    pub fn geometric() -> Self {
        PmfHypothesis { repr: Repr::Geometric }
    }

    pub fn is_exact(&self) -> bool {
        true
    }

    /// Number of support points; `None` for infinite support.
    pub fn support_len(&self) -> Option<u64> {
        match &self.repr {
            Repr::Finite { symbols, .. } => Some(symbols.len() as u64),
            Repr::Geometric => None,
        }
    }

    /// `a_j`, 1-based.
    pub fn symbol_at(&self, j: u64) -> Option<Symbol> {
        if j == 0 {
            return None;
        }
        match &self.repr {
            Repr::Finite { symbols, .. } => symbols.get(j as usize - 1).copied(),
            Repr::Geometric => Some(j),
        }
    }

    pub fn eval_exact(&self, a: Symbol) -> Rational {
        match &self.repr {
            Repr::Finite { masses, index, .. } => index.get(&a).map_or_else(Rational::zero, |&i| masses[i].clone()),
            Repr::Geometric => {
                if a == 0 {
                    Rational::zero()
                } else {
                    Rational::pow2(-(a as i64))
                }
            }
        }
    }

    /// A rational within `eps` of `p(a)`; zero off the support.
    pub fn eval(&self, a: Symbol, eps: &Rational) -> Rational {
        approximate(self.eval_exact(a), eps)
    }

    /// `sum_{j <= m} p(a_j)` (closed form), within `eps`.
    pub fn prefix_mass(&self, m: u64, eps: &Rational) -> Rational {
        let exact = match &self.repr {
            Repr::Finite { masses, .. } => masses.iter().take(m as usize).sum(),
            Repr::Geometric => Rational::one() - Rational::pow2(-(m as i64)),
        };
        approximate(exact, eps)
    }

    /// Support with masses, for finite supports.
    pub fn finite_masses(&self) -> Option<Vec<(Symbol, Rational)>> {
        match &self.repr {
            Repr::Finite { symbols, masses, .. } => Some(symbols.iter().copied().zip(masses.iter().cloned()).collect()),
            Repr::Geometric => None,
        }
    }

    /// Extensional equality: same mass on every symbol, regardless of the
    /// support order or how the pmf was specified.
    pub fn same_distribution(&self, other: &PmfHypothesis) -> bool {
        match (&self.repr, &other.repr) {
            (Repr::Geometric, Repr::Geometric) => true,
            (Repr::Finite { symbols, .. }, Repr::Finite { symbols: s2, .. }) => {
                symbols.len() == s2.len() && symbols.iter().all(|&a| self.eval_exact(a) == other.eval_exact(a))
            }
            _ => false,
        }
    }
}
