use super::{approximate, HypothesisError, PmfHypothesis, Symbol};
use crate::exactnum::Rational;

/// A computable measure on infinite sequences over a finite alphabet,
/// evaluated on cylinders: `eval(x)` is the mass of all sequences that
/// start with the finite prefix `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureHypothesis {
    alphabet: Vec<Symbol>,
    kind: Kind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    /// Product measure of a finite pmf.
    Iid(PmfHypothesis),
    /// All mass on the constant sequence `symbol symbol ...`.
    Deterministic { symbol: Symbol },
    /// Mass 1/2 on `a a a ...` and 1/2 on `a^n_switch b b b ...`.
    Swan { a: Symbol, b: Symbol, n_switch: u64 },
    /// Mass `1/k` on `a a a ...`; sequences not starting with `a` are
    /// uniform over `{1..k}`.
    MuK { k: u64, a: Symbol },
}

impl MeasureHypothesis {
    /// Product measure `mu(x_1..x_n) = prod p(x_i)` of a finite-support pmf.
    pub fn iid(p: PmfHypothesis) -> Result<Self, HypothesisError> {
        let alphabet = p
            .finite_masses()
            .ok_or_else(|| HypothesisError::BadParameter("i.i.d. measure needs a finite support".into()))?
            .into_iter()
            .map(|(a, _)| a)
            .collect();
        Ok(MeasureHypothesis { alphabet, kind: Kind::Iid(p) })
    }

    /// The measure concentrated on `symbol symbol ...` over `alphabet`.
    pub fn deterministic(alphabet: Vec<Symbol>, symbol: Symbol) -> Result<Self, HypothesisError> {
        if !alphabet.contains(&symbol) {
            return Err(HypothesisError::SymbolNotInAlphabet(symbol));
        }
        check_distinct(&alphabet)?;
        Ok(MeasureHypothesis { alphabet, kind: Kind::Deterministic { symbol } })
    }

    /// `mu_k` on alphabet `{1..k}` with the distinguished run symbol `a`.
    ///
    /// `mu_k(a^n) = 1/k` for `n >= 1`. Prefixes that leave the `a` run after
    /// starting on it carry no mass; prefixes that start with another symbol
    /// carry `k^-n`, so each one's mass is split evenly over its `k`
    /// continuations.
    pub fn mu_k(k: u64, a: Symbol) -> Result<Self, HypothesisError> {
        if k == 0 || a == 0 || a > k {
            return Err(HypothesisError::BadSymbol { symbol: a, k });
        }
        Ok(MeasureHypothesis { alphabet: (1..=k).collect(), kind: Kind::MuK { k, a } })
    }

    /// The pair `(mu1, mu0)`: `mu1` is all-`a`, `mu0` splits its mass between
    /// all-`a` and `a^n_switch` followed by all-`b`.
    pub fn black_swan_pair(
        a: Symbol,
        b: Symbol,
        n_switch: u64,
    ) -> Result<(MeasureHypothesis, MeasureHypothesis), HypothesisError> {
        if n_switch == 0 {
            return Err(HypothesisError::BadParameter("n_switch must be >= 1".into()));
        }
        if a == b {
            return Err(HypothesisError::DuplicateSymbol(a));
        }
        let mu1 = Self::deterministic(vec![a, b], a)?;
        let mu0 = MeasureHypothesis { alphabet: vec![a, b], kind: Kind::Swan { a, b, n_switch } };
        Ok((mu1, mu0))
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn is_exact(&self) -> bool {
        true
    }

    /// `mu(x_1..x_j)` for every `j = 0..=|x|`.
    pub fn prefix_masses(&self, x: &[Symbol]) -> Vec<Rational> {
        let mut out = Vec::with_capacity(x.len() + 1);
        out.push(Rational::one());
        match &self.kind {
            Kind::Iid(p) => {
                let mut acc = Rational::one();
                for &s in x {
                    if !acc.is_zero() {
                        acc *= &p.eval_exact(s);
                    }
                    out.push(acc.clone());
                }
            }
            Kind::Deterministic { symbol } => {
                let mut alive = true;
                for &s in x {
                    alive &= s == *symbol;
                    out.push(if alive { Rational::one() } else { Rational::zero() });
                }
            }
            Kind::Swan { a, b, n_switch } => {
                // a-run length; whether the b branch was taken; whether the mass is gone
                let (mut a_run, mut on_b, mut dead) = (0u64, false, false);
                let half = Rational::new(1, 2);
                for &s in x {
                    if !dead {
                        if on_b {
                            dead = s != *b;
                        } else if s == *a {
                            a_run += 1;
                        } else if s == *b && a_run == *n_switch {
                            on_b = true;
                        } else {
                            dead = true;
                        }
                    }
                    out.push(if dead {
                        Rational::zero()
                    } else if on_b || a_run > *n_switch {
                        half.clone()
                    } else {
                        Rational::one()
                    });
                }
            }
            Kind::MuK { k, a } => {
                let kk = *k as i64;
                let mut starts_on_a = None;
                let mut dead = false;
                let mut off = Rational::one();
                let step = Rational::new(1, kk);
                for &s in x {
                    if s == 0 || s > *k {
                        dead = true;
                    }
                    let on_a = *starts_on_a.get_or_insert(s == *a);
                    if on_a {
                        dead |= s != *a;
                        out.push(if dead { Rational::zero() } else { step.clone() });
                    } else {
                        off *= &step;
                        out.push(if dead { Rational::zero() } else { off.clone() });
                    }
                }
            }
        }
        out
    }

    pub fn eval_exact(&self, x: &[Symbol]) -> Rational {
        self.prefix_masses(x).pop().expect("nonempty")
    }

    /// A rational within `eps` of `mu(x)`.
    pub fn eval(&self, x: &[Symbol], eps: &Rational) -> Rational {
        approximate(self.eval_exact(x), eps)
    }

    /// `mu(x a) / mu(x)` for every `a` in the alphabet; `None` when `mu(x) = 0`.
    pub fn conditionals(&self, x: &[Symbol]) -> Option<Vec<(Symbol, Rational)>> {
        let base = self.eval_exact(x);
        if base.is_zero() {
            return None;
        }
        let mut ext = x.to_vec();
        ext.push(0);
        Some(
            self.alphabet
                .iter()
                .map(|&a| {
                    *ext.last_mut().expect("pushed") = a;
                    (a, self.eval_exact(&ext) / &base)
                })
                .collect(),
        )
    }
}

fn check_distinct(alphabet: &[Symbol]) -> Result<(), HypothesisError> {
    let mut seen = std::collections::BTreeSet::new();
    for &a in alphabet {
        if !seen.insert(a) {
            return Err(HypothesisError::DuplicateSymbol(a));
        }
    }
    Ok(())
}
