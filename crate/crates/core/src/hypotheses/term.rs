//! Closed integer term language used to define simple pmfs
//! `p(a_j) = f(j) / sum_h f(h)`.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! expr   := prod ('+' prod)*
//! prod   := pow ('*' pow)*
//! pow    := atom ('^' pow)?
//! atom   := integer | 'j' | '(' expr ')'
//! ```
//!
//! Composition is term substitution: [`Term::compose`] replaces `j`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// Largest exponent a term may evaluate; keeps evaluation total in practice.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Const(BigUint),
    Var,
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Pow(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("cannot parse term `{input}` at byte {pos}")]
    Parse { input: String, pos: usize },
    #[error("exponent {0} exceeds the supported maximum")]
    ExponentTooLarge(BigUint),
}

impl Term {
    pub fn constant(v: u64) -> Term {
        Term::Const(BigUint::from(v))
    }

    pub fn eval(&self, j: u64) -> Result<BigUint, TermError> {
        Ok(match self {
            Term::Const(c) => c.clone(),
            Term::Var => BigUint::from(j),
            Term::Add(a, b) => a.eval(j)? + b.eval(j)?,
            Term::Mul(a, b) => a.eval(j)? * b.eval(j)?,
            Term::Pow(a, b) => {
                let e = b.eval(j)?;
                let e32 = e.to_u32().filter(|&e| e <= MAX_EXPONENT).ok_or(TermError::ExponentTooLarge(e))?;
                a.eval(j)?.pow(e32)
            }
        })
    }

    /// `self` with every occurrence of `j` replaced by `inner`.
    pub fn compose(&self, inner: &Term) -> Term {
        match self {
            Term::Const(c) => Term::Const(c.clone()),
            Term::Var => inner.clone(),
            Term::Add(a, b) => Term::Add(Box::new(a.compose(inner)), Box::new(b.compose(inner))),
            Term::Mul(a, b) => Term::Mul(Box::new(a.compose(inner)), Box::new(b.compose(inner))),
            Term::Pow(a, b) => Term::Pow(Box::new(a.compose(inner)), Box::new(b.compose(inner))),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Add(..) => 1,
            Term::Mul(..) => 2,
            Term::Pow(..) => 3,
            Term::Const(_) | Term::Var => 4,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |f: &mut fmt::Formatter<'_>, t: &Term, min: u8| {
            if t.precedence() < min {
                write!(f, "({t})")
            } else {
                write!(f, "{t}")
            }
        };
        match self {
            Term::Const(c) => write!(f, "{c}"),
            Term::Var => f.write_str("j"),
            Term::Add(a, b) => {
                sub(f, a, 1)?;
                f.write_str(" + ")?;
                sub(f, b, 2)
            }
            Term::Mul(a, b) => {
                sub(f, a, 2)?;
                f.write_str(" * ")?;
                sub(f, b, 3)
            }
            // right associative
            Term::Pow(a, b) => {
                sub(f, a, 4)?;
                f.write_str("^")?;
                sub(f, b, 3)
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self) -> TermError {
        TermError::Parse { input: self.src.to_string(), pos: self.pos }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Term, TermError> {
        let mut lhs = self.prod()?;
        while self.eat(b'+') {
            lhs = Term::Add(Box::new(lhs), Box::new(self.prod()?));
        }
        Ok(lhs)
    }

    fn prod(&mut self) -> Result<Term, TermError> {
        let mut lhs = self.pow()?;
        while self.eat(b'*') {
            lhs = Term::Mul(Box::new(lhs), Box::new(self.pow()?));
        }
        Ok(lhs)
    }

    fn pow(&mut self) -> Result<Term, TermError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            Ok(Term::Pow(Box::new(base), Box::new(self.pow()?)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Term, TermError> {
        self.skip_ws();
        match self.bytes.get(self.pos) {
            Some(b'j') => {
                self.pos += 1;
                Ok(Term::Var)
            }
            Some(b'(') => {
                self.pos += 1;
                let t = self.expr()?;
                if self.eat(b')') {
                    Ok(t)
                } else {
                    Err(self.err())
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let v: BigUint = self.src[start..self.pos].parse().map_err(|_| self.err())?;
                Ok(Term::Const(v))
            }
            _ => Err(self.err()),
        }
    }
}

impl FromStr for Term {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s, bytes: s.as_bytes(), pos: 0 };
        let t = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.err());
        }
        Ok(t)
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Sum of `f(1) .. f(n)`.
pub(crate) fn term_total(f: &Term, n: u64) -> Result<(Vec<BigUint>, BigUint), TermError> {
    let mut vals = Vec::with_capacity(n as usize);
    let mut total = BigUint::zero();
    for j in 1..=n {
        let v = f.eval(j)?;
        total += &v;
        vals.push(v);
    }
    Ok((vals, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ev(s: &str, j: u64) -> u64 {
        s.parse::<Term>().unwrap().eval(j).unwrap().to_u64().unwrap()
    }

    #[test]
    fn evaluates() {
        assert_eq!(ev("1", 9), 1);
        assert_eq!(ev("j", 9), 9);
        assert_eq!(ev("2^j", 3), 8);
        assert_eq!(ev("2^j^2", 2), 16);
        assert_eq!(ev("j*j + 3", 4), 19);
        assert_eq!(ev("(j + 1)^2", 2), 9);
    }

    #[test]
    fn rejects_garbage() {
        assert!("j +".parse::<Term>().is_err());
        assert!("(j".parse::<Term>().is_err());
        assert!("k".parse::<Term>().is_err());
        assert!("2 2".parse::<Term>().is_err());
    }

    #[test]
    fn composition_substitutes() {
        let outer: Term = "j^2 + 1".parse().unwrap();
        let inner: Term = "j + 1".parse().unwrap();
        let c = outer.compose(&inner);
        assert_eq!(c.eval(2).unwrap(), BigUint::from(10u32));
    }

    #[test]
    fn huge_exponent_is_an_error() {
        let t: Term = "2^(j*100000)".parse().unwrap();
        assert!(matches!(t.eval(1), Err(TermError::ExponentTooLarge(_))));
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![(0u64..20).prop_map(Term::constant), Just(Term::Var)];
        leaf.prop_recursive(4, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::Mul(Box::new(a), Box::new(b))),
                (inner, 0u64..3).prop_map(|(a, e)| Term::Pow(Box::new(a), Box::new(Term::constant(e)))),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_parses_to_equal_values(t in arb_term(), j in 1u64..6) {
            let back: Term = t.to_string().parse().unwrap();
            prop_assert_eq!(back.eval(j).unwrap(), t.eval(j).unwrap());
        }
    }
}
