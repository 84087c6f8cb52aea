//! Exact rational arithmetic and outward-rounded brackets for the two
//! transcendental quantities the identifiers need: the fluctuation
//! threshold `tau(n) = sqrt(ln n / n)` and `log2` of a rational mass.
//!
//! Every comparison against an irrational threshold goes through a
//! [`Bracket`] with rational endpoints, so decisions never depend on
//! floating-point rounding.

mod rational;
mod real;

pub use rational::{ParseRationalError, Rational};
pub use real::{ceil_log2, ln_bracket, log2_bracket, tau, TAU_MAX_WIDTH_BITS};

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    lo: Rational,
    hi: Rational,
}

/// Position of an exact value relative to a [`Bracket`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Below,
    Inside,
    Above,
}

impl Bracket {
    /// Panics if `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "bracket endpoints out of order: {lo} > {hi}");
        Bracket { lo, hi }
    }

    pub fn exact(v: Rational) -> Self {
        Bracket { lo: v.clone(), hi: v }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    /// Shift both endpoints by an exact amount.
    pub fn offset(&self, by: &Rational) -> Bracket {
        Bracket { lo: &self.lo + by, hi: &self.hi + by }
    }
}

/// `Below` iff `v < lo`, `Above` iff `v > hi`, `Inside` otherwise.
pub fn cmp_against_bracket(v: &Rational, b: &Bracket) -> Verdict {
    if v < &b.lo {
        Verdict::Below
    } else if v > &b.hi {
        Verdict::Above
    } else {
        Verdict::Inside
    }
}
