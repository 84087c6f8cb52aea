//! Indexed hypothesis lists and the interleaver that makes every list
//! element recur at infinitely many positions.
//!
//! Lists are 1-based. A list is either explicit (a finite sequence of
//! specs, validated up front) or generated by a deterministic rule that
//! produces the `i`-th spec on demand. Only enumerable lists exist here.

use std::sync::{Arc, RwLock};

use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::hypotheses::{FromSpec, HypothesisError, HypothesisKind, HypothesisSpec, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ListError {
    #[error("index {index} out of range for a list of {len}")]
    IndexOutOfRange { index: u64, len: u64 },
    #[error("list indices start at 1")]
    ZeroIndex,
    #[error("list element {index}: {source}")]
    Invalid {
        index: u64,
        #[source]
        source: HypothesisError,
    },
    #[error("generator produces {found} hypotheses, list holds {expected}")]
    KindMismatch { expected: HypothesisKind, found: HypothesisKind },
}

/// Deterministic rules producing the `i`-th spec of an infinite list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum Generator {
    /// `i -> simple pmf with f(j) = (j + c)^e` on symbols `1..=symbols`,
    /// where `(c, e)` is the `i`-th pair of the diagonal pairing.
    SimplePmfPowers { symbols: u64 },
    /// `i -> mu_k` with `k = i` and run symbol `a = 1`.
    MuKRuns,
}

impl Generator {
    pub fn kind(&self) -> HypothesisKind {
        match self {
            Generator::SimplePmfPowers { .. } => HypothesisKind::Pmf,
            Generator::MuKRuns => HypothesisKind::Measure,
        }
    }

    pub fn spec(&self, i: u64) -> HypothesisSpec {
        match self {
            Generator::SimplePmfPowers { symbols } => {
                let (c, e) = diagonal_pair(i);
                let term = Term::Pow(
                    Box::new(Term::Add(Box::new(Term::Var), Box::new(Term::constant(c)))),
                    Box::new(Term::constant(e)),
                );
                HypothesisSpec::SimplePmf { term, symbols: *symbols }
            }
            Generator::MuKRuns => HypothesisSpec::MuK { k: i, a: 1 },
        }
    }
}

enum Source<H> {
    Fixed(Vec<Arc<H>>),
    Generated { generator: Generator, cache: RwLock<Vec<Arc<H>>> },
}

/// A 1-based, stable enumeration of hypotheses of one family.
pub struct HypothesisList<H> {
    source: Source<H>,
    specs: Option<Vec<HypothesisSpec>>,
}

impl<H: FromSpec> HypothesisList<H> {
    /// Builds and validates every element.
    pub fn explicit(specs: Vec<HypothesisSpec>) -> Result<Self, ListError> {
        let items = specs
            .iter()
            .zip(1..)
            .map(|(s, index)| H::from_spec(s).map(Arc::new).map_err(|source| ListError::Invalid { index, source }))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(HypothesisList { source: Source::Fixed(items), specs: Some(specs) })
    }

    pub fn generated(generator: Generator) -> Result<Self, ListError> {
        if generator.kind() != H::KIND {
            return Err(ListError::KindMismatch { expected: H::KIND, found: generator.kind() });
        }
        Ok(HypothesisList { source: Source::Generated { generator, cache: RwLock::new(Vec::new()) }, specs: None })
    }

    /// A fixed list of already-built hypotheses.
    pub fn from_hypotheses(items: Vec<H>) -> Self {
        HypothesisList { source: Source::Fixed(items.into_iter().map(Arc::new).collect()), specs: None }
    }

    pub fn kind(&self) -> HypothesisKind {
        H::KIND
    }

    /// `None` for infinite (generated) lists.
    pub fn len(&self) -> Option<u64> {
        match &self.source {
            Source::Fixed(v) => Some(v.len() as u64),
            Source::Generated { .. } => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// `min(n, len)`: how far a stage-`n` scan may look.
    pub fn scan_bound(&self, n: u64) -> u64 {
        self.len().map_or(n, |l| l.min(n))
    }

    pub fn get(&self, i: u64) -> Result<Arc<H>, ListError> {
        if i == 0 {
            return Err(ListError::ZeroIndex);
        }
        match &self.source {
            Source::Fixed(v) => {
                v.get(i as usize - 1).cloned().ok_or(ListError::IndexOutOfRange { index: i, len: v.len() as u64 })
            }
            Source::Generated { generator, cache } => {
                if let Some(h) = cache.read().expect("cache lock").get(i as usize - 1) {
                    return Ok(h.clone());
                }
                let mut w = cache.write().expect("cache lock");
                while (w.len() as u64) < i {
                    let index = w.len() as u64 + 1;
                    let h =
                        H::from_spec(&generator.spec(index)).map_err(|source| ListError::Invalid { index, source })?;
                    w.push(Arc::new(h));
                }
                Ok(w[i as usize - 1].clone())
            }
        }
    }

    /// The spec element `i` was built from, when the list was built from specs.
    pub fn spec(&self, i: u64) -> Option<HypothesisSpec> {
        if i == 0 {
            return None;
        }
        match &self.source {
            Source::Generated { generator, .. } => Some(generator.spec(i)),
            Source::Fixed(_) => self.specs.as_ref()?.get(i as usize - 1).cloned(),
        }
    }

    /// Least index `<= bound` holding a hypothesis extensionally equal to `target`.
    pub fn minimal_equal_index(&self, target: &H, bound: u64) -> Result<Option<u64>, ListError> {
        for i in 1..=self.scan_bound(bound) {
            if self.get(i)?.same_as(target) {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

impl<H> std::fmt::Debug for HypothesisList<H> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.source {
            Source::Fixed(v) => write!(f, "HypothesisList(fixed, {} items)", v.len()),
            Source::Generated { generator, .. } => write!(f, "HypothesisList({generator:?})"),
        }
    }
}

/// Diagonal `d` spans positions `d(d-1)/2 + 1 ..= d(d+1)/2` and emits base
/// indices `1..=d`; returns `(d, offset within the diagonal)`.
fn diagonal(pos: u64) -> (u64, u64) {
    assert!(pos >= 1, "positions start at 1");
    let p = pos as u128;
    // smallest d with d(d+1)/2 >= pos
    let mut d = ((8 * p + 1).sqrt() - 1) / 2;
    while d * (d + 1) / 2 < p {
        d += 1;
    }
    while d > 1 && (d - 1) * d / 2 >= p {
        d -= 1;
    }
    let offset = p - (d - 1) * d / 2;
    (d as u64, offset as u64)
}

/// Base index emitted at interleaved position `pos`.
pub fn interleave_decode(pos: u64) -> u64 {
    diagonal(pos).1
}

/// `(c, e)` with `c + e = d - 1`, enumerating all pairs of naturals.
fn diagonal_pair(i: u64) -> (u64, u64) {
    let (d, t) = diagonal(i);
    (t - 1, d - t)
}

/// Re-enumeration of a list in which every element recurs infinitely often.
///
/// Positions whose decoded base index exceeds a finite list's length hold
/// no hypothesis.
#[derive(Debug)]
pub struct InterleavedList<H> {
    inner: Arc<HypothesisList<H>>,
}

impl<H: FromSpec> InterleavedList<H> {
    pub fn new(inner: Arc<HypothesisList<H>>) -> Self {
        InterleavedList { inner }
    }

    pub fn inner(&self) -> &Arc<HypothesisList<H>> {
        &self.inner
    }

    pub fn base_index(&self, pos: u64) -> u64 {
        interleave_decode(pos)
    }

    /// `Ok(None)` for positions past the end of a finite base list.
    pub fn get(&self, pos: u64) -> Result<Option<Arc<H>>, ListError> {
        let b = interleave_decode(pos);
        match self.inner.get(b) {
            Ok(h) => Ok(Some(h)),
            Err(ListError::IndexOutOfRange { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Rational;
    use crate::hypotheses::{MeasureHypothesis, PmfHypothesis};
    use proptest::prelude::*;

    /// Independent enumeration: walk diagonals with nested loops.
    fn brute_sequence(len: usize) -> Vec<u64> {
        let mut out = Vec::new();
        let mut d = 1;
        while out.len() < len {
            for b in 1..=d {
                out.push(b);
            }
            d += 1;
        }
        out.truncate(len);
        out
    }

    #[test]
    fn decode_examples() {
        assert_eq!(interleave_decode(1), 1);
        assert_eq!(interleave_decode(2), 1);
        assert_eq!(interleave_decode(3), 2);
        assert_eq!(interleave_decode(7), 1);
    }

    #[test]
    fn decode_matches_brute_force() {
        for (i, b) in brute_sequence(5000).into_iter().enumerate() {
            assert_eq!(interleave_decode(i as u64 + 1), b, "pos {}", i + 1);
        }
        // far out, and at u64 extremes
        assert_eq!(interleave_decode(500_500), 1000);
        assert_eq!(interleave_decode(500_501), 1);
        assert!(interleave_decode(u64::MAX) >= 1);
    }

    #[test]
    fn recurrence_counts_up_to_100() {
        let seq = brute_sequence(100);
        for b in 1..=10u64 {
            let brute = seq.iter().filter(|&&x| x == b).count();
            let fast = (1..=100).filter(|&p| interleave_decode(p) == b).count();
            assert_eq!(brute, fast);
            // b = 10 first appears at 55 and recurs at 65, 76, 88
            if b <= 9 {
                assert!(fast >= 5, "b = {b}");
            } else {
                assert_eq!(fast, 4);
            }
        }
    }

    proptest! {
        #[test]
        fn every_base_recurs(b in 1u64..200, start in 1u64..1_000_000) {
            // b reappears in each diagonal d >= b, so within the next two diagonals
            let (d, _) = diagonal(start);
            let d = d.max(b) + 2;
            let end = d * (d + 1) / 2;
            prop_assert!((start..=end).any(|p| interleave_decode(p) == b));
        }

        #[test]
        fn pairs_are_bijective(i in 1u64..100_000) {
            let (c, e) = diagonal_pair(i);
            let d = c + e + 1;
            prop_assert_eq!(d * (d - 1) / 2 + c + 1, i);
        }
    }

    fn pmf_list() -> HypothesisList<PmfHypothesis> {
        let spec =
            |a: i64| HypothesisSpec::FinitePmf { masses: vec![(0, Rational::new(a, 4)), (1, Rational::new(4 - a, 4))] };
        HypothesisList::explicit(vec![spec(1), spec(2), spec(3)]).unwrap()
    }

    #[test]
    fn explicit_get() {
        let l = pmf_list();
        assert_eq!(l.get(2).unwrap().eval_exact(0), Rational::new(1, 2));
        assert_eq!(l.get(4).unwrap_err(), ListError::IndexOutOfRange { index: 4, len: 3 });
        assert_eq!(l.get(0).unwrap_err(), ListError::ZeroIndex);
        assert_eq!(l.scan_bound(2), 2);
        assert_eq!(l.scan_bound(10), 3);
    }

    #[test]
    fn explicit_rejects_invalid_elements() {
        let bad =
            vec![HypothesisSpec::GeometricPmf, HypothesisSpec::FinitePmf { masses: vec![(0, Rational::new(1, 2))] }];
        assert!(matches!(HypothesisList::<PmfHypothesis>::explicit(bad), Err(ListError::Invalid { index: 2, .. })));
        assert!(matches!(
            HypothesisList::<MeasureHypothesis>::explicit(vec![HypothesisSpec::GeometricPmf]),
            Err(ListError::Invalid { index: 1, source: HypothesisError::WrongFamily { .. } })
        ));
    }

    #[test]
    fn generated_lists_are_stable() {
        let l = HypothesisList::<PmfHypothesis>::generated(Generator::SimplePmfPowers { symbols: 3 }).unwrap();
        let fifth = l.get(5).unwrap();
        // fifth pair is (c, e) = (1, 1): f(j) = j + 1 on {1,2,3}
        assert_eq!(fifth.eval_exact(1), Rational::new(2, 9));
        assert_eq!(*l.get(5).unwrap(), *fifth);
        let again = HypothesisList::<PmfHypothesis>::generated(Generator::SimplePmfPowers { symbols: 3 }).unwrap();
        assert_eq!(*again.get(5).unwrap(), *fifth);
        assert_eq!(l.len(), None);
        assert!(matches!(
            HypothesisList::<PmfHypothesis>::generated(Generator::MuKRuns),
            Err(ListError::KindMismatch { .. })
        ));
    }

    #[test]
    fn minimal_equal_index_uses_extensional_equality() {
        let l = pmf_list();
        let target = PmfHypothesis::finite(vec![(1, Rational::new(1, 4)), (0, Rational::new(3, 4))]).unwrap();
        assert_eq!(l.minimal_equal_index(&target, 10).unwrap(), Some(3));
        assert_eq!(l.minimal_equal_index(&target, 2).unwrap(), None);
    }

    #[test]
    fn interleaved_positions_past_the_end_are_empty() {
        let il = InterleavedList::new(Arc::new(pmf_list()));
        assert!(il.get(1).unwrap().is_some());
        assert!(il.get(10).unwrap().is_none()); // base 4
        assert_eq!(il.base_index(6), 3);
    }
}
