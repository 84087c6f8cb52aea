//! Identification in the limit of computable probability laws from data.
//!
//! Three identifiers are provided: for i.i.d. draws from a probability mass
//! function ([`iid_identify`]), for runs of an ergodic Markov chain
//! ([`markov_identify`]) and for sequences typical for a computable measure
//! ([`measure_identify`]). Each scans a 1-based hypothesis list
//! ([`enumeration`]) and emits a guess per checkpoint; the guess settles on
//! a correct index after finitely many checkpoints, without ever announcing
//! when.
//!
//! All probabilities are exact rationals ([`exactnum::Rational`]) and every
//! comparison against an irrational threshold goes through a rigorous
//! bracket, so results are reproducible bit for bit.

pub mod complexity;
pub mod enumeration;
pub mod exactnum;
pub mod harness;
pub mod hypotheses;
pub mod iid_identify;
pub mod markov_identify;
pub mod measure_identify;
pub mod predict;
pub mod sampling;

pub use enumeration::{interleave_decode, HypothesisList, InterleavedList, ListError};
pub use exactnum::{tau, Bracket, Rational, Verdict};
pub use hypotheses::{
    FromSpec, HypothesisError, HypothesisKind, HypothesisSpec, MarkovHypothesis, MeasureHypothesis, PmfHypothesis,
    Symbol,
};
pub use iid_identify::{Guess, GuessTrace, TestOutcome};
pub use sampling::{Rng, SamplePrefix};
