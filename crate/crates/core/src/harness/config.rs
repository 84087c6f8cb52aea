//! Experiment configuration: a single JSON document, validated into a
//! ready-to-run [`Experiment`].

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::complexity::{ComplexityEstimator, Scheme};
use crate::enumeration::{Generator, HypothesisList, InterleavedList, ListError};
use crate::exactnum::Rational;
use crate::hypotheses::{
    FromSpec, HypothesisKind, HypothesisSpec, MarkovHypothesis, MeasureHypothesis, PmfHypothesis, SwanBranch, Symbol,
    Term,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Iid,
    Markov,
    Measure,
    Demo,
}

/// Hypothesis list declaration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ListDecl {
    Inline(Vec<HypothesisSpec>),
    Generator(Generator),
    Grid(Grid),
}

/// Cartesian product of parameter values, first parameter varying slowest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Grid {
    SimplePmf { term: Vec<Term>, symbols: Vec<u64> },
    MuK { k: Vec<u64>, a: Vec<Symbol> },
    Deterministic { alphabet: Vec<Symbol>, symbol: Vec<Symbol> },
    BlackSwan { n_switch: Vec<u64>, branch: Vec<SwanBranch> },
}

impl Grid {
    pub fn expand(&self) -> Vec<HypothesisSpec> {
        fn product<A: Clone, B: Clone, T>(xs: &[A], ys: &[B], f: impl Fn(A, B) -> T) -> Vec<T> {
            xs.iter().flat_map(|x| ys.iter().map(|y| f(x.clone(), y.clone()))).collect()
        }
        match self {
            Grid::SimplePmf { term, symbols } => {
                product(term, symbols, |term, symbols| HypothesisSpec::SimplePmf { term, symbols })
            }
            Grid::MuK { k, a } => product(k, a, |k, a| HypothesisSpec::MuK { k, a }),
            Grid::Deterministic { alphabet, symbol } => symbol
                .iter()
                .map(|&symbol| HypothesisSpec::Deterministic { alphabet: alphabet.clone(), symbol })
                .collect(),
            Grid::BlackSwan { n_switch, branch } => {
                product(n_switch, branch, |n_switch, branch| HypothesisSpec::BlackSwan { n_switch, branch, a: 1, b: 2 })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckpointConfig {
    pub stride: u64,
}

impl Default for CheckpointConfig {
    fn default() -> Self {
        CheckpointConfig { stride: 100 }
    }
}

/// Explicit seeds, or `count` seeds `base, base + 1, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedSpec {
    List(Vec<u64>),
    Range {
        count: u64,
        #[serde(default)]
        base: u64,
    },
}

impl Default for SeedSpec {
    fn default() -> Self {
        SeedSpec::Range { count: 1, base: 0 }
    }
}

impl SeedSpec {
    pub fn expand(&self) -> Vec<u64> {
        match self {
            SeedSpec::List(v) => v.clone(),
            SeedSpec::Range { count, base } => (0..*count).map(|i| base.wrapping_add(i)).collect(),
        }
    }
}

fn all_schemes() -> Vec<Scheme> {
    vec![Scheme::Literal, Scheme::Run, Scheme::Model]
}

fn one() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorConfig {
    #[serde(default = "all_schemes")]
    pub schemes: Vec<Scheme>,
    /// Defaults to the symbols of the fixed input, or the target's alphabet.
    #[serde(default)]
    pub alphabet: Option<Vec<Symbol>>,
    /// Models for the model scheme; defaults to the hypothesis list.
    #[serde(default)]
    pub models: Option<ListDecl>,
    /// Complexity stage used at sample size `n` is `stage_multiplier * n`.
    #[serde(default = "one")]
    pub stage_multiplier: u64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig { schemes: all_schemes(), alphabet: None, models: None, stage_multiplier: 1 }
    }
}

/// A fixed input sequence for measure mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputSpec {
    Sequence(Vec<Symbol>),
    Repeat { pattern: Vec<Symbol>, times: u64 },
}

impl InputSpec {
    pub fn expand(&self) -> Vec<Symbol> {
        match self {
            InputSpec::Sequence(v) => v.clone(),
            InputSpec::Repeat { pattern, times } => {
                pattern.iter().copied().cycle().take(pattern.len() * *times as usize).collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemoConfig {
    pub n_switch: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default)]
    pub hypotheses: Option<ListDecl>,
    #[serde(default)]
    pub target_index: Option<u64>,
    #[serde(default)]
    pub n_max: Option<u64>,
    #[serde(default)]
    pub checkpoint: CheckpointConfig,
    #[serde(default)]
    pub seeds: SeedSpec,
    /// Markov mode: initial state; defaults to the target's first state.
    #[serde(default)]
    pub start_state: Option<Symbol>,
    #[serde(default)]
    pub estimator: Option<EstimatorConfig>,
    #[serde(default)]
    pub input: Option<InputSpec>,
    #[serde(default)]
    pub demo: Option<DemoConfig>,
    /// Output directory.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn invalid(path: impl Into<String>, message: impl std::fmt::Display) -> HarnessError {
    HarnessError::ConfigInvalid { path: path.into(), message: message.to_string() }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            invalid(if path == "." { String::new() } else { path }, e.inner())
        })
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.to_owned(), source })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks every field and builds the hypothesis lists.
    pub fn validate(&self) -> Result<Experiment, HarnessError> {
        if self.checkpoint.stride == 0 {
            return Err(invalid("checkpoint.stride", "must be at least 1"));
        }
        let seeds = self.seeds.expand();
        if seeds.is_empty() {
            return Err(invalid(
                match self.seeds {
                    SeedSpec::List(_) => "seeds",
                    SeedSpec::Range { .. } => "seeds.count",
                },
                "at least one seed is required",
            ));
        }
        let plan = match self.mode {
            Mode::Demo => {
                let demo = self.demo.as_ref().ok_or_else(|| invalid("demo", "required in demo mode"))?;
                if demo.n_switch == 0 {
                    return Err(invalid("demo.n_switch", "must be at least 1"));
                }
                Plan::Demo { n_switch: demo.n_switch }
            }
            Mode::Iid => {
                let list = Arc::new(self.build_list::<PmfHypothesis>()?);
                let target = self.target(&list)?;
                Plan::Iid { list, target }
            }
            Mode::Markov => {
                let list = Arc::new(self.build_list::<MarkovHypothesis>()?);
                let target = self.target(&list)?;
                let chain = list.get(target).map_err(|e| invalid("target_index", e))?;
                let start = self.start_state.unwrap_or(chain.states()[0]);
                if chain.state_index(start).is_none() {
                    return Err(invalid("start_state", format!("{start} is not a state of the target chain")));
                }
                Plan::Markov { list, target, start }
            }
            Mode::Measure => self.measure_plan()?,
        };
        let n_max = match self.mode {
            Mode::Demo => 0,
            _ => match self.n_max {
                None => return Err(invalid("n_max", "required")),
                Some(0) => return Err(invalid("n_max", "must be at least 1")),
                Some(n) => n,
            },
        };
        if let Plan::Measure { fixed: Some(x), .. } = &plan {
            if (x.len() as u64) < n_max {
                return Err(invalid("input", format!("{} symbols given, n_max is {n_max}", x.len())));
            }
        }
        Ok(Experiment { plan, n_max, stride: self.checkpoint.stride, seeds, output: self.output.clone() })
    }

    fn decl(&self) -> Result<&ListDecl, HarnessError> {
        self.hypotheses.as_ref().ok_or_else(|| invalid("hypotheses", "required"))
    }

    fn build_list<H: FromSpec>(&self) -> Result<HypothesisList<H>, HarnessError> {
        build_list(self.decl()?, "hypotheses")
    }

    fn target<H: FromSpec>(&self, list: &HypothesisList<H>) -> Result<u64, HarnessError> {
        let t = self.target_index.ok_or_else(|| invalid("target_index", "required"))?;
        check_index(list, t)?;
        Ok(t)
    }

    fn measure_plan(&self) -> Result<Plan, HarnessError> {
        let list = Arc::new(self.build_list::<MeasureHypothesis>()?);
        let fixed = self.input.as_ref().map(InputSpec::expand);
        let target = match (self.target_index, &fixed) {
            (None, None) => return Err(invalid("target_index", "required unless a fixed input is given")),
            (None, Some(_)) => None,
            (Some(t), _) => {
                check_index(&list, t)?;
                Some(t)
            }
        };
        let cfg = self.estimator.clone().unwrap_or_default();
        if !cfg.schemes.contains(&Scheme::Literal) {
            return Err(invalid("estimator.schemes", "the literal scheme is required"));
        }
        if cfg.stage_multiplier == 0 {
            return Err(invalid("estimator.stage_multiplier", "must be at least 1"));
        }
        let models = match &cfg.models {
            None => list.clone(),
            Some(decl) => Arc::new(build_list(decl, "estimator.models")?),
        };
        let alphabet = match (&cfg.alphabet, &fixed, target) {
            (Some(a), _, _) => a.clone(),
            (None, Some(x), _) => x.clone(),
            (None, None, Some(t)) => list.get(t).map_err(|e| invalid("target_index", e))?.alphabet().to_vec(),
            (None, None, None) => unreachable!("target checked above"),
        };
        if let Some(x) = &fixed {
            if let Some(a) = x.iter().find(|a| !alphabet.contains(a)) {
                return Err(invalid("estimator.alphabet", format!("input symbol {a} is not in the alphabet")));
            }
        }
        let estimator = ComplexityEstimator::new(&cfg.schemes, &alphabet, Some(models));
        Ok(Plan::Measure {
            list: Arc::new(InterleavedList::new(list)),
            target,
            fixed,
            estimator: Arc::new(estimator),
            stage_multiplier: cfg.stage_multiplier,
        })
    }
}

fn check_index<H: FromSpec>(list: &HypothesisList<H>, t: u64) -> Result<(), HarnessError> {
    if t == 0 {
        return Err(invalid("target_index", "indices start at 1"));
    }
    list.get(t).map(|_| ()).map_err(|e| invalid("target_index", e))
}

pub(crate) fn build_list<H: FromSpec>(decl: &ListDecl, path: &str) -> Result<HypothesisList<H>, HarnessError> {
    let (specs, sub) = match decl {
        ListDecl::Generator(g) => {
            return HypothesisList::generated(g.clone()).map_err(|e| invalid(format!("{path}.generator"), e));
        }
        ListDecl::Inline(specs) => (specs.clone(), "inline"),
        ListDecl::Grid(grid) => (grid.expand(), "grid"),
    };
    if specs.is_empty() {
        return Err(invalid(format!("{path}.{sub}"), "empty hypothesis list"));
    }
    if let Some((i, s)) = specs.iter().enumerate().find(|(_, s)| s.kind() != H::KIND) {
        return Err(invalid(format!("{path}.{sub}[{i}]"), format!("a {} hypothesis in a {} list", s.kind(), H::KIND)));
    }
    HypothesisList::explicit(specs).map_err(|e| match e {
        ListError::Invalid { index, source } => invalid(format!("{path}.{sub}[{}]", index - 1), source),
        other => invalid(path, other),
    })
}

/// A validated experiment.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub plan: Plan,
    pub n_max: u64,
    pub stride: u64,
    pub seeds: Vec<u64>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub enum Plan {
    Iid {
        list: Arc<HypothesisList<PmfHypothesis>>,
        target: u64,
    },
    Markov {
        list: Arc<HypothesisList<MarkovHypothesis>>,
        target: u64,
        start: Symbol,
    },
    Measure {
        list: Arc<InterleavedList<MeasureHypothesis>>,
        target: Option<u64>,
        fixed: Option<Vec<Symbol>>,
        estimator: Arc<ComplexityEstimator>,
        stage_multiplier: u64,
    },
    Demo {
        n_switch: u64,
    },
}

impl Plan {
    pub fn kind(&self) -> Option<HypothesisKind> {
        match self {
            Plan::Iid { .. } => Some(HypothesisKind::Pmf),
            Plan::Markov { .. } => Some(HypothesisKind::Markov),
            Plan::Measure { .. } => Some(HypothesisKind::Measure),
            Plan::Demo { .. } => None,
        }
    }
}

/// A transition matrix file for `stationary`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub states: Vec<Symbol>,
    pub rows: Vec<Vec<Rational>>,
}

impl ChainFile {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.to_owned(), source })?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        serde_path_to_error::deserialize(de).map_err(|e| invalid(e.path().to_string(), e.inner()))
    }

    pub fn build(&self) -> Result<MarkovHypothesis, HarnessError> {
        MarkovHypothesis::new(self.states.clone(), self.rows.clone()).map_err(|e| invalid("rows", e))
    }
}
