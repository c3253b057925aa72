use std::fmt;

use thiserror::Error;

/// Lookup failures against an already validated tree.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("`{to}` is not a proper descendant of `{from}`")]
    NotOnPath { from: String, to: String },
    #[error("`{0}` is not a decision node")]
    NotDecisionNode(String),
    #[error("node `{node}` has no action `{action}`")]
    UnknownAction { node: String, action: String },
    #[error("groups are limited to {max} agents, tree has {found}")]
    TooManyAgents { max: usize, found: usize },
}

/// One violated structural invariant, naming the offending node or edge.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("not a rooted tree: {0}")]
    NonTreeStructure(String),
    #[error("probabilities under `{node}` sum to {sum}, expected 1 within {eps}")]
    ProbabilitySumMismatch { node: String, sum: f64, eps: f64 },
    #[error("`{node}`: {detail}")]
    LeafKindMismatch { node: String, detail: String },
    #[error("information set {members:?} mixes agents {agents:?}")]
    InfoSetAgentMismatch { members: Vec<String>, agents: Vec<String> },
    #[error("information set {members:?} has differing action sets")]
    InfoSetActionSetMismatch { members: Vec<String> },
    #[error("duplicate label `{label}` under `{node}`")]
    DuplicateActionLabel { node: String, label: String },
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown agent `{agent}` owning `{node}`")]
    UnknownAgent { node: String, agent: String },
    #[error("duplicate agent `{0}`")]
    DuplicateAgent(String),
    #[error("empty identifier")]
    EmptyId,
    #[error("`{node}`: {detail}")]
    BadAttribute { node: String, detail: String },
    #[error("edge {from} -> {to}: {detail}")]
    BadEdge { from: String, to: String, detail: String },
    #[error("information set {members:?}: {detail}")]
    BadInfoSet { members: Vec<String>, detail: String },
    #[error("at most {max} agents are supported, found {found}")]
    TooManyAgents { max: usize, found: usize },
}

/// Every violation found in one description.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationErrors(pub Vec<ValidationError>);

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationErrors {}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid tree:\n{0}")]
    Invalid(ValidationErrors),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AggError {
    #[error("aggregator `{name}` is declared proper but returned {value}")]
    CodomainViolation { name: String, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("{what}: {count} combinations exceed the cap of {cap}")]
    ExplosionGuard {
        what: &'static str,
        count: u128,
        cap: u64,
    },
    #[error("no choice defined at reached node `{0}`")]
    DomainGap(String),
    #[error("contribution undefined: {0}")]
    UndefinedQuery(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Aggregation(#[from] AggError),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("bad parameter: {0}")]
pub struct BadParameter(pub String);
