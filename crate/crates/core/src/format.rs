//! The tree file format.
//!
//! A tree is a single JSON object:
//!
//! ```json
//! {
//!   "agents": ["i"],
//!   "edges": [
//!     {"action": "evade", "from": "v1", "to": "v2"},
//!     {"from": "v2", "p": "3/10", "to": "w1"}
//!   ],
//!   "info_sets": [],
//!   "nodes": {"v1": {"kind": "decision", "owner": "i"}, "...": {}},
//!   "root": "v1"
//! }
//! ```
//!
//! Probabilities may be numbers or strings holding a decimal or a fraction.
//! Output is canonical: object keys sorted, nodes in declaration order, edges
//! grouped by parent.

use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::LoadError;
use crate::tree::{DecisionTree, NodeKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTree {
    pub agents: Vec<String>,
    #[serde(default)]
    pub edges: Vec<RawEdge>,
    #[serde(default)]
    pub info_sets: Vec<Vec<String>>,
    pub nodes: IndexMap<String, RawNode>,
    pub root: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RawKind {
    Decision,
    Ambiguity,
    Probability,
    Outcome,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawNode {
    pub kind: RawKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub owner: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub undesirable: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEdge {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<String>,
    pub from: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<RawProb>,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawProb {
    Number(f64),
    Text(String),
}

impl RawProb {
    /// Decodes `0.9`, `"0.9"` or `"9/10"`.
    pub fn value(&self) -> Result<f64, String> {
        match self {
            RawProb::Number(x) => Ok(*x),
            RawProb::Text(s) => parse_probability(s),
        }
    }
}

pub fn parse_probability(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let bad = || format!("cannot read probability `{s}`");
    match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad())?;
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0.0 {
                return Err(bad());
            }
            Ok(n / d)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

impl RawTree {
    pub fn from_tree(t: &DecisionTree) -> RawTree {
        let mut nodes = IndexMap::new();
        let mut edges = Vec::new();
        for v in t.nodes() {
            let raw = match t.kind(v) {
                NodeKind::Decision { owner } => RawNode {
                    kind: RawKind::Decision,
                    owner: Some(t.agent_name(*owner).to_string()),
                    undesirable: None,
                },
                NodeKind::Ambiguity => RawNode {
                    kind: RawKind::Ambiguity,
                    owner: None,
                    undesirable: None,
                },
                NodeKind::Probability => RawNode {
                    kind: RawKind::Probability,
                    owner: None,
                    undesirable: None,
                },
                NodeKind::Outcome { undesirable } => RawNode {
                    kind: RawKind::Outcome,
                    owner: None,
                    undesirable: Some(*undesirable),
                },
            };
            nodes.insert(t.id(v).to_string(), raw);
            for e in t.children(v) {
                edges.push(RawEdge {
                    action: e.label.clone(),
                    from: t.id(v).to_string(),
                    p: e.prob.map(RawProb::Number),
                    to: t.id(e.child).to_string(),
                });
            }
        }
        let info_sets = t
            .classes()
            .iter()
            .filter(|c| c.len() > 1)
            .map(|c| c.iter().map(|&v| t.id(v).to_string()).collect())
            .collect();
        RawTree {
            agents: t.agents().to_vec(),
            edges,
            info_sets,
            nodes,
            root: t.id(t.root()).to_string(),
        }
    }
}

pub fn parse_raw(text: &str) -> Result<RawTree, LoadError> {
    serde_json::from_str(text).map_err(|e| LoadError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Parses and validates a tree description.
pub fn parse_tree(text: &str) -> Result<DecisionTree, LoadError> {
    let raw = parse_raw(text)?;
    DecisionTree::validate(&raw).map_err(LoadError::Invalid)
}

/// Canonical text form of a tree, terminated by a newline.
pub fn to_canonical(t: &DecisionTree) -> String {
    let mut s = serde_json::to_string_pretty(&RawTree::from_tree(t)).expect("tree serializes");
    s.push('\n');
    s
}

pub fn load(path: impl AsRef<Path>) -> Result<DecisionTree, LoadError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_tree(&text)
}

pub fn save(t: &DecisionTree, path: impl AsRef<Path>) -> std::io::Result<()> {
    std::fs::write(path, to_canonical(t))
}
