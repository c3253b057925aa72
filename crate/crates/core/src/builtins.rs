//! The example scenarios used throughout the documentation and tests, plus a
//! small builder for constructing trees in code.

use indexmap::IndexMap;

use crate::error::{BadParameter, ValidationErrors};
use crate::format::{RawEdge, RawKind, RawNode, RawProb, RawTree};
use crate::tree::DecisionTree;

/// Incrementally assembles a [`RawTree`].
#[derive(Clone, Debug)]
pub struct TreeBuilder {
    raw: RawTree,
}

impl TreeBuilder {
    pub fn new<S: AsRef<str>>(agents: &[S], root: &str) -> Self {
        TreeBuilder {
            raw: RawTree {
                agents: agents.iter().map(|a| a.as_ref().to_string()).collect(),
                edges: Vec::new(),
                info_sets: Vec::new(),
                nodes: IndexMap::new(),
                root: root.to_string(),
            },
        }
    }

    fn node(&mut self, id: &str, kind: RawKind, owner: Option<&str>, undesirable: Option<bool>) -> &mut Self {
        self.raw.nodes.insert(
            id.to_string(),
            RawNode {
                kind,
                owner: owner.map(str::to_string),
                undesirable,
            },
        );
        self
    }

    pub fn decision(&mut self, id: &str, owner: &str) -> &mut Self {
        self.node(id, RawKind::Decision, Some(owner), None)
    }

    pub fn ambiguity(&mut self, id: &str) -> &mut Self {
        self.node(id, RawKind::Ambiguity, None, None)
    }

    pub fn probability(&mut self, id: &str) -> &mut Self {
        self.node(id, RawKind::Probability, None, None)
    }

    pub fn outcome(&mut self, id: &str, undesirable: bool) -> &mut Self {
        self.node(id, RawKind::Outcome, None, Some(undesirable))
    }

    /// A labelled edge (an action, or a branch name under an ambiguity node).
    pub fn edge(&mut self, from: &str, label: &str, to: &str) -> &mut Self {
        self.raw.edges.push(RawEdge {
            action: Some(label.to_string()),
            from: from.to_string(),
            p: None,
            to: to.to_string(),
        });
        self
    }

    pub fn chance(&mut self, from: &str, p: f64, to: &str) -> &mut Self {
        self.raw.edges.push(RawEdge {
            action: None,
            from: from.to_string(),
            p: Some(RawProb::Number(p)),
            to: to.to_string(),
        });
        self
    }

    pub fn info_set(&mut self, members: &[&str]) -> &mut Self {
        self.raw
            .info_sets
            .push(members.iter().map(|m| m.to_string()).collect());
        self
    }

    pub fn raw(&self) -> &RawTree {
        &self.raw
    }

    pub fn into_raw(self) -> RawTree {
        self.raw
    }

    pub fn build(&self) -> Result<DecisionTree, ValidationErrors> {
        DecisionTree::validate(&self.raw)
    }
}

pub const BUILTIN_NAMES: [&str; 5] = ["fig1a", "fig1b", "fig2", "fig3", "fig4"];

/// Looks up a built-in scenario by name. `p` is only used by `fig1a`.
pub fn builtin(name: &str, p: Option<f64>) -> Result<DecisionTree, BadParameter> {
    match name {
        "fig1a" => fig1a(p.unwrap_or(0.3)),
        "fig1b" => Ok(fig1b()),
        "fig2" => Ok(fig2()),
        "fig3" => Ok(fig3()),
        "fig4" => Ok(fig4()),
        _ => Err(BadParameter(format!(
            "unknown scenario `{name}` (expected one of {})",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}

/// An autonomous vehicle approaching a deer: evading succeeds with
/// probability `p`; keeping steady is only safe if the deer moves.
pub fn fig1a(p: f64) -> Result<DecisionTree, BadParameter> {
    if !(p > 0.0 && p < 1.0) {
        return Err(BadParameter(format!("fig1a needs 0 < p < 1, got {p}")));
    }
    let mut b = TreeBuilder::new(&["i"], "v1");
    b.decision("v1", "i")
        .probability("v2")
        .ambiguity("v3")
        .outcome("w1", false)
        .outcome("w2", true)
        .outcome("w3", false)
        .outcome("w4", true)
        .edge("v1", "evade", "v2")
        .edge("v1", "steady", "v3")
        .chance("v2", p, "w1")
        .chance("v2", 1.0 - p, "w2")
        .edge("v3", "deer moves", "w3")
        .edge("v3", "deer stays", "w4");
    Ok(b.build().expect("fig1a is well formed"))
}

/// Agent i may skip a test; agent j cannot tell whether the test happened.
pub fn fig1b() -> DecisionTree {
    let mut b = TreeBuilder::new(&["i", "j"], "v1");
    b.decision("v1", "i")
        .decision("v2", "j")
        .decision("v3", "j")
        .outcome("w1", true)
        .outcome("w2", false)
        .outcome("w3", false)
        .outcome("w4", false)
        .edge("v1", "ignore", "v2")
        .edge("v1", "test", "v3")
        .edge("v2", "ignore", "w1")
        .edge("v2", "test", "w2")
        .edge("v3", "ignore", "w3")
        .edge("v3", "test", "w4")
        .info_set(&["v2", "v3"]);
    b.build().expect("fig1b is well formed")
}

/// The coordination game: a crash is avoided iff both pick the same side.
pub fn fig2() -> DecisionTree {
    let mut b = TreeBuilder::new(&["i", "j"], "v1");
    b.decision("v1", "i")
        .decision("v2", "j")
        .decision("v3", "j")
        .outcome("w1", false)
        .outcome("w2", true)
        .outcome("w3", true)
        .outcome("w4", false)
        .edge("v1", "left", "v2")
        .edge("v1", "right", "v3")
        .edge("v2", "left", "w1")
        .edge("v2", "right", "w2")
        .edge("v3", "left", "w3")
        .edge("v3", "right", "w4")
        .info_set(&["v2", "v3"]);
    b.build().expect("fig2 is well formed")
}

/// A machine operator repeatedly choosing between repair and continuing.
pub fn fig3() -> DecisionTree {
    let mut b = TreeBuilder::new(&["i"], "v1");
    b.decision("v1", "i")
        .probability("v2")
        .decision("v3", "i")
        .probability("v4")
        .decision("v5", "i")
        .outcome("w1", false)
        .outcome("w2", true)
        .outcome("w3", false)
        .outcome("w4", true)
        .outcome("w5", false)
        .outcome("w6", true)
        .edge("v1", "repair", "w1")
        .edge("v1", "continue", "v2")
        .chance("v2", 0.1, "v3")
        .chance("v2", 0.9, "w2")
        .edge("v3", "repair", "w3")
        .edge("v3", "continue", "v4")
        .chance("v4", 0.1, "v5")
        .chance("v4", 0.9, "w4")
        .edge("v5", "repair", "w5")
        .edge("v5", "continue", "w6");
    b.build().expect("fig3 is well formed")
}

/// The coordination game against nature: whether heating up is harmful
/// depends on an unobserved environment branch at the root.
pub fn fig4() -> DecisionTree {
    let mut b = TreeBuilder::new(&["i"], "v0");
    b.ambiguity("v0")
        .decision("v1", "i")
        .decision("v2", "i")
        .outcome("w1", false)
        .outcome("w2", true)
        .outcome("w3", true)
        .outcome("w4", false)
        .edge("v0", "no risk", "v1")
        .edge("v0", "cooling", "v2")
        .edge("v1", "ignore", "w1")
        .edge("v1", "heat up", "w2")
        .edge("v2", "ignore", "w3")
        .edge("v2", "heat up", "w4")
        .info_set(&["v1", "v2"]);
    b.build().expect("fig4 is well formed")
}
