//! Validated multi-agent decision trees and the structural queries used by
//! every other module.

use std::collections::{HashMap, HashSet};

use crate::error::{TreeError, ValidationError, ValidationErrors};
use crate::format::{RawKind, RawTree};
use crate::group::{Group, MAX_AGENTS};
use crate::EPS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeIx(pub(crate) usize);

impl NodeIx {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgentIx(pub(crate) usize);

impl AgentIx {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    Decision { owner: AgentIx },
    Ambiguity,
    Probability,
    Outcome { undesirable: bool },
}

/// An edge seen from its parent.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub child: NodeIx,
    /// Action name under decision nodes, branch name under ambiguity nodes.
    pub label: Option<String>,
    /// Present exactly under probability nodes.
    pub prob: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
struct Node {
    id: String,
    kind: NodeKind,
    parent: Option<NodeIx>,
    children: Vec<Edge>,
    class: usize,
    depth: usize,
}

/// An immutable, validated decision tree.
///
/// Nodes keep the order in which they were declared. Every node belongs to
/// exactly one information class; nodes that are not decision nodes, and
/// decision nodes that were not listed in an information set, form singleton
/// classes. Classes are ordered by their first member.
#[derive(Clone, Debug, PartialEq)]
pub struct DecisionTree {
    agents: Vec<String>,
    nodes: Vec<Node>,
    root: NodeIx,
    classes: Vec<Vec<NodeIx>>,
    by_id: HashMap<String, NodeIx>,
    // preorder entry/exit stamps: x ∈ B(v) iff tin[v] <= tin[x] < tout[v]
    tin: Vec<usize>,
    tout: Vec<usize>,
    preorder: Vec<NodeIx>,
}

impl DecisionTree {
    /// Checks every structural invariant of `raw` and returns either the tree
    /// or the complete list of violations.
    pub fn validate(raw: &RawTree) -> Result<DecisionTree, ValidationErrors> {
        Self::validate_with(raw, EPS)
    }

    pub fn validate_with(raw: &RawTree, eps: f64) -> Result<DecisionTree, ValidationErrors> {
        let mut errs = Vec::new();

        let mut agent_ix = HashMap::new();
        for a in &raw.agents {
            if a.is_empty() {
                errs.push(ValidationError::EmptyId);
            } else if agent_ix.insert(a.clone(), AgentIx(agent_ix.len())).is_some() {
                errs.push(ValidationError::DuplicateAgent(a.clone()));
            }
        }
        if raw.agents.len() > MAX_AGENTS {
            errs.push(ValidationError::TooManyAgents {
                max: MAX_AGENTS,
                found: raw.agents.len(),
            });
        }

        let mut by_id = HashMap::new();
        let mut nodes = Vec::with_capacity(raw.nodes.len());
        for (id, rn) in &raw.nodes {
            if id.is_empty() {
                errs.push(ValidationError::EmptyId);
            }
            let kind = match rn.kind {
                RawKind::Decision => match &rn.owner {
                    Some(o) => match agent_ix.get(o) {
                        Some(&a) => NodeKind::Decision { owner: a },
                        None => {
                            errs.push(ValidationError::UnknownAgent {
                                node: id.clone(),
                                agent: o.clone(),
                            });
                            NodeKind::Decision { owner: AgentIx(0) }
                        }
                    },
                    None => {
                        errs.push(ValidationError::BadAttribute {
                            node: id.clone(),
                            detail: "decision node without owner".into(),
                        });
                        NodeKind::Decision { owner: AgentIx(0) }
                    }
                },
                RawKind::Ambiguity => NodeKind::Ambiguity,
                RawKind::Probability => NodeKind::Probability,
                RawKind::Outcome => NodeKind::Outcome {
                    undesirable: rn.undesirable.unwrap_or(false),
                },
            };
            if rn.owner.is_some() && rn.kind != RawKind::Decision {
                errs.push(ValidationError::BadAttribute {
                    node: id.clone(),
                    detail: "only decision nodes have an owner".into(),
                });
            }
            if rn.undesirable.is_some() && rn.kind != RawKind::Outcome {
                errs.push(ValidationError::BadAttribute {
                    node: id.clone(),
                    detail: "only outcome nodes carry `undesirable`".into(),
                });
            }
            by_id.insert(id.clone(), NodeIx(nodes.len()));
            nodes.push(Node {
                id: id.clone(),
                kind,
                parent: None,
                children: Vec::new(),
                class: usize::MAX,
                depth: 0,
            });
        }

        for e in &raw.edges {
            let (from, to) = match (by_id.get(&e.from), by_id.get(&e.to)) {
                (Some(&f), Some(&t)) => (f, t),
                (f, t) => {
                    if f.is_none() {
                        errs.push(ValidationError::UnknownNode(e.from.clone()));
                    }
                    if t.is_none() {
                        errs.push(ValidationError::UnknownNode(e.to.clone()));
                    }
                    continue;
                }
            };
            let bad = |detail: &str| ValidationError::BadEdge {
                from: e.from.clone(),
                to: e.to.clone(),
                detail: detail.into(),
            };
            let parent_kind = nodes[from.0].kind.clone();
            let mut label = e.action.clone();
            let mut prob = None;
            match parent_kind {
                NodeKind::Decision { .. } => {
                    match &label {
                        None => errs.push(bad("edges under a decision node need an action")),
                        Some(l) if l.is_empty() => errs.push(bad("empty action label")),
                        _ => {}
                    }
                    label = label.map(normalize_action);
                }
                NodeKind::Ambiguity => {}
                NodeKind::Probability => {
                    if label.is_some() {
                        errs.push(bad("edges under a probability node carry no label"));
                    }
                }
                NodeKind::Outcome { .. } => {}
            }
            match (&e.p, &parent_kind) {
                (Some(p), NodeKind::Probability) => match p.value() {
                    Ok(v) if (0.0..=1.0).contains(&v) => prob = Some(v),
                    Ok(v) => errs.push(bad(&format!("probability {v} outside [0, 1]"))),
                    Err(msg) => errs.push(bad(&msg)),
                },
                (None, NodeKind::Probability) => {
                    errs.push(bad("edges under a probability node need `p`"))
                }
                (Some(_), _) => errs.push(bad("only probability nodes have edge probabilities")),
                (None, _) => {}
            }
            if let Some(prev) = nodes[to.0].parent {
                errs.push(ValidationError::NonTreeStructure(format!(
                    "`{}` has two parents (`{}` and `{}`)",
                    e.to, nodes[prev.0].id, e.from
                )));
                continue;
            }
            nodes[to.0].parent = Some(from);
            nodes[from.0].children.push(Edge {
                child: to,
                label,
                prob,
            });
        }

        let root = match by_id.get(&raw.root) {
            Some(&r) => {
                if let Some(p) = nodes[r.0].parent {
                    errs.push(ValidationError::NonTreeStructure(format!(
                        "root `{}` has parent `{}`",
                        raw.root, nodes[p.0].id
                    )));
                }
                Some(r)
            }
            None => {
                errs.push(ValidationError::UnknownNode(raw.root.clone()));
                None
            }
        };

        let n = nodes.len();
        let mut tin = vec![usize::MAX; n];
        let mut tout = vec![0; n];
        let mut preorder = Vec::with_capacity(n);
        if let Some(r) = root {
            // iterative DFS; a node is only entered once, so cycles cannot loop
            let mut stack = vec![(r, 0usize, false)];
            while let Some((v, depth, done)) = stack.pop() {
                if done {
                    tout[v.0] = preorder.len();
                    continue;
                }
                if tin[v.0] != usize::MAX {
                    continue;
                }
                tin[v.0] = preorder.len();
                nodes[v.0].depth = depth;
                preorder.push(v);
                stack.push((v, depth, true));
                for e in nodes[v.0].children.iter().rev() {
                    stack.push((e.child, depth + 1, false));
                }
            }
            for (k, node) in nodes.iter().enumerate() {
                if tin[k] == usize::MAX {
                    errs.push(ValidationError::NonTreeStructure(format!(
                        "`{}` is not reachable from the root",
                        node.id
                    )));
                }
            }
        }

        for node in &nodes {
            let leaf = node.children.is_empty();
            match (&node.kind, leaf) {
                (NodeKind::Outcome { .. }, false) => errs.push(ValidationError::LeafKindMismatch {
                    node: node.id.clone(),
                    detail: "outcome node has children".into(),
                }),
                (NodeKind::Outcome { .. }, true) => {}
                (_, true) => errs.push(ValidationError::LeafKindMismatch {
                    node: node.id.clone(),
                    detail: "leaf is not an outcome node".into(),
                }),
                _ => {}
            }
            let mut seen = HashSet::new();
            for e in &node.children {
                if let Some(l) = &e.label {
                    if !seen.insert(l.as_str()) {
                        errs.push(ValidationError::DuplicateActionLabel {
                            node: node.id.clone(),
                            label: l.clone(),
                        });
                    }
                }
            }
            if node.kind == NodeKind::Probability && !leaf {
                let sum: f64 = node.children.iter().filter_map(|e| e.prob).sum();
                let complete = node.children.iter().all(|e| e.prob.is_some());
                if complete && (sum - 1.0).abs() > eps {
                    errs.push(ValidationError::ProbabilitySumMismatch {
                        node: node.id.clone(),
                        sum,
                        eps,
                    });
                }
            }
        }

        // information partition
        let mut assigned: Vec<Option<usize>> = vec![None; n];
        let mut listed: Vec<Vec<NodeIx>> = Vec::new();
        for set in &raw.info_sets {
            let mut members = Vec::new();
            let mut ok = true;
            for id in set {
                match by_id.get(id) {
                    Some(&v) => {
                        if members.contains(&v) {
                            continue;
                        }
                        members.push(v);
                    }
                    None => {
                        errs.push(ValidationError::UnknownNode(id.clone()));
                        ok = false;
                    }
                }
            }
            if !ok || members.is_empty() {
                continue;
            }
            let names: Vec<String> = members.iter().map(|v| nodes[v.0].id.clone()).collect();
            let mut owners = Vec::new();
            for &v in &members {
                match nodes[v.0].kind {
                    NodeKind::Decision { owner } => {
                        if !owners.contains(&owner) {
                            owners.push(owner);
                        }
                    }
                    _ => {
                        errs.push(ValidationError::BadInfoSet {
                            members: names.clone(),
                            detail: format!("`{}` is not a decision node", nodes[v.0].id),
                        });
                        ok = false;
                    }
                }
                if assigned[v.0].is_some() {
                    errs.push(ValidationError::BadInfoSet {
                        members: names.clone(),
                        detail: format!("`{}` is listed in two information sets", nodes[v.0].id),
                    });
                    ok = false;
                }
            }
            if !ok {
                continue;
            }
            if owners.len() > 1 {
                errs.push(ValidationError::InfoSetAgentMismatch {
                    members: names.clone(),
                    agents: owners
                        .iter()
                        .map(|a| raw.agents.get(a.0).cloned().unwrap_or_default())
                        .collect(),
                });
            }
            let label_set = |v: NodeIx| {
                let mut l: Vec<&str> = nodes[v.0]
                    .children
                    .iter()
                    .filter_map(|e| e.label.as_deref())
                    .collect();
                l.sort_unstable();
                l
            };
            let first = label_set(members[0]);
            if members[1..].iter().any(|&v| label_set(v) != first) {
                errs.push(ValidationError::InfoSetActionSetMismatch { members: names });
                continue;
            }
            for &v in &members {
                assigned[v.0] = Some(listed.len());
            }
            listed.push(members);
        }

        if !errs.is_empty() {
            return Err(ValidationErrors(errs));
        }

        for m in &mut listed {
            m.sort();
        }
        let mut classes: Vec<Vec<NodeIx>> = Vec::new();
        for k in 0..n {
            match assigned[k] {
                Some(c) => {
                    if listed[c][0] == NodeIx(k) {
                        let id = classes.len();
                        for v in &listed[c] {
                            nodes[v.0].class = id;
                        }
                        classes.push(listed[c].clone());
                    }
                }
                None => {
                    nodes[k].class = classes.len();
                    classes.push(vec![NodeIx(k)]);
                }
            }
        }

        Ok(DecisionTree {
            agents: raw.agents.clone(),
            nodes,
            root: root.expect("root checked above"),
            classes,
            by_id,
            tin,
            tout,
            preorder,
        })
    }

    pub fn root(&self) -> NodeIx {
        self.root
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn agent_ix(&self, name: &str) -> Result<AgentIx, TreeError> {
        self.agents
            .iter()
            .position(|a| a == name)
            .map(AgentIx)
            .ok_or_else(|| TreeError::UnknownAgent(name.to_string()))
    }

    pub fn agent_name(&self, a: AgentIx) -> &str {
        &self.agents[a.0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// All nodes in declaration order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeIx> + '_ {
        (0..self.nodes.len()).map(NodeIx)
    }

    /// All nodes in depth-first order from the root.
    pub fn preorder(&self) -> &[NodeIx] {
        &self.preorder
    }

    pub fn ix(&self, id: &str) -> Result<NodeIx, TreeError> {
        self.by_id
            .get(id)
            .copied()
            .ok_or_else(|| TreeError::UnknownNode(id.to_string()))
    }

    pub fn id(&self, v: NodeIx) -> &str {
        &self.nodes[v.0].id
    }

    pub fn kind(&self, v: NodeIx) -> &NodeKind {
        &self.nodes[v.0].kind
    }

    pub fn parent(&self, v: NodeIx) -> Option<NodeIx> {
        self.nodes[v.0].parent
    }

    pub fn depth(&self, v: NodeIx) -> usize {
        self.nodes[v.0].depth
    }

    pub fn children(&self, v: NodeIx) -> &[Edge] {
        &self.nodes[v.0].children
    }

    pub fn owner(&self, v: NodeIx) -> Option<AgentIx> {
        match self.nodes[v.0].kind {
            NodeKind::Decision { owner } => Some(owner),
            _ => None,
        }
    }

    pub fn is_outcome(&self, v: NodeIx) -> bool {
        matches!(self.nodes[v.0].kind, NodeKind::Outcome { .. })
    }

    pub fn is_undesirable(&self, v: NodeIx) -> bool {
        matches!(self.nodes[v.0].kind, NodeKind::Outcome { undesirable: true })
    }

    /// Outcome nodes in declaration order.
    pub fn outcomes(&self) -> Vec<NodeIx> {
        self.nodes().filter(|&v| self.is_outcome(v)).collect()
    }

    /// The undesirable outcomes ε.
    pub fn undesirable(&self) -> Vec<NodeIx> {
        self.nodes().filter(|&v| self.is_undesirable(v)).collect()
    }

    /// Whether the tree has ambiguity or probability nodes.
    pub fn has_uncertainty(&self) -> bool {
        self.nodes
            .iter()
            .any(|n| matches!(n.kind, NodeKind::Ambiguity | NodeKind::Probability))
    }

    /// Action labels of a decision node in edge order.
    pub fn actions(&self, v: NodeIx) -> Vec<&str> {
        self.nodes[v.0]
            .children
            .iter()
            .filter_map(|e| e.label.as_deref())
            .collect()
    }

    /// Position of `action` among the children of `v`.
    pub fn action_pos(&self, v: NodeIx, action: &str) -> Result<usize, TreeError> {
        self.nodes[v.0]
            .children
            .iter()
            .position(|e| e.label.as_deref() == Some(action))
            .ok_or_else(|| TreeError::UnknownAction {
                node: self.id(v).to_string(),
                action: action.to_string(),
            })
    }

    /// c_v(a): the successor of `v` under `action`.
    pub fn successor(&self, v: NodeIx, action: &str) -> Result<NodeIx, TreeError> {
        Ok(self.nodes[v.0].children[self.action_pos(v, action)?].child)
    }

    /// Index of the information class containing `v`.
    pub fn class_index(&self, v: NodeIx) -> usize {
        self.nodes[v.0].class
    }

    /// The information class of `v`; `{v}` for non-decision nodes.
    pub fn class_of(&self, v: NodeIx) -> &[NodeIx] {
        &self.classes[self.nodes[v.0].class]
    }

    pub fn classes(&self) -> &[Vec<NodeIx>] {
        &self.classes
    }

    /// x ∈ B(v), with v ∈ B(v).
    pub fn in_branch(&self, v: NodeIx, x: NodeIx) -> bool {
        self.tin[v.0] <= self.tin[x.0] && self.tin[x.0] < self.tout[v.0]
    }

    /// Ancestors of `v` from the root down to its parent.
    pub fn history(&self, v: NodeIx) -> Vec<NodeIx> {
        let mut h = Vec::with_capacity(self.nodes[v.0].depth);
        let mut cur = self.nodes[v.0].parent;
        while let Some(p) = cur {
            h.push(p);
            cur = self.nodes[p.0].parent;
        }
        h.reverse();
        h
    }

    /// B(v): `v` and all of its descendants, in depth-first order.
    pub fn branch(&self, v: NodeIx) -> &[NodeIx] {
        &self.preorder[self.tin[v.0]..self.tout[v.0]]
    }

    /// B~(v): the union of B(v') over v' ~ v, in depth-first order.
    pub fn info_branch(&self, v: NodeIx) -> Vec<NodeIx> {
        let class = self.class_of(v);
        let mut starts: Vec<usize> = class.iter().map(|u| self.tin[u.0]).collect();
        starts.sort_unstable();
        let mut out = Vec::new();
        let mut covered = 0;
        for s in starts {
            let u = self.preorder[s];
            let end = self.tout[u.0];
            if s >= covered {
                out.extend_from_slice(&self.preorder[s..end]);
                covered = end;
            } else if end > covered {
                out.extend_from_slice(&self.preorder[covered..end]);
                covered = end;
            }
        }
        out
    }

    /// Position of the edge leaving `v` towards the proper descendant `w`.
    pub fn path_child(&self, v: NodeIx, w: NodeIx) -> Result<usize, TreeError> {
        if v == w || !self.in_branch(v, w) {
            return Err(TreeError::NotOnPath {
                from: self.id(v).to_string(),
                to: self.id(w).to_string(),
            });
        }
        Ok(self.nodes[v.0]
            .children
            .iter()
            .position(|e| self.in_branch(e.child, w))
            .expect("descendant lies below some child"))
    }

    /// a_{v→w}: the action at decision node `v` leading towards `w`.
    pub fn path_action(&self, v: NodeIx, w: NodeIx) -> Result<&str, TreeError> {
        if self.owner(v).is_none() {
            return Err(TreeError::NotDecisionNode(self.id(v).to_string()));
        }
        let k = self.path_child(v, w)?;
        Ok(self.nodes[v.0].children[k]
            .label
            .as_deref()
            .expect("decision edges are labelled"))
    }

    /// Decision nodes owned by members of `g`.
    pub fn is_member_node(&self, v: NodeIx, g: Group) -> bool {
        matches!(self.nodes[v.0].kind, NodeKind::Decision { owner } if g.contains(owner))
    }

    /// Decision nodes of non-members and ambiguity nodes.
    pub fn is_nonmember_node(&self, v: NodeIx, g: Group) -> bool {
        match self.nodes[v.0].kind {
            NodeKind::Decision { owner } => !g.contains(owner),
            NodeKind::Ambiguity => true,
            _ => false,
        }
    }

    /// (V_G, V_−G) in declaration order.
    pub fn group_nodes(&self, g: Group) -> (Vec<NodeIx>, Vec<NodeIx>) {
        let members = self.nodes().filter(|&v| self.is_member_node(v, g)).collect();
        let others = self.nodes().filter(|&v| self.is_nonmember_node(v, g)).collect();
        (members, others)
    }
}

/// Action names used in prose for the coordination game are mapped onto the
/// figure labels.
fn normalize_action(label: String) -> String {
    match label.as_str() {
        "cinema" => "left".to_string(),
        "theater" => "right".to_string(),
        _ => label,
    }
}
