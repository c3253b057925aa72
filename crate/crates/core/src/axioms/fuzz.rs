//! Seeded random trees and a driver that runs the tree-based axiom checkers
//! over them.
//!
//! Information sets are drawn with perfect recall: two nodes may share a set
//! only if they belong to the same agent, offer the same actions and the
//! agent's own past (the sets it visited and the actions it took there) is
//! identical on both paths.

use std::collections::{HashMap, VecDeque};

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::aggregation::Aggregator;
use crate::axioms::member::{amc_with, fmc_with, ksym_with, PremiseScope};
use crate::axioms::outcome::{check_cc, check_nrv, check_nur};
use crate::axioms::{AxiomId, AxiomReport};
use crate::builtins::TreeBuilder;
use crate::contribution::{ContributionFunction, GroupContributions};
use crate::error::EvalError;
use crate::format::RawTree;
use crate::group::Group;
use crate::responsibility::Composite;
use crate::tree::DecisionTree;
use crate::Limits;

/// Give up on a tree slot after this many regenerations in a row.
const MAX_ATTEMPTS: usize = 100;
/// Clamp witnesses kept in a report.
const MAX_CLAMP_WITNESSES: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub tree_count: usize,
    pub max_depth: usize,
    pub max_branching: usize,
    pub max_agents: usize,
    pub probability_node_rate: f64,
    pub ambiguity_node_rate: f64,
    pub info_set_rate: f64,
    /// Chance that a non-root node above `max_depth` is a leaf anyway.
    pub leaf_rate: f64,
    pub undesirable_rate: f64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 42,
            tree_count: 1000,
            max_depth: 4,
            max_branching: 3,
            max_agents: 3,
            probability_node_rate: 0.2,
            ambiguity_node_rate: 0.15,
            info_set_rate: 0.5,
            leaf_rate: 0.25,
            undesirable_rate: 0.5,
        }
    }
}

impl FuzzConfig {
    /// Decision nodes only.
    pub fn uncertainty_free() -> Self {
        FuzzConfig {
            probability_node_rate: 0.0,
            ambiguity_node_rate: 0.0,
            ..FuzzConfig::default()
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        FuzzConfig { seed, ..self }
    }

    pub fn with_count(self, tree_count: usize) -> Self {
        FuzzConfig { tree_count, ..self }
    }
}

fn agent_name(k: usize) -> String {
    match k {
        0 => "i".into(),
        1 => "j".into(),
        2 => "k".into(),
        _ => format!("a{k}"),
    }
}

fn action_name(k: usize) -> String {
    if k < 26 {
        ((b'a' + k as u8) as char).to_string()
    } else {
        format!("a{k}")
    }
}

enum GenKind {
    Decision(usize),
    Ambiguity,
    Probability(Vec<u32>),
    Outcome(bool),
}

struct GenNode {
    kind: GenKind,
    parent: Option<(usize, usize)>,
    children: Vec<usize>,
    depth: usize,
}

/// One random valid tree. Node ids are `n0` (root), `n1`, … in creation order.
pub fn generate_tree(rng: &mut ChaCha8Rng, cfg: &FuzzConfig) -> DecisionTree {
    let n_agents = rng.gen_range(1..=cfg.max_agents.max(1));
    let max_b = cfg.max_branching.max(1);
    let mut nodes: Vec<GenNode> = Vec::new();
    // breadth-first so ids grow with depth
    let mut queue = VecDeque::from([(None::<(usize, usize)>, 0usize)]);
    while let Some((parent, depth)) = queue.pop_front() {
        let id = nodes.len();
        let leaf = depth >= cfg.max_depth || (depth > 0 && rng.gen_bool(cfg.leaf_rate.clamp(0.0, 1.0)));
        let kind = if leaf {
            GenKind::Outcome(rng.gen_bool(cfg.undesirable_rate.clamp(0.0, 1.0)))
        } else {
            let u: f64 = rng.gen();
            if u < cfg.probability_node_rate {
                let k = rng.gen_range(max_b.min(2)..=max_b);
                let mut w: Vec<u32> = (0..k).map(|_| rng.gen_range(0..=3)).collect();
                if w.iter().all(|&x| x == 0) {
                    w[0] = 1;
                }
                GenKind::Probability(w)
            } else if u < cfg.probability_node_rate + cfg.ambiguity_node_rate {
                GenKind::Ambiguity
            } else {
                GenKind::Decision(rng.gen_range(0..n_agents))
            }
        };
        let arity = match &kind {
            GenKind::Outcome(_) => 0,
            GenKind::Probability(w) => w.len(),
            GenKind::Ambiguity => rng.gen_range(max_b.min(2)..=max_b),
            GenKind::Decision(_) => {
                if max_b < 2 || rng.gen_bool(0.1) {
                    1
                } else {
                    rng.gen_range(2..=max_b)
                }
            }
        };
        if let Some((p, _)) = parent {
            nodes[p].children.push(id);
        }
        nodes.push(GenNode {
            kind,
            parent,
            children: Vec::new(),
            depth,
        });
        for pos in 0..arity {
            queue.push_back((Some((id, pos)), depth + 1));
        }
    }

    // information sets, processed in depth order (ids are breadth-first)
    let mut class = vec![usize::MAX; nodes.len()];
    let mut n_classes = 0;
    let mut by_signature: HashMap<(usize, usize, Vec<(usize, usize)>), Vec<usize>> = HashMap::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for v in 0..nodes.len() {
        let GenKind::Decision(owner) = nodes[v].kind else { continue };
        let mut own_past = Vec::new();
        let mut cur = v;
        while let Some((p, pos)) = nodes[cur].parent {
            if matches!(nodes[p].kind, GenKind::Decision(o) if o == owner) {
                own_past.push((class[p], pos));
            }
            cur = p;
        }
        own_past.reverse();
        let sig = (owner, nodes[v].children.len(), own_past);
        let existing = by_signature.entry(sig).or_default();
        let c = if !existing.is_empty() && rng.gen_bool(cfg.info_set_rate.clamp(0.0, 1.0)) {
            existing[rng.gen_range(0..existing.len())]
        } else {
            existing.push(n_classes);
            members.push(Vec::new());
            n_classes += 1;
            n_classes - 1
        };
        class[v] = c;
        members[c].push(v);
    }

    let agents: Vec<String> = (0..n_agents).map(agent_name).collect();
    let mut b = TreeBuilder::new(&agents, "n0");
    let ids: Vec<String> = (0..nodes.len()).map(|k| format!("n{k}")).collect();
    for (k, n) in nodes.iter().enumerate() {
        match &n.kind {
            GenKind::Decision(o) => b.decision(&ids[k], &agents[*o]),
            GenKind::Ambiguity => b.ambiguity(&ids[k]),
            GenKind::Probability(_) => b.probability(&ids[k]),
            GenKind::Outcome(bad) => b.outcome(&ids[k], *bad),
        };
    }
    for (k, n) in nodes.iter().enumerate() {
        for (pos, &c) in n.children.iter().enumerate() {
            match &n.kind {
                GenKind::Decision(_) => b.edge(&ids[k], &action_name(pos), &ids[c]),
                GenKind::Ambiguity => b.edge(&ids[k], &format!("x{pos}"), &ids[c]),
                GenKind::Probability(w) => {
                    let total: u32 = w.iter().sum();
                    b.chance(&ids[k], w[pos] as f64 / total as f64, &ids[c])
                }
                GenKind::Outcome(_) => unreachable!(),
            };
        }
    }
    for m in members.iter().filter(|m| m.len() > 1) {
        let names: Vec<&str> = m.iter().map(|&v| ids[v].as_str()).collect();
        b.info_set(&names);
    }
    debug_assert!(nodes.iter().all(|n| n.depth <= cfg.max_depth));
    b.build().expect("generated trees are valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Member,
    Outcome,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "member" => Some(Suite::Member),
            "outcome" => Some(Suite::Outcome),
            "all" => Some(Suite::All),
            _ => None,
        }
    }

    fn member(self) -> bool {
        matches!(self, Suite::Member | Suite::All)
    }

    fn outcome(self) -> bool {
        matches!(self, Suite::Outcome | Suite::All)
    }

    fn axioms(self) -> Vec<AxiomId> {
        let mut out = Vec::new();
        if self.member() {
            out.extend(AxiomId::MEMBER);
        }
        if self.outcome() {
            out.extend([AxiomId::Cc, AxiomId::Nur, AxiomId::Nrv, AxiomId::Nirv]);
        }
        out
    }
}

/// What to fuzz: a contribution function, and for the outcome suite the
/// aggregator it is composed with.
#[derive(Clone, Debug)]
pub struct FuzzSubject {
    pub contribution: ContributionFunction,
    pub aggregator: Aggregator,
    pub suite: Suite,
}

impl FuzzSubject {
    pub fn new(contribution: ContributionFunction, aggregator: Aggregator, suite: Suite) -> Self {
        FuzzSubject {
            contribution,
            aggregator,
            suite,
        }
    }
}

/// A contribution whose raw value fell outside [0, 1].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClampWitness {
    pub tree_index: usize,
    pub tree: RawTree,
    pub group: Vec<String>,
    pub node: String,
    pub action: String,
    pub raw: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    pub function: String,
    pub aggregator: String,
    pub suite: Suite,
    pub trees: usize,
    /// Candidates discarded because evaluation hit the explosion guard.
    pub regenerated: usize,
    pub clamped_values: u64,
    pub clamp_witnesses: Vec<ClampWitness>,
    /// Per axiom, the number of trees on which it was violated.
    pub violating_trees: IndexMap<String, u64>,
    pub reports: Vec<AxiomReport>,
}

impl FuzzReport {
    pub fn report(&self, axiom: AxiomId) -> Option<&AxiomReport> {
        self.reports.iter().find(|r| r.axiom == axiom)
    }
}

struct TreeResult {
    reports: Vec<AxiomReport>,
    clamps: Vec<(Group, String, String, f64)>,
}

fn run_tree(tree: &DecisionTree, subject: &FuzzSubject, limits: &Limits) -> Result<TreeResult, EvalError> {
    let mut reports: Vec<AxiomReport> = Vec::new();
    let mut clamps = Vec::new();
    let push = |reports: &mut Vec<AxiomReport>, r: AxiomReport| match reports.iter_mut().find(|x| x.axiom == r.axiom) {
        Some(x) => x.merge(r),
        None => reports.push(r),
    };
    if subject.suite.member() {
        for g in Group::nonempty_subsets(tree)? {
            let eval = GroupContributions::new(tree, &subject.contribution, g, limits);
            push(&mut reports, ksym_with(tree, &eval, limits.eps)?);
            push(&mut reports, amc_with(tree, &eval, PremiseScope::Strict, limits.eps)?);
            push(&mut reports, amc_with(tree, &eval, PremiseScope::Info, limits.eps)?);
            push(&mut reports, fmc_with(tree, &eval, PremiseScope::Strict, limits.eps)?);
            push(&mut reports, fmc_with(tree, &eval, PremiseScope::Info, limits.eps)?);
            // the clamp diagnostic looks at every member contribution
            for v in tree.group_nodes(g).0 {
                for a in tree.actions(v) {
                    eval.value(v, a)?;
                }
            }
            for (v, a, c) in eval.clamped() {
                clamps.push((g, tree.id(v).to_string(), a, c.raw));
            }
        }
    }
    if subject.suite.outcome() {
        let r = Composite::new(subject.contribution.clone(), subject.aggregator.clone());
        push(&mut reports, check_cc(tree, &r, limits)?);
        push(&mut reports, check_nur(tree, &r, limits)?);
        push(&mut reports, check_nrv(tree, &r, false, limits)?);
        push(&mut reports, check_nrv(tree, &r, true, limits)?);
    }
    Ok(TreeResult { reports, clamps })
}

/// Generates `cfg.tree_count` trees from `cfg.seed` and runs the subject's
/// suite on each. Reports come in a fixed axiom order and keep the witness
/// of the first violating tree, so the result depends only on the inputs.
pub fn fuzz(cfg: &FuzzConfig, subject: &FuzzSubject, limits: &Limits) -> Result<FuzzReport, EvalError> {
    let axioms = subject.suite.axioms();
    let mut reports: Vec<AxiomReport> = axioms.iter().map(|&a| AxiomReport::satisfied(a, 0)).collect();
    let mut violating: IndexMap<String, u64> = axioms.iter().map(|a| (a.label().to_string(), 0)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut regenerated = 0;
    let mut clamped_values = 0;
    let mut clamp_witnesses = Vec::new();

    for index in 0..cfg.tree_count {
        let mut attempts = 0;
        let (tree, result) = loop {
            let tree = generate_tree(&mut rng, cfg);
            match run_tree(&tree, subject, limits) {
                Ok(r) => break (tree, r),
                Err(EvalError::ExplosionGuard { .. }) if attempts + 1 < MAX_ATTEMPTS => {
                    attempts += 1;
                    regenerated += 1;
                }
                Err(e) => return Err(e),
            }
        };
        clamped_values += result.clamps.len() as u64;
        for (g, node, action, raw) in result.clamps {
            if clamp_witnesses.len() < MAX_CLAMP_WITNESSES {
                clamp_witnesses.push(ClampWitness {
                    tree_index: index,
                    tree: RawTree::from_tree(&tree),
                    group: g.names(&tree),
                    node,
                    action,
                    raw,
                });
            }
        }
        for r in result.reports {
            let slot = reports.iter_mut().find(|x| x.axiom == r.axiom).expect("suite axiom");
            if r.is_violated() {
                *violating.get_mut(r.axiom.label()).unwrap() += 1;
                if !slot.is_violated() {
                    slot.notes.push(format!("first violation in tree #{index}"));
                }
            }
            slot.merge(r);
        }
    }

    Ok(FuzzReport {
        config: cfg.clone(),
        function: subject.contribution.name().to_string(),
        aggregator: subject.aggregator.name().to_string(),
        suite: subject.suite,
        trees: cfg.tree_count,
        regenerated,
        clamped_values,
        clamp_witnesses,
        violating_trees: violating,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_info_sets_have_perfect_recall_shape() {
        let cfg = FuzzConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut joined = 0;
        for _ in 0..200 {
            let t = generate_tree(&mut rng, &cfg);
            for c in t.classes() {
                if c.len() > 1 {
                    joined += 1;
                    for &u in c {
                        for &w in c {
                            assert!(u == w || !t.in_branch(w, u), "class member below another");
                        }
                    }
                }
            }
        }
        assert!(joined > 0);
    }

    #[test]
    fn empty_run() {
        let cfg = FuzzConfig::default().with_count(0);
        let s = FuzzSubject::new(ContributionFunction::Risk, Aggregator::MProd, Suite::All);
        let r = fuzz(&cfg, &s, &Limits::default()).unwrap();
        assert_eq!(r.trees, 0);
        assert!(r.reports.iter().all(|x| x.is_vacuous()));
    }
}
