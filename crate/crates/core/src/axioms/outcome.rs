//! Outcome-responsibility axioms: (CC), (NUR), (NRV) and (NIRV).

use std::collections::HashMap;

use crate::axioms::{AxiomId, AxiomReport, Witness};
use crate::error::EvalError;
use crate::format::RawTree;
use crate::group::Group;
use crate::responsibility::OutcomeResponsibility;
use crate::tree::{DecisionTree, NodeIx, NodeKind};
use crate::Limits;

/// Largest agent set for which (NRV) enumerates all groups.
pub const MAX_NRV_AGENTS: usize = 12;

/// Memoised R(G, ·) tables.
struct Tables<'a, R: ?Sized> {
    tree: &'a DecisionTree,
    r: &'a R,
    limits: &'a Limits,
    cache: HashMap<Group, Vec<f64>>,
}

impl<'a, R: OutcomeResponsibility + ?Sized> Tables<'a, R> {
    fn new(tree: &'a DecisionTree, r: &'a R, limits: &'a Limits) -> Self {
        Tables {
            tree,
            r,
            limits,
            cache: HashMap::new(),
        }
    }

    /// R(G, w) indexed by node (non-outcomes hold 0).
    fn get(&mut self, g: Group) -> Result<&[f64], EvalError> {
        if !self.cache.contains_key(&g) {
            let mut by_node = vec![0.0; self.tree.len()];
            for (w, x) in self.r.table(self.tree, g, self.limits)? {
                by_node[w.index()] = x;
            }
            self.cache.insert(g, by_node);
        }
        Ok(&self.cache[&g])
    }
}

fn outcome_witness(
    tree: &DecisionTree,
    groups: &[Group],
    outcome: Option<NodeIx>,
    reduction: Option<String>,
    values: Vec<f64>,
) -> Witness {
    Witness::Outcome {
        tree: RawTree::from_tree(tree),
        groups: groups.iter().map(|g| g.names(tree)).collect(),
        outcome: outcome.map(|w| tree.id(w).to_string()),
        reduction,
        values,
    }
}

/// (CC): a desirable outcome reached through decisions of a single agent
/// only carries no responsibility for that agent.
pub fn check_cc<R: OutcomeResponsibility + ?Sized>(tree: &DecisionTree, r: &R, limits: &Limits) -> Result<AxiomReport, EvalError> {
    let mut tables = Tables::new(tree, r, limits);
    let mut instances = 0;
    for w in tree.outcomes() {
        if tree.is_undesirable(w) {
            continue;
        }
        let h = tree.history(w);
        let Some(&first) = h.first() else { continue };
        let Some(i) = tree.owner(first) else { continue };
        if !h.iter().all(|&v| tree.owner(v) == Some(i)) {
            continue;
        }
        instances += 1;
        let g = Group::singleton(i);
        let x = tables.get(g)?[w.index()];
        if x.abs() > limits.eps {
            return Ok(AxiomReport::violated(
                AxiomId::Cc,
                instances,
                outcome_witness(tree, &[g], Some(w), None, vec![x]),
            ));
        }
    }
    Ok(AxiomReport::satisfied(AxiomId::Cc, instances))
}

/// Whether some uniform strategy of `g` from the root keeps every reachable
/// outcome inside `safe`. Reachable means: any child of a non-member or
/// ambiguity node, and any child of positive probability.
pub fn has_safe_strategy(tree: &DecisionTree, g: Group, safe: &[bool], cap: u64) -> Result<bool, EvalError> {
    let coupled: Vec<usize> = tree
        .classes()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() > 1 && tree.is_member_node(c[0], g))
        .map(|(k, _)| k)
        .collect();
    let mut sorted_labels: Vec<Vec<String>> = Vec::with_capacity(coupled.len());
    for &k in &coupled {
        let mut l: Vec<String> = tree
            .actions(tree.classes()[k][0])
            .into_iter()
            .map(String::from)
            .collect();
        l.sort();
        sorted_labels.push(l);
    }
    let count = sorted_labels
        .iter()
        .fold(1u128, |acc, l| acc.saturating_mul(l.len() as u128));
    if count > cap as u128 {
        return Err(EvalError::ExplosionGuard {
            what: "strategies",
            count,
            cap,
        });
    }
    fn ok(tree: &DecisionTree, g: Group, x: NodeIx, safe: &[bool], pins: &[Option<&str>]) -> bool {
        let ch = tree.children(x);
        match tree.kind(x) {
            NodeKind::Outcome { .. } => safe[x.index()],
            NodeKind::Probability => ch
                .iter()
                .filter(|e| e.prob.unwrap_or(0.0) > 0.0)
                .all(|e| ok(tree, g, e.child, safe, pins)),
            NodeKind::Decision { owner } if g.contains(*owner) => match pins[tree.class_index(x)] {
                Some(a) => {
                    let c = tree.successor(x, a).expect("uniform action sets");
                    ok(tree, g, c, safe, pins)
                }
                None => ch.iter().any(|e| ok(tree, g, e.child, safe, pins)),
            },
            _ => ch.iter().all(|e| ok(tree, g, e.child, safe, pins)),
        }
    }
    let mut pins: Vec<Option<&str>> = vec![None; tree.classes().len()];
    let mut digits = vec![0usize; coupled.len()];
    loop {
        for (k, &c) in coupled.iter().enumerate() {
            pins[c] = Some(sorted_labels[k][digits[k]].as_str());
        }
        if ok(tree, g, tree.root(), safe, &pins) {
            return Ok(true);
        }
        let mut k = digits.len();
        loop {
            if k == 0 {
                return Ok(false);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < sorted_labels[k].len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// (NUR): every nonempty group has a uniform strategy from the root under
/// which no reachable outcome carries responsibility. The witness lists every
/// group without such a strategy.
pub fn check_nur<R: OutcomeResponsibility + ?Sized>(tree: &DecisionTree, r: &R, limits: &Limits) -> Result<AxiomReport, EvalError> {
    let mut tables = Tables::new(tree, r, limits);
    let groups = Group::nonempty_subsets(tree)?;
    let mut failing = Vec::new();
    for &g in &groups {
        let safe: Vec<bool> = tables.get(g)?.iter().map(|x| x.abs() <= limits.eps).collect();
        if !has_safe_strategy(tree, g, &safe, limits.cap)? {
            failing.push(g);
        }
    }
    let n = groups.len() as u64;
    if failing.is_empty() {
        Ok(AxiomReport::satisfied(AxiomId::Nur, n))
    } else {
        Ok(AxiomReport::violated(
            AxiomId::Nur,
            n,
            outcome_witness(tree, &failing, None, None, Vec::new()),
        ))
    }
}

fn candidate_groups(tree: &DecisionTree, individual: bool) -> Result<Vec<Group>, EvalError> {
    let n = tree.agents().len();
    if individual {
        return Ok((0..n).map(|k| Group::from_bits(1 << k)).collect());
    }
    if n > MAX_NRV_AGENTS {
        return Err(EvalError::ExplosionGuard {
            what: "groups",
            count: (1u128 << n) - 1,
            cap: (1u64 << MAX_NRV_AGENTS) - 1,
        });
    }
    Ok(Group::nonempty_subsets(tree)?)
}

/// Checks the void-freeness conclusion for the undesirable outcomes in
/// `scope` (all outcomes of the tree, or one fixed-root branch), evaluating
/// responsibility in the full tree. Returns the instance count and the first
/// void, if any.
fn voids_in<R: OutcomeResponsibility + ?Sized>(
    tables: &mut Tables<'_, R>,
    scope: NodeIx,
    groups: &[Group],
    eps: f64,
) -> Result<(u64, Option<(NodeIx, Vec<f64>)>), EvalError> {
    let tree = tables.tree;
    let outcomes: Vec<NodeIx> = tree
        .branch(scope)
        .iter()
        .copied()
        .filter(|&w| tree.is_outcome(w))
        .collect();
    let eps_set: Vec<NodeIx> = outcomes.iter().copied().filter(|&w| tree.is_undesirable(w)).collect();
    if eps_set.len() == outcomes.len() {
        // ε = V_o: premise fails
        return Ok((0, None));
    }
    let mut instances = 0;
    for &w in &eps_set {
        instances += 1;
        let mut values = Vec::with_capacity(groups.len());
        for &g in groups {
            values.push(tables.get(g)?[w.index()]);
        }
        if values.iter().all(|x| *x <= eps) {
            return Ok((instances, Some((w, values))));
        }
    }
    Ok((instances, None))
}

/// (NRV) or, with `individual`, (NIRV): on trees without ambiguity and
/// probability nodes and with ε ≠ V_o, every undesirable outcome has some
/// group (some single agent) with positive responsibility.
///
/// When the only uncertainty is an ambiguity node at the root, each of its
/// branches is examined as a fixed-root reduction: the premise is checked on
/// the branch, while responsibility is still evaluated in the full tree so
/// that information sets spanning the branches keep constraining the agents.
/// Any other tree with uncertainty is reported as vacuous.
pub fn check_nrv<R: OutcomeResponsibility + ?Sized>(
    tree: &DecisionTree,
    r: &R,
    individual: bool,
    limits: &Limits,
) -> Result<AxiomReport, EvalError> {
    let axiom = if individual { AxiomId::Nirv } else { AxiomId::Nrv };
    let mut tables = Tables::new(tree, r, limits);
    let groups = candidate_groups(tree, individual)?;

    if !tree.has_uncertainty() {
        let (n, void) = voids_in(&mut tables, tree.root(), &groups, limits.eps)?;
        return Ok(match void {
            None => AxiomReport::satisfied(axiom, n),
            Some((w, values)) => {
                AxiomReport::violated(axiom, n, outcome_witness(tree, &groups, Some(w), None, values))
            }
        });
    }

    let root = tree.root();
    let only_root = tree
        .nodes()
        .filter(|&v| matches!(tree.kind(v), NodeKind::Ambiguity | NodeKind::Probability))
        .all(|v| v == root)
        && *tree.kind(root) == NodeKind::Ambiguity;
    if !only_root {
        let mut rep = AxiomReport::satisfied(axiom, 0);
        rep.notes.push("tree has uncertainty nodes; premise does not apply".into());
        return Ok(rep);
    }

    let mut report = AxiomReport::satisfied(axiom, 0);
    report
        .notes
        .push("root ambiguity node: checked on each fixed-root reduction".into());
    for e in tree.children(root) {
        let label = e
            .label
            .clone()
            .unwrap_or_else(|| tree.id(e.child).to_string());
        let (n, void) = voids_in(&mut tables, e.child, &groups, limits.eps)?;
        let part = match void {
            None => {
                report.notes.push(format!("reduction `{label}`: satisfied on {n} instances"));
                AxiomReport::satisfied(axiom, n)
            }
            Some((w, values)) => {
                report
                    .notes
                    .push(format!("reduction `{label}`: void at {}", tree.id(w)));
                AxiomReport::violated(
                    axiom,
                    n,
                    outcome_witness(tree, &groups, Some(w), Some(label.clone()), values),
                )
            }
        };
        report.merge(part);
    }
    Ok(report)
}

/// Per-branch (NRV)/(NIRV) verdicts for a tree whose root is an ambiguity
/// node, in edge order.
pub fn check_nrv_reductions<R: OutcomeResponsibility + ?Sized>(
    tree: &DecisionTree,
    r: &R,
    individual: bool,
    limits: &Limits,
) -> Result<Vec<(String, AxiomReport)>, EvalError> {
    let axiom = if individual { AxiomId::Nirv } else { AxiomId::Nrv };
    let mut tables = Tables::new(tree, r, limits);
    let groups = candidate_groups(tree, individual)?;
    let root = tree.root();
    if *tree.kind(root) != NodeKind::Ambiguity {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for e in tree.children(root) {
        let label = e
            .label
            .clone()
            .unwrap_or_else(|| tree.id(e.child).to_string());
        let (n, void) = voids_in(&mut tables, e.child, &groups, limits.eps)?;
        let rep = match void {
            None => AxiomReport::satisfied(axiom, n),
            Some((w, values)) => AxiomReport::violated(
                axiom,
                n,
                outcome_witness(tree, &groups, Some(w), Some(label.clone()), values),
            ),
        };
        out.push((label, rep));
    }
    Ok(out)
}
