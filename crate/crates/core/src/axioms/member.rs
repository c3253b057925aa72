//! Member-contribution axioms: (KSym), (AMC), (AMC~), (FMC), (FMC~).

use crate::axioms::{AxiomId, AxiomReport, Witness};
use crate::contribution::{ContributionFunction, GroupContributions};
use crate::error::EvalError;
use crate::format::RawTree;
use crate::group::Group;
use crate::tree::{DecisionTree, NodeIx};
use crate::Limits;

/// Whether a premise looks at the node alone or at its whole information set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PremiseScope {
    Strict,
    Info,
}

fn member_witness(tree: &DecisionTree, g: Group, nodes: &[NodeIx], action: &str, values: Vec<f64>) -> Witness {
    Witness::Member {
        tree: RawTree::from_tree(tree),
        group: g.names(tree),
        nodes: nodes.iter().map(|&v| tree.id(v).to_string()).collect(),
        action: action.to_string(),
        values,
    }
}

pub fn check_ksym(tree: &DecisionTree, r: &ContributionFunction, g: Group, limits: &Limits) -> Result<AxiomReport, EvalError> {
    ksym_with(tree, &GroupContributions::new(tree, r, g, limits), limits.eps)
}

pub(crate) fn ksym_with(tree: &DecisionTree, eval: &GroupContributions<'_>, eps: f64) -> Result<AxiomReport, EvalError> {
    let g = eval.group();
    let mut instances = 0;
    for class in tree.classes() {
        if class.len() < 2 || !tree.is_member_node(class[0], g) {
            continue;
        }
        let mut actions = tree.actions(class[0]);
        actions.sort_unstable();
        for a in actions {
            instances += 1;
            let first = eval.value(class[0], a)?.value;
            for &v in &class[1..] {
                let other = eval.value(v, a)?.value;
                if (first - other).abs() > eps {
                    return Ok(AxiomReport::violated(
                        AxiomId::KSym,
                        instances,
                        member_witness(tree, g, &[class[0], v], a, vec![first, other]),
                    ));
                }
            }
        }
    }
    Ok(AxiomReport::satisfied(AxiomId::KSym, instances))
}

/// Outcomes below `x` are all undesirable (`bad`) or all desirable.
fn uniform_below(tree: &DecisionTree, x: NodeIx, bad: bool) -> bool {
    tree.branch(x)
        .iter()
        .filter(|&&y| tree.is_outcome(y))
        .all(|&y| tree.is_undesirable(y) == bad)
}

/// Whether choosing `pos` certainly yields an outcome of kind `pos_bad` while
/// every other action certainly yields the opposite kind.
fn premise_holds(tree: &DecisionTree, v: NodeIx, action: &str, pos_bad: bool, scope: PremiseScope) -> bool {
    let nodes: Vec<NodeIx> = match scope {
        PremiseScope::Strict => vec![v],
        PremiseScope::Info => tree.class_of(v).to_vec(),
    };
    nodes.iter().all(|&u| {
        tree.children(u).iter().all(|e| {
            let chosen = e.label.as_deref() == Some(action);
            uniform_below(tree, e.child, if chosen { pos_bad } else { !pos_bad })
        })
    })
}

fn member_nodes(tree: &DecisionTree, g: Group) -> Vec<NodeIx> {
    tree.nodes().filter(|&v| tree.is_member_node(v, g)).collect()
}

fn bound_check(
    tree: &DecisionTree,
    eval: &GroupContributions<'_>,
    scope: PremiseScope,
    full: bool,
    eps: f64,
) -> Result<AxiomReport, EvalError> {
    let g = eval.group();
    let axiom = match (full, scope) {
        (false, PremiseScope::Strict) => AxiomId::Amc,
        (false, PremiseScope::Info) => AxiomId::AmcSim,
        (true, PremiseScope::Strict) => AxiomId::Fmc,
        (true, PremiseScope::Info) => AxiomId::FmcSim,
    };
    let required = if full { 1.0 } else { 0.0 };
    let mut instances = 0;
    for v in member_nodes(tree, g) {
        if full && tree.children(v).len() < 2 {
            continue;
        }
        for a in tree.actions(v) {
            if !premise_holds(tree, v, a, full, scope) {
                continue;
            }
            instances += 1;
            let got = eval.value(v, a)?.value;
            if (got - required).abs() > eps {
                return Ok(AxiomReport::violated(
                    axiom,
                    instances,
                    member_witness(tree, g, &[v], a, vec![got]),
                ));
            }
        }
    }
    Ok(AxiomReport::satisfied(axiom, instances))
}

/// (AMC) / (AMC~): the action that certainly avoids ε, when every other
/// action certainly leads into ε, has contribution 0.
pub fn check_amc(
    tree: &DecisionTree,
    r: &ContributionFunction,
    g: Group,
    scope: PremiseScope,
    limits: &Limits,
) -> Result<AxiomReport, EvalError> {
    amc_with(tree, &GroupContributions::new(tree, r, g, limits), scope, limits.eps)
}

pub(crate) fn amc_with(
    tree: &DecisionTree,
    eval: &GroupContributions<'_>,
    scope: PremiseScope,
    eps: f64,
) -> Result<AxiomReport, EvalError> {
    bound_check(tree, eval, scope, false, eps)
}

/// (FMC) / (FMC~): the action that certainly leads into ε, when there is at
/// least one alternative and every alternative certainly avoids it, has
/// contribution 1.
pub fn check_fmc(
    tree: &DecisionTree,
    r: &ContributionFunction,
    g: Group,
    scope: PremiseScope,
    limits: &Limits,
) -> Result<AxiomReport, EvalError> {
    fmc_with(tree, &GroupContributions::new(tree, r, g, limits), scope, limits.eps)
}

pub(crate) fn fmc_with(
    tree: &DecisionTree,
    eval: &GroupContributions<'_>,
    scope: PremiseScope,
    eps: f64,
) -> Result<AxiomReport, EvalError> {
    bound_check(tree, eval, scope, true, eps)
}

/// All five member axioms for one group, sharing one evaluator.
pub fn check_member_suite(
    tree: &DecisionTree,
    r: &ContributionFunction,
    g: Group,
    limits: &Limits,
) -> Result<Vec<AxiomReport>, EvalError> {
    let eval = GroupContributions::new(tree, r, g, limits);
    Ok(vec![
        ksym_with(tree, &eval, limits.eps)?,
        amc_with(tree, &eval, PremiseScope::Strict, limits.eps)?,
        amc_with(tree, &eval, PremiseScope::Info, limits.eps)?,
        fmc_with(tree, &eval, PremiseScope::Strict, limits.eps)?,
        fmc_with(tree, &eval, PremiseScope::Info, limits.eps)?,
    ])
}
