//! Outcome responsibility R(G, w): the group's member contributions along
//! the path to `w`, combined by an aggregator.

use crate::aggregation::Aggregator;
use crate::contribution::{ContributionFunction, ContributionValue, GroupContributions};
use crate::error::EvalError;
use crate::group::Group;
use crate::tree::{AgentIx, DecisionTree, NodeIx};
use crate::Limits;

#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry {
    pub agent: AgentIx,
    pub node: NodeIx,
    pub action: String,
    pub value: ContributionValue,
}

#[derive(Clone, Debug)]
pub struct ResponsibilityQuery {
    pub group: Group,
    pub outcome: NodeIx,
    pub contribution: ContributionFunction,
    pub aggregator: Aggregator,
}

fn check_outcome(tree: &DecisionTree, w: NodeIx) -> Result<(), EvalError> {
    if tree.is_outcome(w) {
        Ok(())
    } else {
        Err(EvalError::UndefinedQuery(format!("`{}` is not an outcome node", tree.id(w))))
    }
}

/// The trace over an existing evaluator, sharing its cache.
pub fn trace_with(tree: &DecisionTree, eval: &GroupContributions<'_>, w: NodeIx) -> Result<Vec<TraceEntry>, EvalError> {
    let g = eval.group();
    let mut out = Vec::new();
    for v in tree.history(w) {
        if tree.is_member_node(v, g) {
            let action = tree.path_action(v, w)?.to_string();
            let value = eval.value(v, &action)?;
            out.push(TraceEntry {
                agent: tree.owner(v).expect("member node has an owner"),
                node: v,
                action,
                value,
            });
        }
    }
    Ok(out)
}

/// Contributions of the group's decisions on the way to `w`, root first.
pub fn contribution_trace(
    tree: &DecisionTree,
    g: Group,
    w: NodeIx,
    r: &ContributionFunction,
    limits: &Limits,
) -> Result<Vec<TraceEntry>, EvalError> {
    check_outcome(tree, w)?;
    trace_with(tree, &GroupContributions::new(tree, r, g, limits), w)
}

pub fn outcome_responsibility(tree: &DecisionTree, q: &ResponsibilityQuery, limits: &Limits) -> Result<f64, EvalError> {
    let trace = contribution_trace(tree, q.group, q.outcome, &q.contribution, limits)?;
    let xs: Vec<f64> = trace.iter().map(|e| e.value.value).collect();
    Ok(q.aggregator.apply(&xs)?)
}

/// R(G, w) for every outcome, in declaration order.
pub fn responsibility_table(
    tree: &DecisionTree,
    g: Group,
    r: &ContributionFunction,
    agg: &Aggregator,
    limits: &Limits,
) -> Result<Vec<(NodeIx, f64)>, EvalError> {
    let eval = GroupContributions::new(tree, r, g, limits);
    let mut out = Vec::new();
    for w in tree.outcomes() {
        let xs: Vec<f64> = trace_with(tree, &eval, w)?
            .iter()
            .map(|e| e.value.value)
            .collect();
        out.push((w, agg.apply(&xs)?));
    }
    Ok(out)
}

/// Anything that assigns responsibility to groups for outcomes; the
/// outcome-level axiom checkers are written against this.
pub trait OutcomeResponsibility {
    fn name(&self) -> String;

    /// R(G, w) for every outcome, in declaration order.
    fn table(&self, tree: &DecisionTree, g: Group, limits: &Limits) -> Result<Vec<(NodeIx, f64)>, EvalError>;
}

/// agg ∘ r.
#[derive(Clone, Debug)]
pub struct Composite {
    pub contribution: ContributionFunction,
    pub aggregator: Aggregator,
}

impl Composite {
    pub fn new(contribution: ContributionFunction, aggregator: Aggregator) -> Self {
        Composite {
            contribution,
            aggregator,
        }
    }
}

impl OutcomeResponsibility for Composite {
    fn name(&self) -> String {
        format!("{}∘{}", self.aggregator.name(), self.contribution.name())
    }

    fn table(&self, tree: &DecisionTree, g: Group, limits: &Limits) -> Result<Vec<(NodeIx, f64)>, EvalError> {
        responsibility_table(tree, g, &self.contribution, &self.aggregator, limits)
    }
}

/// A responsibility function given directly as a closure over (tree, G, w).
pub struct FnResponsibility<F> {
    pub name: String,
    pub f: F,
}

impl<F> OutcomeResponsibility for FnResponsibility<F>
where
    F: Fn(&DecisionTree, Group, NodeIx) -> f64,
{
    fn name(&self) -> String {
        self.name.clone()
    }

    fn table(&self, tree: &DecisionTree, g: Group, _limits: &Limits) -> Result<Vec<(NodeIx, f64)>, EvalError> {
        Ok(tree.outcomes().into_iter().map(|w| (w, (self.f)(tree, g, w))).collect())
    }
}
