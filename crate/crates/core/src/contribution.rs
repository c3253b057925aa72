//! Member contribution functions and their building blocks: guaranteed
//! likelihood γ, optimal avoidance ω and minimal risk ρ̲.
//!
//! All three built-in functions are evaluated exactly. Rather than looping
//! over every strategy/scenario pair, the evaluator decomposes the min/max
//! problems along the tree and enumerates only where information sets of the
//! group tie separate subtrees together.
//!
//! `like` compares γ at the successor — taken as the actual node, since the
//! agent's own move resolves where the play continues — with γ at `v` taken
//! over the information set of `v`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{EvalError, TreeError};
use crate::group::Group;
use crate::solver::Solver;
use crate::strategy::Scenario;
use crate::tree::{AgentIx, DecisionTree, NodeIx};
use crate::Limits;

/// (G, i, v, a): the contribution of agent `i`'s action `a` at `v` as a member
/// of `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContributionQuery {
    pub group: Group,
    pub agent: AgentIx,
    pub node: NodeIx,
    pub action: String,
}

impl ContributionQuery {
    /// Builds a query where the agent is the owner of `node`.
    pub fn at(tree: &DecisionTree, group: Group, node: NodeIx, action: &str) -> Result<Self, EvalError> {
        let agent = tree
            .owner(node)
            .ok_or_else(|| TreeError::NotDecisionNode(tree.id(node).to_string()))?;
        let q = ContributionQuery {
            group,
            agent,
            node,
            action: action.to_string(),
        };
        q.check(tree)?;
        Ok(q)
    }

    /// Builds a query from names, e.g. `("i,j", "j", "v2", "left")`.
    pub fn parse(tree: &DecisionTree, group: &str, agent: &str, node: &str, action: &str) -> Result<Self, EvalError> {
        let q = ContributionQuery {
            group: Group::parse_list(tree, group)?,
            agent: tree.agent_ix(agent)?,
            node: tree.ix(node)?,
            action: action.to_string(),
        };
        q.check(tree)?;
        Ok(q)
    }

    /// Rejects queries for which the contribution is undefined.
    pub fn check(&self, tree: &DecisionTree) -> Result<(), EvalError> {
        if !self.group.contains(self.agent) {
            return Err(EvalError::UndefinedQuery(format!(
                "agent `{}` is not in {}",
                tree.agent_name(self.agent),
                self.group.display(tree)
            )));
        }
        if tree.owner(self.node) != Some(self.agent) {
            return Err(EvalError::UndefinedQuery(format!(
                "`{}` is not a decision node of `{}`",
                tree.id(self.node),
                tree.agent_name(self.agent)
            )));
        }
        tree.action_pos(self.node, &self.action)?;
        Ok(())
    }
}

/// A contribution value in [0, 1]. `clamped` records that the underlying
/// difference fell outside the unit interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContributionValue {
    pub value: f64,
    pub raw: f64,
    pub clamped: bool,
}

impl ContributionValue {
    pub fn clamp(raw: f64) -> Self {
        let value = raw.clamp(0.0, 1.0);
        ContributionValue {
            value,
            raw,
            clamped: value != raw,
        }
    }
}

pub type ExternalContribution = Arc<dyn Fn(&DecisionTree, &ContributionQuery) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum ContributionFunction {
    Like,
    Risk,
    Negl,
    External { name: String, f: ExternalContribution },
}

impl fmt::Debug for ContributionFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl ContributionFunction {
    pub fn external(
        name: &str,
        f: impl Fn(&DecisionTree, &ContributionQuery) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ContributionFunction::External {
            name: name.to_string(),
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            ContributionFunction::Like => "like",
            ContributionFunction::Risk => "risk",
            ContributionFunction::Negl => "negl",
            ContributionFunction::External { name, .. } => name,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "like" => Some(ContributionFunction::Like),
            "risk" => Some(ContributionFunction::Risk),
            "negl" => Some(ContributionFunction::Negl),
            _ => None,
        }
    }

    /// Evaluates a single query. For many queries against one group prefer
    /// [`GroupContributions`], which shares intermediate results.
    pub fn evaluate(&self, tree: &DecisionTree, q: &ContributionQuery, limits: &Limits) -> Result<ContributionValue, EvalError> {
        q.check(tree)?;
        GroupContributions::new(tree, self, q.group, limits).value(q.node, &q.action)
    }
}

/// Cached evaluation of one contribution function for one group.
pub struct GroupContributions<'t> {
    tree: &'t DecisionTree,
    r: ContributionFunction,
    solver: Solver<'t>,
    cache: RefCell<HashMap<(NodeIx, String), ContributionValue>>,
}

impl<'t> GroupContributions<'t> {
    pub fn new(tree: &'t DecisionTree, r: &ContributionFunction, g: Group, limits: &Limits) -> Self {
        GroupContributions {
            tree,
            r: r.clone(),
            solver: Solver::new(tree, g, limits.cap),
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn group(&self) -> Group {
        self.solver.group()
    }

    /// r(G, owner(v), v, action).
    pub fn value(&self, v: NodeIx, action: &str) -> Result<ContributionValue, EvalError> {
        let key = (v, action.to_string());
        if let Some(c) = self.cache.borrow().get(&key) {
            return Ok(*c);
        }
        let q = ContributionQuery::at(self.tree, self.group(), v, action)?;
        let c = match &self.r {
            ContributionFunction::Like => ContributionValue::clamp(self.solver.like(v, action)?),
            ContributionFunction::Risk => ContributionValue::clamp(self.solver.risk(v, action)?),
            ContributionFunction::Negl => {
                let here = self.risk_value(v, action)?;
                let floor = self.min_risk(v)?;
                ContributionValue::clamp(here.value - floor)
            }
            ContributionFunction::External { f, .. } => ContributionValue::clamp(f(self.tree, &q)),
        };
        self.cache.borrow_mut().insert(key, c);
        Ok(c)
    }

    fn risk_value(&self, v: NodeIx, action: &str) -> Result<ContributionValue, EvalError> {
        Ok(ContributionValue::clamp(self.solver.risk(v, action)?))
    }

    /// ρ̲(G, i, v) = min over actions of r_risk.
    pub fn min_risk(&self, v: NodeIx) -> Result<f64, EvalError> {
        let mut best = f64::INFINITY;
        for a in self.tree.actions(v) {
            best = best.min(self.risk_value(v, a)?.value);
        }
        Ok(best)
    }

    /// Every value computed so far whose raw difference had to be clamped,
    /// in node order.
    pub fn clamped(&self) -> Vec<(NodeIx, String, ContributionValue)> {
        let mut out: Vec<_> = self
            .cache
            .borrow()
            .iter()
            .filter(|(_, c)| c.clamped)
            .map(|((v, a), c)| (*v, a.clone(), *c))
            .collect();
        out.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
        out
    }

    /// γ(v) for this group.
    pub fn guaranteed_likelihood(&self, v: NodeIx) -> Result<f64, EvalError> {
        self.solver.gamma_class(v)
    }

    /// γ with `v` itself fixed as the actual node.
    pub fn guaranteed_likelihood_at(&self, v: NodeIx) -> Result<f64, EvalError> {
        self.solver.gamma_actual(v)
    }
}

/// γ(v): min over Σ(T,G,v) and Z~(T,G,v) of ℓ(ε | v_ζ, σ, ζ).
pub fn guaranteed_likelihood(tree: &DecisionTree, g: Group, v: NodeIx, limits: &Limits) -> Result<f64, EvalError> {
    Solver::new(tree, g, limits.cap).gamma_class(v)
}

/// γ restricted to scenarios whose actual node is `v`.
pub fn guaranteed_likelihood_at(tree: &DecisionTree, g: Group, v: NodeIx, limits: &Limits) -> Result<f64, EvalError> {
    Solver::new(tree, g, limits.cap).gamma_actual(v)
}

/// ω(start, ζ): min over uniform strategies of ℓ(ε | start, σ, ζ).
pub fn optimal_avoidance(
    tree: &DecisionTree,
    g: Group,
    start: NodeIx,
    zeta: &Scenario,
    limits: &Limits,
) -> Result<f64, EvalError> {
    Solver::new(tree, g, limits.cap).omega(start, zeta)
}

pub fn r_like(tree: &DecisionTree, q: &ContributionQuery, limits: &Limits) -> Result<ContributionValue, EvalError> {
    ContributionFunction::Like.evaluate(tree, q, limits)
}

pub fn r_risk(tree: &DecisionTree, q: &ContributionQuery, limits: &Limits) -> Result<ContributionValue, EvalError> {
    ContributionFunction::Risk.evaluate(tree, q, limits)
}

pub fn r_negl(tree: &DecisionTree, q: &ContributionQuery, limits: &Limits) -> Result<ContributionValue, EvalError> {
    ContributionFunction::Negl.evaluate(tree, q, limits)
}

/// ρ̲(G, i, v).
pub fn min_risk(tree: &DecisionTree, g: Group, i: AgentIx, v: NodeIx, limits: &Limits) -> Result<f64, EvalError> {
    if !g.contains(i) || tree.owner(v) != Some(i) {
        return Err(EvalError::UndefinedQuery(format!(
            "`{}` is not a decision node of a member `{}`",
            tree.id(v),
            tree.agent_name(i)
        )));
    }
    GroupContributions::new(tree, &ContributionFunction::Risk, g, limits).min_risk(v)
}
