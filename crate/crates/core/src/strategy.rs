//! Uniform strategies, scenarios and the likelihood recursion.

use std::collections::BTreeMap;

use crate::error::EvalError;
use crate::group::Group;
use crate::tree::{DecisionTree, NodeIx, NodeKind};

/// A uniform choice of actions for the group's decision nodes in the
/// information branch of `anchor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub group: Group,
    pub anchor: NodeIx,
    /// node → position of the chosen edge
    choice: BTreeMap<NodeIx, usize>,
}

/// A designated actual node plus a resolution of all non-member decision
/// nodes and ambiguity nodes below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub group: Group,
    pub anchor: NodeIx,
    pub actual: NodeIx,
    /// node → position of the selected child
    resolution: BTreeMap<NodeIx, usize>,
}

/// The information classes a strategy anchored at `anchor` must fix, each
/// with its members inside the domain V_G ∩ B~(anchor), ordered by first
/// occurrence.
pub fn strategy_classes(tree: &DecisionTree, g: Group, anchor: NodeIx) -> Vec<(usize, Vec<NodeIx>)> {
    let mut by_class: BTreeMap<usize, Vec<NodeIx>> = BTreeMap::new();
    for x in tree.info_branch(anchor) {
        if tree.is_member_node(x, g) {
            by_class.entry(tree.class_index(x)).or_default().push(x);
        }
    }
    by_class
        .into_iter()
        .map(|(c, mut v)| {
            v.sort();
            (c, v)
        })
        .collect()
}

fn sorted_actions(tree: &DecisionTree, v: NodeIx) -> Vec<&str> {
    let mut a = tree.actions(v);
    a.sort_unstable();
    a
}

fn guard(what: &'static str, count: u128, cap: u64) -> Result<(), EvalError> {
    if count > cap as u128 {
        Err(EvalError::ExplosionGuard { what, count, cap })
    } else {
        Ok(())
    }
}

/// |Σ(T, G, v)| without enumerating.
pub fn strategy_count(tree: &DecisionTree, g: Group, anchor: NodeIx) -> u128 {
    strategy_classes(tree, g, anchor)
        .iter()
        .map(|(_, m)| tree.children(m[0]).len() as u128)
        .fold(1u128, |acc, k| acc.saturating_mul(k))
}

impl Strategy {
    /// Builds a strategy by choosing one action label per information class;
    /// `pick` receives the class members in the domain and the sorted labels and
    /// returns an index into the labels.
    pub fn from_classes(
        tree: &DecisionTree,
        g: Group,
        anchor: NodeIx,
        mut pick: impl FnMut(&[NodeIx], &[&str]) -> usize,
    ) -> Strategy {
        let mut choice = BTreeMap::new();
        for (_, members) in strategy_classes(tree, g, anchor) {
            let labels = sorted_actions(tree, members[0]);
            let label = labels[pick(&members, &labels)];
            for &m in &members {
                choice.insert(m, tree.action_pos(m, label).expect("uniform action sets"));
            }
        }
        Strategy {
            group: g,
            anchor,
            choice,
        }
    }

    /// Position of the chosen edge at `v`, if `v` is in the domain.
    pub fn choice(&self, v: NodeIx) -> Option<usize> {
        self.choice.get(&v).copied()
    }

    pub fn action<'t>(&self, tree: &'t DecisionTree, v: NodeIx) -> Option<&'t str> {
        self.choice(v)
            .and_then(|k| tree.children(v)[k].label.as_deref())
    }

    pub fn domain(&self) -> impl Iterator<Item = NodeIx> + '_ {
        self.choice.keys().copied()
    }

    pub fn describe(&self, tree: &DecisionTree) -> String {
        let parts: Vec<String> = self
            .choice
            .iter()
            .map(|(&v, &k)| {
                format!(
                    "{}={}",
                    tree.id(v),
                    tree.children(v)[k].label.as_deref().unwrap_or("?")
                )
            })
            .collect();
        parts.join(", ")
    }
}

/// Σ(T, G, v) in canonical order: classes by first occurrence, actions
/// lexicographically, later classes varying fastest.
pub fn enumerate_strategies(
    tree: &DecisionTree,
    g: Group,
    anchor: NodeIx,
    cap: u64,
) -> Result<Vec<Strategy>, EvalError> {
    let classes = strategy_classes(tree, g, anchor);
    let labels: Vec<Vec<&str>> = classes
        .iter()
        .map(|(_, m)| sorted_actions(tree, m[0]))
        .collect();
    let count = labels
        .iter()
        .fold(1u128, |acc, l| acc.saturating_mul(l.len() as u128));
    guard("strategies", count, cap)?;

    let mut out = Vec::with_capacity(count as usize);
    let mut digits = vec![0usize; classes.len()];
    loop {
        let mut choice = BTreeMap::new();
        for (k, (_, members)) in classes.iter().enumerate() {
            let label = labels[k][digits[k]];
            for &m in members {
                choice.insert(m, tree.action_pos(m, label).expect("uniform action sets"));
            }
        }
        out.push(Strategy {
            group: g,
            anchor,
            choice,
        });
        if !advance(&mut digits, |k| labels[k].len()) {
            break;
        }
    }
    Ok(out)
}

fn advance(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for k in (0..digits.len()).rev() {
        digits[k] += 1;
        if digits[k] < radix(k) {
            return true;
        }
        digits[k] = 0;
    }
    false
}

/// Candidate actual nodes for scenarios anchored at `v`: its information
/// class when `v` is a member decision node, otherwise `{v}`.
pub fn actual_candidates(tree: &DecisionTree, g: Group, v: NodeIx) -> Vec<NodeIx> {
    if tree.is_member_node(v, g) {
        tree.class_of(v).to_vec()
    } else {
        vec![v]
    }
}

/// V_−G ∩ B(actual), in depth-first order.
pub fn scenario_domain(tree: &DecisionTree, g: Group, actual: NodeIx) -> Vec<NodeIx> {
    tree.branch(actual)
        .iter()
        .copied()
        .filter(|&x| tree.is_nonmember_node(x, g))
        .collect()
}

impl Scenario {
    /// Builds a scenario with the given actual node; `pick` selects a child
    /// position for each node of the domain.
    pub fn from_fn(
        tree: &DecisionTree,
        g: Group,
        anchor: NodeIx,
        actual: NodeIx,
        mut pick: impl FnMut(NodeIx, usize) -> usize,
    ) -> Scenario {
        let resolution = scenario_domain(tree, g, actual)
            .into_iter()
            .map(|x| (x, pick(x, tree.children(x).len())))
            .collect();
        Scenario {
            group: g,
            anchor,
            actual,
            resolution,
        }
    }

    /// Position of the selected child at `v`, if `v` is in the domain.
    pub fn resolution(&self, v: NodeIx) -> Option<usize> {
        self.resolution.get(&v).copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = NodeIx> + '_ {
        self.resolution.keys().copied()
    }

    pub fn describe(&self, tree: &DecisionTree) -> String {
        let mut s = format!("actual={}", tree.id(self.actual));
        for (&v, &k) in &self.resolution {
            let e = &tree.children(v)[k];
            s.push_str(&format!(
                ", {}→{}",
                tree.id(v),
                e.label.as_deref().unwrap_or(tree.id(e.child))
            ));
        }
        s
    }
}

fn enumerate_resolutions(
    tree: &DecisionTree,
    g: Group,
    anchor: NodeIx,
    actual: NodeIx,
    out: &mut Vec<Scenario>,
) {
    let domain = scenario_domain(tree, g, actual);
    let mut digits = vec![0usize; domain.len()];
    loop {
        let resolution = domain.iter().copied().zip(digits.iter().copied()).collect();
        out.push(Scenario {
            group: g,
            anchor,
            actual,
            resolution,
        });
        if !advance(&mut digits, |k| tree.children(domain[k]).len()) {
            break;
        }
    }
}

fn resolution_count(tree: &DecisionTree, g: Group, actual: NodeIx) -> u128 {
    scenario_domain(tree, g, actual)
        .iter()
        .fold(1u128, |acc, &x| acc.saturating_mul(tree.children(x).len() as u128))
}

/// |Z~(T, G, v)| without enumerating.
pub fn scenario_count(tree: &DecisionTree, g: Group, v: NodeIx) -> u128 {
    actual_candidates(tree, g, v)
        .into_iter()
        .map(|u| resolution_count(tree, g, u))
        .fold(0u128, |acc, k| acc.saturating_add(k))
}

/// Z~(T, G, v): actual nodes in declaration order, resolutions with the last
/// domain node varying fastest.
pub fn enumerate_scenarios(
    tree: &DecisionTree,
    g: Group,
    v: NodeIx,
    cap: u64,
) -> Result<Vec<Scenario>, EvalError> {
    guard("scenarios", scenario_count(tree, g, v), cap)?;
    let mut out = Vec::new();
    for u in actual_candidates(tree, g, v) {
        enumerate_resolutions(tree, g, v, u, &mut out);
    }
    Ok(out)
}

/// The scenarios of Z~(T, G, v) whose actual node is `actual` itself.
pub fn enumerate_scenarios_at(
    tree: &DecisionTree,
    g: Group,
    actual: NodeIx,
    cap: u64,
) -> Result<Vec<Scenario>, EvalError> {
    guard("scenarios", resolution_count(tree, g, actual), cap)?;
    let mut out = Vec::new();
    enumerate_resolutions(tree, g, actual, actual, &mut out);
    Ok(out)
}

/// Membership mask over nodes for a target outcome set.
pub fn target_mask(tree: &DecisionTree, target: &[NodeIx]) -> Vec<bool> {
    let mut m = vec![false; tree.len()];
    for &w in target {
        m[w.index()] = true;
    }
    m
}

/// ℓ(target | start, σ, ζ).
pub fn likelihood(
    tree: &DecisionTree,
    g: Group,
    start: NodeIx,
    sigma: &Strategy,
    zeta: &Scenario,
    target: &[NodeIx],
) -> Result<f64, EvalError> {
    let mask = target_mask(tree, target);
    likelihood_masked(tree, g, start, sigma, zeta, &mask)
}

pub(crate) fn likelihood_masked(
    tree: &DecisionTree,
    g: Group,
    x: NodeIx,
    sigma: &Strategy,
    zeta: &Scenario,
    mask: &[bool],
) -> Result<f64, EvalError> {
    let gap = || EvalError::DomainGap(tree.id(x).to_string());
    match tree.kind(x) {
        NodeKind::Outcome { .. } => Ok(if mask[x.index()] { 1.0 } else { 0.0 }),
        NodeKind::Probability => {
            let mut s = 0.0;
            for e in tree.children(x) {
                s += e.prob.unwrap_or(0.0) * likelihood_masked(tree, g, e.child, sigma, zeta, mask)?;
            }
            Ok(s)
        }
        NodeKind::Decision { owner } if g.contains(*owner) => {
            let k = sigma.choice(x).ok_or_else(gap)?;
            likelihood_masked(tree, g, tree.children(x)[k].child, sigma, zeta, mask)
        }
        _ => {
            let k = zeta.resolution(x).ok_or_else(gap)?;
            likelihood_masked(tree, g, tree.children(x)[k].child, sigma, zeta, mask)
        }
    }
}

/// ℓ evaluated from the scenario's actual node.
pub fn likelihood_from_scenario(
    tree: &DecisionTree,
    g: Group,
    zeta: &Scenario,
    sigma: &Strategy,
    target: &[NodeIx],
) -> Result<f64, EvalError> {
    likelihood(tree, g, zeta.actual, sigma, zeta, target)
}
