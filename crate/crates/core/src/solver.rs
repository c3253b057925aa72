// Exact evaluation of the min/max quantities behind the contribution
// functions without enumerating the full strategy × scenario product.
//
// A group's information class is *coupled* below x if it has at least two
// members in B(x); x is a *split* node if some coupled class is not contained
// in a single child subtree of x (or x itself is one of its members). Away
// from split nodes every min/max decomposes over children, because the choices
// of different subtrees are independent. At split nodes the coupled classes
// are enumerated explicitly (and, for max-min, also the scenario resolutions).

use std::cell::RefCell;

use crate::error::EvalError;
use crate::group::Group;
use crate::strategy::{actual_candidates, enumerate_scenarios_at, Scenario};
use crate::tree::{DecisionTree, NodeIx, NodeKind};

#[derive(Clone, Copy)]
enum Mode<'a> {
    Min,
    Fixed(&'a Scenario),
}

pub(crate) struct Solver<'t> {
    tree: &'t DecisionTree,
    g: Group,
    cap: u64,
    bad: Vec<bool>,
    // sorted-label index → child position, per node
    label_order: Vec<Vec<usize>>,
    coupled_in: Vec<Vec<usize>>,
    split: Vec<bool>,
    gamma: RefCell<Vec<Option<f64>>>,
    maxmin: RefCell<Vec<Option<f64>>>,
}

impl<'t> Solver<'t> {
    pub(crate) fn new(tree: &'t DecisionTree, g: Group, cap: u64) -> Self {
        let n = tree.len();
        let bad = (0..n).map(|k| tree.is_undesirable(NodeIx(k))).collect();
        let label_order = (0..n)
            .map(|k| {
                let ch = tree.children(NodeIx(k));
                let mut idx: Vec<usize> = (0..ch.len()).collect();
                idx.sort_by(|&a, &b| ch[a].label.cmp(&ch[b].label));
                idx
            })
            .collect();

        let coupled: Vec<(usize, Vec<NodeIx>)> = tree
            .classes()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1 && tree.is_member_node(c[0], g))
            .map(|(k, c)| (k, c.clone()))
            .collect();
        let mut coupled_in = vec![Vec::new(); n];
        let mut split = vec![false; n];
        for x in tree.nodes() {
            for (k, members) in &coupled {
                let inside: Vec<NodeIx> = members
                    .iter()
                    .copied()
                    .filter(|&m| tree.in_branch(x, m))
                    .collect();
                if inside.len() < 2 {
                    continue;
                }
                coupled_in[x.0].push(*k);
                if inside.contains(&x) {
                    split[x.0] = true;
                } else {
                    let child = tree
                        .children(x)
                        .iter()
                        .find(|e| tree.in_branch(e.child, inside[0]))
                        .map(|e| e.child)
                        .expect("member below some child");
                    if inside.iter().any(|&m| !tree.in_branch(child, m)) {
                        split[x.0] = true;
                    }
                }
            }
        }
        Solver {
            tree,
            g,
            cap,
            bad,
            label_order,
            coupled_in,
            split,
            gamma: RefCell::new(vec![None; n]),
            maxmin: RefCell::new(vec![None; n]),
        }
    }

    pub(crate) fn group(&self) -> Group {
        self.g
    }

    fn is_member(&self, x: NodeIx) -> bool {
        self.tree.is_member_node(x, self.g)
    }

    fn leaf(&self, x: NodeIx) -> f64 {
        if self.bad[x.0] {
            1.0
        } else {
            0.0
        }
    }

    fn rec(&self, x: NodeIx, pins: &[Option<usize>], mode: Mode) -> Result<f64, EvalError> {
        let t = self.tree;
        let ch = t.children(x);
        match t.kind(x) {
            NodeKind::Outcome { .. } => Ok(self.leaf(x)),
            NodeKind::Probability => {
                let mut s = 0.0;
                for e in ch {
                    s += e.prob.unwrap_or(0.0) * self.rec(e.child, pins, mode)?;
                }
                Ok(s)
            }
            NodeKind::Decision { owner } if self.g.contains(*owner) => {
                match pins[t.class_index(x)] {
                    Some(k) => self.rec(ch[self.label_order[x.0][k]].child, pins, mode),
                    None => {
                        let mut best = f64::INFINITY;
                        for e in ch {
                            best = best.min(self.rec(e.child, pins, mode)?);
                        }
                        Ok(best)
                    }
                }
            }
            _ => match mode {
                Mode::Min => {
                    let mut best = f64::INFINITY;
                    for e in ch {
                        best = best.min(self.rec(e.child, pins, mode)?);
                    }
                    Ok(best)
                }
                Mode::Fixed(z) => {
                    let k = z
                        .resolution(x)
                        .ok_or_else(|| EvalError::DomainGap(t.id(x).to_string()))?;
                    self.rec(ch[k].child, pins, mode)
                }
            },
        }
    }

    /// min over assignments of the classes coupled below `x` of `f(pins)`.
    fn min_over_pins(
        &self,
        x: NodeIx,
        mut f: impl FnMut(&[Option<usize>]) -> Result<f64, EvalError>,
    ) -> Result<f64, EvalError> {
        let classes = &self.coupled_in[x.0];
        let radix: Vec<usize> = classes
            .iter()
            .map(|&c| self.tree.children(self.tree.classes()[c][0]).len())
            .collect();
        let count = radix
            .iter()
            .fold(1u128, |acc, &r| acc.saturating_mul(r as u128));
        if count > self.cap as u128 {
            return Err(EvalError::ExplosionGuard {
                what: "coupled strategies",
                count,
                cap: self.cap,
            });
        }
        let mut pins = vec![None; self.tree.classes().len()];
        let mut digits = vec![0usize; classes.len()];
        let mut best = f64::INFINITY;
        loop {
            for (k, &c) in classes.iter().enumerate() {
                pins[c] = Some(digits[k]);
            }
            best = best.min(f(&pins)?);
            let mut k = digits.len();
            loop {
                if k == 0 {
                    return Ok(best);
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < radix[k] {
                    break;
                }
                digits[k] = 0;
            }
        }
    }

    /// ω(x, ζ): min over uniform strategies of ℓ(ε | x, σ, ζ).
    pub(crate) fn omega(&self, x: NodeIx, z: &Scenario) -> Result<f64, EvalError> {
        self.min_over_pins(x, |pins| self.rec(x, pins, Mode::Fixed(z)))
    }

    /// min over strategies and resolutions with `x` itself as the actual node.
    pub(crate) fn gamma_actual(&self, x: NodeIx) -> Result<f64, EvalError> {
        if let Some(v) = self.gamma.borrow()[x.0] {
            return Ok(v);
        }
        let t = self.tree;
        let v = if self.split[x.0] {
            self.min_over_pins(x, |pins| self.rec(x, pins, Mode::Min))?
        } else {
            match t.kind(x) {
                NodeKind::Outcome { .. } => self.leaf(x),
                NodeKind::Probability => {
                    let mut s = 0.0;
                    for e in t.children(x) {
                        s += e.prob.unwrap_or(0.0) * self.gamma_actual(e.child)?;
                    }
                    s
                }
                _ => {
                    let mut best = f64::INFINITY;
                    for e in t.children(x) {
                        best = best.min(self.gamma_actual(e.child)?);
                    }
                    best
                }
            }
        };
        self.gamma.borrow_mut()[x.0] = Some(v);
        Ok(v)
    }

    /// γ(v): the minimum of `gamma_actual` over the possible actual nodes.
    pub(crate) fn gamma_class(&self, v: NodeIx) -> Result<f64, EvalError> {
        let mut best = f64::INFINITY;
        for u in actual_candidates(self.tree, self.g, v) {
            best = best.min(self.gamma_actual(u)?);
        }
        Ok(best)
    }

    /// max over resolutions below `x` of ω(x, ζ).
    pub(crate) fn maxmin(&self, x: NodeIx) -> Result<f64, EvalError> {
        if let Some(v) = self.maxmin.borrow()[x.0] {
            return Ok(v);
        }
        let t = self.tree;
        let v = if self.split[x.0] {
            let mut best = f64::NEG_INFINITY;
            for z in enumerate_scenarios_at(t, self.g, x, self.cap)? {
                best = best.max(self.omega(x, &z)?);
            }
            best
        } else {
            match t.kind(x) {
                NodeKind::Outcome { .. } => self.leaf(x),
                NodeKind::Probability => {
                    let mut s = 0.0;
                    for e in t.children(x) {
                        s += e.prob.unwrap_or(0.0) * self.maxmin(e.child)?;
                    }
                    s
                }
                _ if self.is_member(x) => {
                    let mut best = f64::INFINITY;
                    for e in t.children(x) {
                        best = best.min(self.maxmin(e.child)?);
                    }
                    best
                }
                _ => {
                    let mut best = f64::NEG_INFINITY;
                    for e in t.children(x) {
                        best = best.max(self.maxmin(e.child)?);
                    }
                    best
                }
            }
        };
        self.maxmin.borrow_mut()[x.0] = Some(v);
        Ok(v)
    }

    /// max over resolutions below `u` of ω(c_u(a), ζ) − ω(u, ζ), for the
    /// member node `u` and the child position `pos`.
    pub(crate) fn risk_at(&self, u: NodeIx, pos: usize) -> Result<f64, EvalError> {
        let t = self.tree;
        let ch = t.children(u);
        let target = ch[pos].child;
        if !self.split[u.0] {
            if ch.len() == 1 {
                return Ok(0.0);
            }
            let worst = self.maxmin(target)?;
            let mut alt = f64::INFINITY;
            for (k, e) in ch.iter().enumerate() {
                if k != pos {
                    alt = alt.min(self.gamma_actual(e.child)?);
                }
            }
            return Ok((worst - alt).max(0.0));
        }
        let mut best = f64::NEG_INFINITY;
        for z in enumerate_scenarios_at(t, self.g, u, self.cap)? {
            best = best.max(self.omega(target, &z)? - self.omega(u, &z)?);
        }
        Ok(best)
    }

    /// Unclamped max over Z~(v) of the avoidance shortfall caused by `action`.
    pub(crate) fn risk(&self, v: NodeIx, action: &str) -> Result<f64, EvalError> {
        let mut best = f64::NEG_INFINITY;
        for u in self.tree.class_of(v) {
            let pos = self.tree.action_pos(*u, action)?;
            best = best.max(self.risk_at(*u, pos)?);
        }
        Ok(best)
    }

    /// Unclamped γ(c_v(a)) − γ(v), with the successor evaluated as actual.
    pub(crate) fn like(&self, v: NodeIx, action: &str) -> Result<f64, EvalError> {
        let c = self.tree.successor(v, action)?;
        Ok(self.gamma_actual(c)? - self.gamma_class(v)?)
    }
}
