//! Brute-force reference implementations, written straight from the
//! definitions: every quantity is a min/max over explicitly enumerated
//! strategies and scenarios, and likelihoods are sums over paths.
#![allow(dead_code)]

use groupresp::axioms::{generate_tree, FuzzConfig};
use groupresp::strategy::{enumerate_scenarios, enumerate_scenarios_at, enumerate_strategies, Scenario, Strategy};
use groupresp::{DecisionTree, EvalError, Group, NodeIx, NodeKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CAP: u64 = 200_000;

/// ℓ(target | start, σ, ζ) by enumerating every leaf below `start` and
/// keeping the paths that agree with σ and ζ.
pub fn path_likelihood(
    tree: &DecisionTree,
    g: Group,
    start: NodeIx,
    sigma: &Strategy,
    zeta: &Scenario,
    target: &[NodeIx],
) -> f64 {
    let mut total = 0.0;
    for &w in tree.branch(start) {
        if !tree.is_outcome(w) || !target.contains(&w) {
            continue;
        }
        let mut path = vec![w];
        let mut cur = w;
        while cur != start {
            cur = tree.parent(cur).expect("below start");
            path.push(cur);
        }
        path.reverse();
        let mut weight = 1.0;
        for pair in path.windows(2) {
            let (x, y) = (pair[0], pair[1]);
            let pos = tree.children(x).iter().position(|e| e.child == y).unwrap();
            match tree.kind(x) {
                NodeKind::Probability => weight *= tree.children(x)[pos].prob.unwrap(),
                NodeKind::Decision { owner } if g.contains(*owner) => {
                    if sigma.choice(x) != Some(pos) {
                        weight = 0.0;
                    }
                }
                _ => {
                    if zeta.resolution(x) != Some(pos) {
                        weight = 0.0;
                    }
                }
            }
        }
        total += weight;
    }
    total
}

fn eps_set(tree: &DecisionTree) -> Vec<NodeIx> {
    tree.undesirable()
}

/// γ(v) = min over Σ(T,G,v) × Z~(T,G,v) of ℓ(ε | v_ζ, σ, ζ).
pub fn gamma(tree: &DecisionTree, g: Group, v: NodeIx) -> Result<f64, EvalError> {
    let eps = eps_set(tree);
    let mut best = f64::INFINITY;
    for sigma in enumerate_strategies(tree, g, v, CAP)? {
        for zeta in enumerate_scenarios(tree, g, v, CAP)? {
            best = best.min(path_likelihood(tree, g, zeta.actual, &sigma, &zeta, &eps));
        }
    }
    Ok(best)
}

/// γ with `x` itself as the only actual node.
pub fn gamma_at(tree: &DecisionTree, g: Group, x: NodeIx) -> Result<f64, EvalError> {
    let eps = eps_set(tree);
    let mut best = f64::INFINITY;
    for sigma in enumerate_strategies(tree, g, x, CAP)? {
        for zeta in enumerate_scenarios_at(tree, g, x, CAP)? {
            best = best.min(path_likelihood(tree, g, x, &sigma, &zeta, &eps));
        }
    }
    Ok(best)
}

/// ω(start, ζ) = min over strategies of ℓ(ε | start, σ, ζ).
pub fn omega(tree: &DecisionTree, g: Group, start: NodeIx, zeta: &Scenario) -> Result<f64, EvalError> {
    let eps = eps_set(tree);
    let mut best = f64::INFINITY;
    for sigma in enumerate_strategies(tree, g, start, CAP)? {
        best = best.min(path_likelihood(tree, g, start, &sigma, zeta, &eps));
    }
    Ok(best)
}

fn clamp(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Raw Δγ: γ at the successor (as the actual node) minus γ over v's class.
pub fn like_raw(tree: &DecisionTree, g: Group, v: NodeIx, a: &str) -> Result<f64, EvalError> {
    let c = tree.successor(v, a)?;
    Ok(gamma_at(tree, g, c)? - gamma(tree, g, v)?)
}

pub fn like(tree: &DecisionTree, g: Group, v: NodeIx, a: &str) -> Result<f64, EvalError> {
    Ok(clamp(like_raw(tree, g, v, a)?))
}

/// max over ζ of ω(c_{v_ζ}(a), ζ) − ω(v_ζ, ζ).
pub fn risk(tree: &DecisionTree, g: Group, v: NodeIx, a: &str) -> Result<f64, EvalError> {
    let mut best = f64::NEG_INFINITY;
    for zeta in enumerate_scenarios(tree, g, v, CAP)? {
        let u = zeta.actual;
        let c = tree.successor(u, a)?;
        best = best.max(omega(tree, g, c, &zeta)? - omega(tree, g, u, &zeta)?);
    }
    Ok(clamp(best))
}

pub fn min_risk(tree: &DecisionTree, g: Group, v: NodeIx) -> Result<f64, EvalError> {
    let mut best = f64::INFINITY;
    for a in tree.actions(v) {
        best = best.min(risk(tree, g, v, a)?);
    }
    Ok(best)
}

pub fn negl(tree: &DecisionTree, g: Group, v: NodeIx, a: &str) -> Result<f64, EvalError> {
    Ok(clamp(risk(tree, g, v, a)? - min_risk(tree, g, v)?))
}

/// A deterministic batch of fuzzed trees.
pub fn fuzzed(cfg: &FuzzConfig, seed: u64, n: usize) -> Vec<DecisionTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| generate_tree(&mut rng, cfg)).collect()
}

/// Smaller trees for the exhaustive comparisons.
pub fn small_config() -> FuzzConfig {
    FuzzConfig {
        max_depth: 3,
        ..FuzzConfig::default()
    }
}

pub fn builtins() -> Vec<(&'static str, DecisionTree)> {
    use groupresp::builtins::*;
    vec![
        ("fig1a", fig1a(0.3).unwrap()),
        ("fig1a(0.45)", fig1a(0.45).unwrap()),
        ("fig1b", fig1b()),
        ("fig2", fig2()),
        ("fig3", fig3()),
        ("fig4", fig4()),
    ]
}
