//! Aggregation axioms, property-tested on seeded random contribution vectors.
//!
//! Each axiom first runs a few fixed probes (the textbook counterexamples),
//! then `samples` random instances. Entries are drawn as exact 0s, exact 1s
//! or uniform values so that the special cases of (AN1), (NE0) and (RED) are
//! actually exercised. Strict increases are tested on perturbations of at
//! least `min_step`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::aggregation::{agg_avg, agg_max, agg_mprod, agg_sum, Aggregator};
use crate::axioms::{AxiomId, AxiomReport, Witness};
use crate::EPS;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleConfig {
    pub seed: u64,
    pub min_dim: usize,
    pub max_dim: usize,
    pub samples: usize,
    pub eps: f64,
    /// Smallest appended entry or coordinate increase used for strictness.
    pub min_step: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: 42,
            min_dim: 1,
            max_dim: 6,
            samples: 10_000,
            eps: EPS,
            min_step: 1e-3,
        }
    }
}

impl Aggregator {
    /// The raw value, without the codomain check of [`Aggregator::apply`].
    pub fn eval_raw(&self, xs: &[f64]) -> f64 {
        match self {
            Aggregator::Sum => agg_sum(xs),
            Aggregator::Avg => agg_avg(xs),
            Aggregator::Max => agg_max(xs),
            Aggregator::MProd => agg_mprod(xs),
            Aggregator::External { f, .. } => f(xs),
        }
    }
}

/// One concrete instance of an axiom's premise.
#[derive(Clone, Debug)]
struct Instance {
    vectors: Vec<Vec<f64>>,
    t: Option<f64>,
}

fn inst(vectors: Vec<Vec<f64>>) -> Instance {
    Instance { vectors, t: None }
}

/// Evaluates the conclusion on an instance; returns the aggregated values and
/// whether the conclusion fails.
fn violates(agg: &Aggregator, axiom: AxiomId, i: &Instance, eps: f64) -> (Vec<f64>, bool) {
    let f = |x: &Vec<f64>| agg.eval_raw(x);
    let vals: Vec<f64> = i.vectors.iter().map(f).collect();
    let near = |a: f64, b: f64| (a - b).abs() <= eps;
    let bad = match axiom {
        AxiomId::B01 => !(-eps..=1.0 + eps).contains(&vals[0]),
        // either agg(x) = 1 or agg(x) < agg(x')
        AxiomId::BsmPlus | AxiomId::BsmGt => !(near(vals[0], 1.0) || vals[0] < vals[1]),
        AxiomId::Lin => {
            let t = i.t.expect("affinity parameter");
            !near(vals[1], (1.0 - t) * vals[0] + t * vals[2])
        }
        AxiomId::An1 => !near(vals[0], 1.0),
        AxiomId::Ne0 | AxiomId::Sip | AxiomId::Aat => !near(vals[0], vals[1]),
        AxiomId::Red => {
            let zero = i.vectors[0].iter().all(|&x| x == 0.0);
            near(vals[0], 0.0) != zero
        }
        _ => unreachable!("not an aggregation axiom"),
    };
    (vals, bad)
}

/// Re-evaluates a reported witness; true if it still demonstrates a violation.
pub fn witness_violates(agg: &Aggregator, axiom: AxiomId, w: &Witness, eps: f64) -> bool {
    match w {
        Witness::Vectors { vectors, t, .. } => {
            let i = Instance {
                vectors: vectors.clone(),
                t: *t,
            };
            violates(agg, axiom, &i, eps).1
        }
        _ => false,
    }
}

fn probes(axiom: AxiomId) -> Vec<Instance> {
    match axiom {
        AxiomId::B01 => vec![inst(vec![vec![1.0, 1.0]])],
        AxiomId::BsmPlus => vec![
            inst(vec![vec![0.9], vec![0.9, 0.1]]),
            inst(vec![vec![0.5], vec![0.5, 0.4]]),
        ],
        AxiomId::BsmGt => vec![inst(vec![vec![0.5, 0.8], vec![0.6, 0.8]])],
        AxiomId::Lin => vec![Instance {
            vectors: vec![vec![0.0, 0.5], vec![0.5, 0.5], vec![1.0, 0.5]],
            t: Some(0.5),
        }],
        AxiomId::An1 => vec![inst(vec![vec![1.0, 1.0]]), inst(vec![vec![1.0, 0.2]])],
        AxiomId::Ne0 => vec![inst(vec![vec![0.3, 0.0], vec![0.3]])],
        AxiomId::Sip => vec![inst(vec![vec![0.9], vec![0.9, 0.9]]), inst(vec![vec![1.0], vec![1.0, 1.0]])],
        AxiomId::Aat => vec![inst(vec![vec![0.1, 0.5, 0.9], vec![0.9, 0.5, 0.1]])],
        AxiomId::Red => vec![inst(vec![vec![0.0, 0.0]]), inst(vec![vec![0.0, 0.4]])],
        _ => Vec::new(),
    }
}

fn entry(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.gen();
    if u < 0.1 {
        0.0
    } else if u < 0.2 {
        1.0
    } else {
        rng.gen()
    }
}

fn vector(rng: &mut ChaCha8Rng, cfg: &SampleConfig, min_len: usize) -> Vec<f64> {
    let lo = cfg.min_dim.max(min_len).max(1);
    let hi = cfg.max_dim.max(lo);
    let n = rng.gen_range(lo..=hi);
    (0..n).map(|_| entry(rng)).collect()
}

fn step(rng: &mut ChaCha8Rng, room: f64, min_step: f64) -> Option<f64> {
    if room < min_step {
        return None;
    }
    Some(if rng.gen_bool(0.2) { room } else { rng.gen_range(min_step..=room) })
}

fn sample(axiom: AxiomId, rng: &mut ChaCha8Rng, cfg: &SampleConfig) -> Option<Instance> {
    match axiom {
        AxiomId::B01 => Some(inst(vec![vector(rng, cfg, 1)])),
        AxiomId::BsmPlus => {
            let x = vector(rng, cfg, 1);
            let mut y = x.clone();
            y.push(step(rng, 1.0, cfg.min_step)?);
            Some(inst(vec![x, y]))
        }
        AxiomId::BsmGt => {
            let x = vector(rng, cfg, 1);
            let j = rng.gen_range(0..x.len());
            let mut y = x.clone();
            y[j] = (x[j] + step(rng, 1.0 - x[j], cfg.min_step)?).min(1.0);
            Some(inst(vec![x, y]))
        }
        AxiomId::Lin => {
            let x = vector(rng, cfg, 1);
            let j = rng.gen_range(0..x.len());
            let (a, b): (f64, f64) = (rng.gen(), rng.gen());
            let t: f64 = if rng.gen_bool(0.5) { 0.5 } else { rng.gen() };
            let (mut lo, mut mid, mut hi) = (x.clone(), x.clone(), x);
            lo[j] = a;
            hi[j] = b;
            mid[j] = (1.0 - t) * a + t * b;
            Some(Instance {
                vectors: vec![lo, mid, hi],
                t: Some(t),
            })
        }
        AxiomId::An1 => {
            let mut x = vector(rng, cfg, 1);
            let j = rng.gen_range(0..x.len());
            x[j] = 1.0;
            Some(inst(vec![x]))
        }
        AxiomId::Ne0 => {
            let short = vector(rng, cfg, 1);
            if short.len() >= cfg.max_dim.max(2) {
                return None;
            }
            let mut long = short.clone();
            long.insert(rng.gen_range(0..=short.len()), 0.0);
            Some(inst(vec![long, short]))
        }
        AxiomId::Sip => {
            let x = vector(rng, cfg, 1);
            let k = rng.gen_range(2..=3);
            let rep: Vec<f64> = (0..k).flat_map(|_| x.iter().copied()).collect();
            Some(inst(vec![x, rep]))
        }
        AxiomId::Aat => {
            let x = vector(rng, cfg, 1);
            let mut y = x.clone();
            y.shuffle(rng);
            Some(inst(vec![x, y]))
        }
        AxiomId::Red => {
            let mut x = vector(rng, cfg, 1);
            if rng.gen_bool(0.2) {
                x.iter_mut().for_each(|e| *e = 0.0);
            }
            Some(inst(vec![x]))
        }
        _ => None,
    }
}

/// Property-tests one aggregation axiom. Deterministic under `cfg.seed`.
pub fn check_agg_axiom(agg: &Aggregator, axiom: AxiomId, cfg: &SampleConfig) -> AxiomReport {
    assert!(
        AxiomId::AGGREGATION.contains(&axiom),
        "{axiom} is not an aggregation axiom"
    );
    let mut instances = 0u64;
    let report = |instances, i: &Instance, vals: Vec<f64>| {
        AxiomReport::violated(
            axiom,
            instances,
            Witness::Vectors {
                vectors: i.vectors.clone(),
                values: vals,
                t: i.t,
            },
        )
    };
    for p in probes(axiom) {
        instances += 1;
        let (vals, bad) = violates(agg, axiom, &p, cfg.eps);
        if bad {
            return report(instances, &p, vals);
        }
    }
    // each axiom gets its own stream so adding probes or axioms elsewhere
    // leaves the others' samples unchanged
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (axiom as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    for _ in 0..cfg.samples {
        let Some(i) = sample(axiom, &mut rng, cfg) else {
            continue;
        };
        instances += 1;
        let (vals, bad) = violates(agg, axiom, &i, cfg.eps);
        if bad {
            return report(instances, &i, vals);
        }
    }
    AxiomReport::satisfied(axiom, instances)
}

/// Every aggregation axiom for one aggregator.
pub fn check_agg_suite(agg: &Aggregator, cfg: &SampleConfig) -> Vec<AxiomReport> {
    AxiomId::AGGREGATION
        .iter()
        .map(|&a| check_agg_axiom(agg, a, cfg))
        .collect()
}

/// The vectors that [`check_agg_axiom`] would visit, for comparing two
/// aggregators sample by sample.
pub fn sample_vectors(cfg: &SampleConfig) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.samples).map(|_| vector(&mut rng, cfg, 1)).collect()
}
