//! End-to-end reproduction checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use groupresp::aggregation::agg_mprod;
use groupresp::axioms::aggregate::{check_agg_axiom, sample_vectors, witness_violates, SampleConfig};
use groupresp::axioms::member::check_member_suite;
use groupresp::axioms::outcome::check_nrv_reductions;
use groupresp::axioms::*;
use groupresp::builtins::{fig1a, fig1b, fig2, fig3, fig4};
use groupresp::contribution::ContributionQuery;
use groupresp::responsibility::{responsibility_table, Composite};
use groupresp::strategy::{enumerate_scenarios_at, enumerate_strategies, likelihood, strategy_count};
use groupresp::{Aggregator, ContributionFunction, DecisionTree, EvalError, Group, Limits};

const VALUE_TOL: f64 = 1e-9;
const LIKELIHOOD_TOL: f64 = 1e-12;
const CHARACTERISATION_TOL: f64 = 1e-9;
const FUZZ_TREES: usize = 1_000;
const OUTCOME_FUZZ_TREES: usize = 200;
/// Cap on (σ, ζ) pairs per (group, start node) of the likelihood oracle; the
/// built-ins are always checked exhaustively.
const ORACLE_CAP: u64 = 100_000;
const BUILTIN_ORACLE_CAP: u64 = 1_000_000;

const FUNCTIONS: [ContributionFunction; 3] = [ContributionFunction::Like, ContributionFunction::Risk, ContributionFunction::Negl];

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(problems: Vec<String>, summary: String) -> Outcome {
    if problems.is_empty() {
        Outcome { ok: true, detail: summary }
    } else {
        Outcome {
            ok: false,
            detail: problems.join("; "),
        }
    }
}

fn value(t: &DecisionTree, r: &ContributionFunction, group: &str, agent: &str, node: &str, action: &str) -> f64 {
    let q = ContributionQuery::parse(t, group, agent, node, action).unwrap();
    r.evaluate(t, &q, &Limits::default()).unwrap().value
}

fn table1() -> Outcome {
    let mut bad = Vec::new();
    let mut check = |what: String, got: f64, want: f64| {
        if (got - want).abs() > VALUE_TOL {
            bad.push(format!("{what}: {got} ≠ {want}"));
        }
    };
    let [like, risk, negl] = &FUNCTIONS;
    for p in [0.3, 0.45] {
        let t = fig1a(p).unwrap();
        let rows = [(like, [1.0 - p, 0.0]), (risk, [1.0 - p, p]), (negl, [1.0 - 2.0 * p, 0.0])];
        for (r, want) in rows {
            for (a, w) in ["evade", "steady"].into_iter().zip(want) {
                check(format!("fig1a({p}) {} {a}", r.name()), value(&t, r, "i", "i", "v1", a), w);
            }
        }
    }
    let b = fig1b();
    for (r, want) in [(like, [0.0, 0.0]), (risk, [1.0, 0.0]), (negl, [1.0, 0.0])] {
        for (a, w) in ["ignore", "test"].into_iter().zip(want) {
            check(format!("fig1b {{i}} {} {a}", r.name()), value(&b, r, "i", "i", "v1", a), w);
            check(format!("fig1b {{i,j}} {} {a}", r.name()), value(&b, r, "i,j", "i", "v1", a), 0.0);
        }
    }
    let f = fig2();
    for (r, want) in [(like, [0.0, 0.0]), (risk, [1.0, 1.0]), (negl, [0.0, 0.0])] {
        for (a, w) in ["left", "right"].into_iter().zip(want) {
            check(format!("fig2 {{i}} {} {a}", r.name()), value(&f, r, "i", "i", "v1", a), w);
            check(format!("fig2 {{i,j}} {} {a}", r.name()), value(&f, r, "i,j", "i", "v1", a), 0.0);
        }
    }
    outcome(bad, "all cells at the first decision node match".into())
}

fn table4() -> Outcome {
    let t = fig3();
    let i = Group::parse(&t, &["i"]).unwrap();
    let want = [0.0, 0.9, 0.9, 0.99, 0.99, 1.0];
    let mut bad = Vec::new();
    for r in [ContributionFunction::Risk, ContributionFunction::Negl] {
        let tab = responsibility_table(&t, i, &r, &Aggregator::MProd, &Limits::default()).unwrap();
        let got: Vec<f64> = tab.iter().map(|(_, x)| *x).collect();
        if got.len() != want.len() || got.iter().zip(want).any(|(x, y)| (x - y).abs() > VALUE_TOL) {
            bad.push(format!("mprod∘{}: {got:?}", r.name()));
        }
    }
    outcome(bad, "(0, 0.9, 0.9, 0.99, 0.99, 1) for risk and negl".into())
}

fn table2() -> Outcome {
    let l = Limits::default();
    let f = fig2();
    let mut bad = Vec::new();
    let mut notes = Vec::new();
    for r in &FUNCTIONS {
        let reports = check_member_suite(&f, r, Group::parse(&f, &["j"]).unwrap(), &l).unwrap();
        for axiom in AxiomId::MEMBER {
            if claimed_member(r.name(), axiom) == Some(false)
                && !reports.iter().any(|x| x.axiom == axiom && x.is_violated())
            {
                bad.push(format!("{}/{axiom} not witnessed on fig2", r.name()));
            }
        }
        let cfg = FuzzConfig::default().with_count(FUZZ_TREES);
        let rep = fuzz(&cfg, &FuzzSubject::new(r.clone(), Aggregator::MProd, Suite::Member), &l).unwrap();
        for axiom in AxiomId::MEMBER {
            if claimed_member(r.name(), axiom) == Some(true) {
                let x = rep.report(axiom).unwrap();
                if x.is_violated() {
                    bad.push(format!("{}/{axiom} refuted: {}", r.name(), x.summary()));
                }
            }
        }
        notes.push(format!("{}: {} trees, {} clamped", r.name(), rep.trees, rep.clamped_values));
    }
    outcome(bad, format!("× cells witnessed on fig2; ✓ cells hold ({})", notes.join(", ")))
}

fn table3() -> Outcome {
    let cfg = SampleConfig::default();
    let mut bad = Vec::new();
    for agg in Aggregator::BUILTIN {
        for axiom in AxiomId::AGGREGATION {
            let r = check_agg_axiom(&agg, axiom, &cfg);
            let claimed = claimed_aggregation(agg.name(), axiom).unwrap();
            if claimed == r.is_violated() {
                bad.push(format!("{}/{axiom}: claimed {}, observed {}", agg.name(), mark(claimed), mark(!r.is_violated())));
            }
            if let Some(w) = &r.witness {
                if !witness_violates(&agg, axiom, w, cfg.eps) {
                    bad.push(format!("{}/{axiom}: witness does not re-check", agg.name()));
                }
            }
        }
    }
    let documented = [
        (Aggregator::Sum, AxiomId::An1, vec![vec![1.0, 1.0]]),
        (Aggregator::Avg, AxiomId::BsmPlus, vec![vec![0.9], vec![0.9, 0.1]]),
        (Aggregator::Max, AxiomId::BsmGt, vec![vec![0.5, 0.8], vec![0.6, 0.8]]),
        (Aggregator::MProd, AxiomId::Sip, vec![vec![0.9], vec![0.9, 0.9]]),
    ];
    for (agg, axiom, want) in documented {
        match check_agg_axiom(&agg, axiom, &cfg).witness {
            Some(Witness::Vectors { vectors, .. }) if vectors == want => {}
            other => bad.push(format!("{}/{axiom}: witness {other:?}", agg.name())),
        }
    }
    outcome(bad, format!("36 cells over {} vectors, documented witnesses found", cfg.samples))
}

fn mark(b: bool) -> &'static str {
    if b {
        "✓"
    } else {
        "×"
    }
}

fn impossibility() -> Outcome {
    let l = Limits::default();
    let f = fig2();
    let mut bad = Vec::new();
    for r in &FUNCTIONS {
        let mut failed = false;
        for grp in Group::nonempty_subsets(&f).unwrap() {
            for rep in check_member_suite(&f, r, grp, &l).unwrap() {
                failed |= matches!(rep.axiom, AxiomId::KSym | AxiomId::Amc | AxiomId::Fmc) && rep.is_violated();
            }
        }
        if !failed {
            bad.push(format!("{} passes KSym, AMC and FMC on fig2", r.name()));
        }
    }
    let risk = Composite::new(ContributionFunction::Risk, Aggregator::MProd);
    match check_nur(&f, &risk, &l).unwrap().witness {
        Some(Witness::Outcome { groups, .. }) if groups.contains(&vec!["j".to_string()]) => {}
        other => bad.push(format!("mprod∘risk NUR on fig2: {other:?}")),
    }
    let negl = Composite::new(ContributionFunction::Negl, Aggregator::MProd);
    let reductions = check_nrv_reductions(&fig4(), &negl, false, &l).unwrap();
    if reductions.len() != 2 || reductions.iter().any(|(_, r)| !r.is_violated()) {
        bad.push(format!(
            "mprod∘negl NRV on fig4 reductions: {:?}",
            reductions.iter().map(|(x, r)| (x.clone(), r.is_violated())).collect::<Vec<_>>()
        ));
    }
    outcome(bad, "fig2 defeats every function; NUR group {j}; both fig4 reductions void".into())
}

fn compliance() -> Outcome {
    let l = Limits::default();
    let mut bad = Vec::new();
    let mut notes = Vec::new();
    for r in &FUNCTIONS {
        let c = Composite::new(r.clone(), Aggregator::MProd);
        let mut violated: Vec<(AxiomId, String)> = Vec::new();
        for (name, t) in common::builtins() {
            let reports = [
                check_cc(&t, &c, &l).unwrap(),
                check_nur(&t, &c, &l).unwrap(),
                check_nrv(&t, &c, false, &l).unwrap(),
                check_nrv(&t, &c, true, &l).unwrap(),
            ];
            for rep in reports.iter().filter(|x| x.is_violated()) {
                violated.push((rep.axiom, name.to_string()));
            }
        }
        let cfg = FuzzConfig::uncertainty_free().with_count(OUTCOME_FUZZ_TREES);
        let rep = fuzz(&cfg, &FuzzSubject::new(r.clone(), Aggregator::MProd, Suite::Outcome), &l).unwrap();
        for axiom in AxiomId::OUTCOME {
            let n = rep.violating_trees.get(axiom.label()).copied().unwrap_or(0);
            if n > 0 {
                violated.push((axiom, format!("{n} fuzzed trees")));
            }
        }
        for axiom in AxiomId::OUTCOME {
            let seen: Vec<&str> = violated.iter().filter(|(a, _)| *a == axiom).map(|(_, w)| w.as_str()).collect();
            match claimed_outcome(r.name(), axiom).unwrap() {
                true if !seen.is_empty() => bad.push(format!("mprod∘{}/{axiom} violated on {}", r.name(), seen.join(", "))),
                false if seen.is_empty() => bad.push(format!("mprod∘{}/{axiom} never violated", r.name())),
                _ => {}
            }
        }
        notes.push(format!("{}: {} trees", r.name(), rep.trees));
    }
    outcome(bad, format!("matrix reproduced ({})", notes.join(", ")))
}

/// 1 − Π(1 − x) computed through logarithms and in reverse order.
fn disguised(xs: &[f64]) -> f64 {
    if xs.iter().any(|&x| x >= 1.0) {
        return 1.0;
    }
    let s: f64 = xs.iter().rev().map(|&x| (-x).ln_1p()).sum();
    -s.exp_m1()
}

fn characterisation() -> Outcome {
    let cfg = SampleConfig::default();
    let battery = [AxiomId::Lin, AxiomId::Aat, AxiomId::Ne0, AxiomId::An1];
    let mut bad = Vec::new();
    let failing = |agg: &Aggregator| -> Vec<AxiomId> {
        battery
            .iter()
            .copied()
            .filter(|&a| check_agg_axiom(agg, a, &cfg).is_violated())
            .collect()
    };
    let other = Aggregator::external("disguised", true, disguised);
    for agg in [Aggregator::MProd, other.clone()] {
        let f = failing(&agg);
        if !f.is_empty() {
            bad.push(format!("{} fails {f:?}", agg.name()));
        }
    }
    let expected = [
        (Aggregator::Sum, vec![AxiomId::An1]),
        (Aggregator::Avg, vec![AxiomId::An1, AxiomId::Ne0]),
        (Aggregator::Max, vec![AxiomId::Lin, AxiomId::Ne0]),
    ];
    for (agg, want) in expected {
        let f = failing(&agg);
        for a in want {
            if !f.contains(&a) {
                bad.push(format!("{} passes {a}", agg.name()));
            }
        }
    }
    let worst = sample_vectors(&cfg)
        .iter()
        .map(|x| (other.eval_raw(x) - agg_mprod(x)).abs())
        .fold(0.0, f64::max);
    if worst > CHARACTERISATION_TOL {
        bad.push(format!("disguised differs by {worst:e}"));
    }
    outcome(bad, format!("battery separates mprod; disguised agrees within {worst:.1e}"))
}

/// Recursive likelihood against path enumeration for every group, start
/// node, strategy and scenario; starts with more than `cap` (σ, ζ) pairs are
/// skipped.
fn check_likelihoods(t: &DecisionTree, cap: u64, bad: &mut Vec<String>, label: &str) -> (u64, u64) {
    let (mut pairs, mut skipped) = (0, 0);
    let eps = t.undesirable();
    for grp in Group::nonempty_subsets(t).unwrap() {
        for start in t.nodes() {
            let n_sigma = strategy_count(t, grp, start).max(1);
            let (sigmas, zetas) = match (
                enumerate_strategies(t, grp, start, cap),
                enumerate_scenarios_at(t, grp, start, (cap as u128 / n_sigma) as u64),
            ) {
                (Ok(s), Ok(z)) => (s, z),
                (Err(EvalError::ExplosionGuard { .. }), _) | (_, Err(EvalError::ExplosionGuard { .. })) => {
                    skipped += 1;
                    continue;
                }
                (Err(e), _) | (_, Err(e)) => panic!("{e}"),
            };
            let leaves = t.outcomes();
            for (n, (zeta, sigma)) in zetas.iter().flat_map(|z| sigmas.iter().map(move |s| (z, s))).enumerate() {
                let rec = likelihood(t, grp, start, sigma, zeta, &eps).unwrap();
                let oracle = common::path_likelihood(t, grp, start, sigma, zeta, &eps);
                if (rec - oracle).abs() > LIKELIHOOD_TOL && bad.len() < 5 {
                    bad.push(format!("{label} at {}: {rec} vs {oracle}", t.id(start)));
                }
                // the full leaf distribution on the first pair, total mass on all
                let total: f64 = if n == 0 {
                    leaves
                        .iter()
                        .map(|&w| likelihood(t, grp, start, sigma, zeta, &[w]).unwrap())
                        .sum()
                } else {
                    likelihood(t, grp, start, sigma, zeta, &leaves).unwrap()
                };
                if (total - 1.0).abs() > LIKELIHOOD_TOL && bad.len() < 5 {
                    bad.push(format!("{label} at {}: leaf mass {total}", t.id(start)));
                }
                pairs += 1;
            }
        }
    }
    (pairs, skipped)
}

fn likelihood_oracle() -> Outcome {
    let mut bad = Vec::new();
    let (mut pairs, mut skipped) = (0, 0);
    for (name, t) in common::builtins() {
        let (p, s) = check_likelihoods(&t, BUILTIN_ORACLE_CAP, &mut bad, name);
        assert_eq!(s, 0);
        pairs += p;
        skipped += s;
    }
    let trees = common::fuzzed(&FuzzConfig::default(), FuzzConfig::default().seed, FUZZ_TREES);
    let mut complete = 0;
    for (k, t) in trees.iter().enumerate() {
        let (p, s) = check_likelihoods(t, ORACLE_CAP, &mut bad, &format!("tree #{k}"));
        complete += usize::from(s == 0);
        pairs += p;
        skipped += s;
    }
    outcome(
        bad,
        format!(
            "{pairs} (σ, ζ) pairs agree; {complete}/{FUZZ_TREES} fuzzed trees fully covered, \
             {skipped} (group, node) starts above the {ORACLE_CAP} cap skipped"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, Option<Duration>, fn() -> Outcome); 8] = [
        ("1 contribution table", "tol 1e-9", Some(Duration::from_secs(1)), table1),
        ("2 repeated-action responsibility", "tol 1e-9", None, table4),
        ("3 member-axiom matrix", "1000 fuzzed trees, depth 4", Some(Duration::from_secs(60)), table2),
        ("4 aggregation-axiom matrix", "10000 vectors, dims 1..6, eps 1e-9", Some(Duration::from_secs(30)), table3),
        ("5 impossibility witnesses", "exact", None, impossibility),
        ("6 outcome compliance matrix", "built-ins + 200 uncertainty-free trees", Some(Duration::from_secs(120)), compliance),
        ("7 characterisation battery", "tol 1e-9", None, characterisation),
        ("8 likelihood oracle", "tol 1e-12", None, likelihood_oracle),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (name, tol, budget, f) in criteria {
        let start = Instant::now();
        let mut o = f();
        let took = start.elapsed();
        if let Some(b) = budget {
            if took > b {
                o.ok = false;
                o.detail = format!("{} (over the {:?} budget)", o.detail, b);
            }
        }
        let status = if o.ok { "PASS" } else { "FAIL" };
        println!("{status} criterion {name} [{tol}] ({:.2}s): {}", took.as_secs_f64(), o.detail);
        failed += usize::from(!o.ok);
    }
    println!("{} of 8 criteria passed in {:.1}s", 8 - failed, total.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

