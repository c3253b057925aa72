mod common;

use groupresp::axioms::member::{check_member_suite, PremiseScope};
use groupresp::axioms::outcome::check_nrv_reductions;
use groupresp::axioms::*;
use groupresp::builtins::{fig2, fig3, fig4, TreeBuilder};
use groupresp::responsibility::{Composite, FnResponsibility};
use groupresp::{Aggregator, ContributionFunction, DecisionTree, EvalError, Group, Limits, NodeIx};

fn g(t: &DecisionTree, s: &str) -> Group {
    Group::parse_list(t, s).unwrap()
}

fn member_witness(r: &AxiomReport) -> (DecisionTree, Group, Vec<String>, String, Vec<f64>) {
    match r.witness.as_ref().expect("witness") {
        Witness::Member {
            tree,
            group,
            nodes,
            action,
            values,
        } => {
            let t = DecisionTree::validate(tree).unwrap();
            let grp = Group::parse(&t, group).unwrap();
            (t, grp, nodes.clone(), action.clone(), values.clone())
        }
        w => panic!("{w:?}"),
    }
}

#[test]
fn ksym_on_fig2() {
    let t = fig2();
    let l = Limits::default();
    let r = check_ksym(&t, &ContributionFunction::Like, g(&t, "j"), &l).unwrap();
    assert!(r.is_violated());
    let (_, _, nodes, action, values) = member_witness(&r);
    assert_eq!(nodes, ["v2", "v3"]);
    assert_eq!(action, "left");
    assert_eq!(values, [0.0, 1.0]);
    assert!(!check_ksym(&t, &ContributionFunction::Risk, g(&t, "j"), &l).unwrap().is_violated());
}

#[test]
fn ksym_is_vacuous_without_information_sets() {
    let t = fig3();
    let r = check_ksym(&t, &ContributionFunction::Like, g(&t, "i"), &Limits::default()).unwrap();
    assert!(!r.is_violated() && r.is_vacuous());
}

#[test]
fn amc_on_fig2() {
    let t = fig2();
    let l = Limits::default();
    let j = g(&t, "j");
    let r = check_amc(&t, &ContributionFunction::Risk, j, PremiseScope::Strict, &l).unwrap();
    let (_, _, nodes, action, values) = member_witness(&r);
    assert_eq!((nodes[0].as_str(), action.as_str(), values[0]), ("v2", "left", 1.0));
    assert!(!check_amc(&t, &ContributionFunction::Risk, j, PremiseScope::Info, &l)
        .unwrap()
        .is_violated());
}

#[test]
fn amc_holds_on_fig3() {
    // repairing at v5 certainly avoids the failure
    let t = fig3();
    let r = check_amc(&t, &ContributionFunction::Risk, g(&t, "i"), PremiseScope::Strict, &Limits::default()).unwrap();
    assert!(r.instances_checked > 0 && !r.is_violated());
}

#[test]
fn fmc_on_fig2() {
    let t = fig2();
    let l = Limits::default();
    let j = g(&t, "j");
    let r = check_fmc(&t, &ContributionFunction::Negl, j, PremiseScope::Strict, &l).unwrap();
    let (_, _, nodes, action, values) = member_witness(&r);
    assert_eq!((nodes[0].as_str(), action.as_str(), values[0]), ("v2", "right", 0.0));
    assert!(!check_fmc(&t, &ContributionFunction::Risk, j, PremiseScope::Strict, &l)
        .unwrap()
        .is_violated());
}

#[test]
fn fmc_needs_a_choice() {
    let mut b = TreeBuilder::new(&["i"], "v");
    b.decision("v", "i").outcome("w", true).edge("v", "go", "w");
    let t = b.build().unwrap();
    let zero = ContributionFunction::external("zero", |_, _| 0.0);
    let r = check_fmc(&t, &zero, g(&t, "i"), PremiseScope::Strict, &Limits::default()).unwrap();
    assert!(r.is_vacuous() && !r.is_violated());
}

#[test]
fn member_witnesses_recheck() {
    let l = Limits::default();
    let t = fig2();
    for r in [ContributionFunction::Like, ContributionFunction::Risk, ContributionFunction::Negl] {
        let reports = check_member_suite(&t, &r, g(&t, "j"), &l).unwrap();
        let violated: Vec<AxiomId> = reports.iter().filter(|x| x.is_violated()).map(|x| x.axiom).collect();
        // exactly the reference × cell
        let expected: Vec<AxiomId> = AxiomId::MEMBER
            .into_iter()
            .filter(|&a| claimed_member(r.name(), a) == Some(false))
            .collect();
        assert_eq!(violated, expected, "{}", r.name());
        for rep in reports.iter().filter(|x| x.is_violated()) {
            let (wt, wg, ..) = member_witness(rep);
            let again = check_member_suite(&wt, &r, wg, &l).unwrap();
            assert!(again.iter().any(|x| x.axiom == rep.axiom && x.is_violated()));
        }
    }
}

#[test]
fn no_function_passes_ksym_amc_and_fmc_on_fig2() {
    let l = Limits::default();
    let t = fig2();
    for r in [ContributionFunction::Like, ContributionFunction::Risk, ContributionFunction::Negl] {
        let any_violated = Group::nonempty_subsets(&t).unwrap().into_iter().any(|grp| {
            check_member_suite(&t, &r, grp, &l)
                .unwrap()
                .iter()
                .any(|x| matches!(x.axiom, AxiomId::KSym | AxiomId::Amc | AxiomId::Fmc) && x.is_violated())
        });
        assert!(any_violated, "{}", r.name());
    }
}

#[test]
fn cc_examples() {
    let l = Limits::default();
    let t = fig3();
    let r = check_cc(&t, &Composite::new(ContributionFunction::Risk, Aggregator::MProd), &l).unwrap();
    assert!(!r.is_violated());
    assert_eq!(r.instances_checked, 1);

    let mut b = TreeBuilder::new(&["i"], "w");
    b.outcome("w", false);
    let leaf = b.build().unwrap();
    assert!(check_cc(&leaf, &Composite::new(ContributionFunction::Risk, Aggregator::MProd), &l)
        .unwrap()
        .is_vacuous());

    // two safe steps by the same agent
    let mut b = TreeBuilder::new(&["i"], "a");
    b.decision("a", "i")
        .decision("b", "i")
        .outcome("x", true)
        .outcome("y", false)
        .outcome("z", true)
        .edge("a", "stay", "x")
        .edge("a", "go", "b")
        .edge("b", "safe", "y")
        .edge("b", "unsafe", "z");
    let chain = b.build().unwrap();
    for r in [ContributionFunction::Like, ContributionFunction::Risk, ContributionFunction::Negl] {
        let rep = check_cc(&chain, &Composite::new(r.clone(), Aggregator::MProd), &l).unwrap();
        assert_eq!(rep.instances_checked, 1);
        assert!(!rep.is_violated());
        let trace = groupresp::responsibility::contribution_trace(&chain, g(&chain, "i"), chain.ix("y").unwrap(), &r, &l).unwrap();
        assert!(trace.iter().all(|e| e.value.value == 0.0));
    }
    let blame = FnResponsibility {
        name: "blame".into(),
        f: |_: &DecisionTree, _: Group, _: NodeIx| 0.5,
    };
    assert!(check_cc(&chain, &blame, &l).unwrap().is_violated());
}

#[test]
fn nur_examples() {
    let l = Limits::default();
    let t = fig2();
    let r = check_nur(&t, &Composite::new(ContributionFunction::Risk, Aggregator::MProd), &l).unwrap();
    match r.witness.as_ref().unwrap() {
        Witness::Outcome { groups, .. } => assert!(groups.contains(&vec!["j".to_string()])),
        w => panic!("{w:?}"),
    }
    assert!(!check_nur(&t, &Composite::new(ContributionFunction::Negl, Aggregator::MProd), &l)
        .unwrap()
        .is_violated());
    let zero = FnResponsibility {
        name: "zero".into(),
        f: |_: &DecisionTree, _: Group, _: NodeIx| 0.0,
    };
    for (_, t) in common::builtins() {
        assert!(!check_nur(&t, &zero, &l).unwrap().is_violated());
    }
}

#[test]
fn nrv_examples() {
    let l = Limits::default();
    let t = fig2();
    let risk = Composite::new(ContributionFunction::Risk, Aggregator::MProd);
    let negl = Composite::new(ContributionFunction::Negl, Aggregator::MProd);
    let r = check_nrv(&t, &risk, false, &l).unwrap();
    assert!(!r.is_violated() && r.instances_checked == 2);

    let f = fig4();
    let red = check_nrv_reductions(&f, &negl, false, &l).unwrap();
    let labels: Vec<&str> = red.iter().map(|(x, _)| x.as_str()).collect();
    assert_eq!(labels, ["no risk", "cooling"]);
    for (_, rep) in &red {
        assert!(rep.is_violated());
        match rep.witness.as_ref().unwrap() {
            Witness::Outcome { values, .. } => assert!(values.iter().all(|&x| x == 0.0)),
            w => panic!("{w:?}"),
        }
    }
    let whole = check_nrv(&f, &negl, false, &l).unwrap();
    assert!(whole.is_violated());
    match whole.witness.as_ref().unwrap() {
        Witness::Outcome { outcome, reduction, .. } => {
            assert_eq!(outcome.as_deref(), Some("w2"));
            assert_eq!(reduction.as_deref(), Some("no risk"));
        }
        w => panic!("{w:?}"),
    }

    // probability nodes below the root: the premise does not apply
    let r = check_nrv(&fig3(), &negl, false, &l).unwrap();
    assert!(r.is_vacuous() && !r.is_violated());
}

#[test]
fn nrv_vacuous_when_everything_is_bad() {
    let mut b = TreeBuilder::new(&["i"], "v");
    b.decision("v", "i").outcome("a", true).outcome("b", true).edge("v", "x", "a").edge("v", "y", "b");
    let t = b.build().unwrap();
    let negl = Composite::new(ContributionFunction::Negl, Aggregator::MProd);
    assert!(check_nrv(&t, &negl, false, &Limits::default()).unwrap().is_vacuous());
}

#[test]
fn nrv_group_cap() {
    let agents: Vec<String> = (0..13).map(|k| format!("a{k}")).collect();
    let mut b = TreeBuilder::new(&agents, "v");
    b.decision("v", "a0").outcome("x", true).outcome("y", false).edge("v", "l", "x").edge("v", "r", "y");
    let t = b.build().unwrap();
    let risk = Composite::new(ContributionFunction::Risk, Aggregator::MProd);
    assert!(matches!(
        check_nrv(&t, &risk, false, &Limits::default()),
        Err(EvalError::ExplosionGuard { .. })
    ));
    assert!(check_nrv(&t, &risk, true, &Limits::default()).is_ok());
}

#[test]
fn outcome_witnesses_recheck() {
    let l = Limits::default();
    for (_, t) in common::builtins() {
        for r in [ContributionFunction::Like, ContributionFunction::Risk, ContributionFunction::Negl] {
            let c = Composite::new(r, Aggregator::MProd);
            let reports = [
                check_cc(&t, &c, &l).unwrap(),
                check_nur(&t, &c, &l).unwrap(),
                check_nrv(&t, &c, false, &l).unwrap(),
                check_nrv(&t, &c, true, &l).unwrap(),
            ];
            for rep in reports.iter().filter(|x| x.is_violated()) {
                let Some(Witness::Outcome { tree, .. }) = &rep.witness else { panic!() };
                let wt = DecisionTree::validate(tree).unwrap();
                let again = match rep.axiom {
                    AxiomId::Cc => check_cc(&wt, &c, &l),
                    AxiomId::Nur => check_nur(&wt, &c, &l),
                    AxiomId::Nrv => check_nrv(&wt, &c, false, &l),
                    _ => check_nrv(&wt, &c, true, &l),
                }
                .unwrap();
                assert_eq!(again.witness, rep.witness);
            }
        }
    }
}

#[test]
fn fuzz_is_deterministic() {
    let cfg = FuzzConfig::default().with_count(60);
    let s = FuzzSubject::new(ContributionFunction::Negl, Aggregator::MProd, Suite::All);
    let l = Limits::default();
    let a = serde_json::to_string(&fuzz(&cfg, &s, &l).unwrap()).unwrap();
    let b = serde_json::to_string(&fuzz(&cfg, &s, &l).unwrap()).unwrap();
    assert_eq!(a, b);
    let c = serde_json::to_string(&fuzz(&cfg.clone().with_seed(43), &s, &l).unwrap()).unwrap();
    assert_ne!(a, c);
}

#[test]
fn fuzz_rediscovers_ksym_failure_of_like() {
    let l = Limits::default();
    let cfg = FuzzConfig::default().with_count(200);
    let rep = fuzz(&cfg, &FuzzSubject::new(ContributionFunction::Like, Aggregator::MProd, Suite::Member), &l).unwrap();
    let ksym = rep.report(AxiomId::KSym).unwrap();
    assert!(ksym.is_violated());
    let (t, grp, ..) = member_witness(ksym);
    assert!(check_ksym(&t, &ContributionFunction::Like, grp, &l).unwrap().is_violated());

    let rep = fuzz(&cfg, &FuzzSubject::new(ContributionFunction::Risk, Aggregator::MProd, Suite::Member), &l).unwrap();
    assert!(!rep.report(AxiomId::KSym).unwrap().is_violated());
}

#[test]
fn explosion_guard_regenerates() {
    // with a tiny cap most trees are discarded, but the run still completes
    let cfg = FuzzConfig::default().with_count(5);
    let s = FuzzSubject::new(ContributionFunction::Risk, Aggregator::MProd, Suite::Outcome);
    let rep = fuzz(&cfg, &s, &Limits::default().with_cap(2)).unwrap();
    assert_eq!(rep.trees, 5);
    assert!(rep.regenerated > 0);
}
