use std::collections::BTreeSet;

use bnint::certificate::ExtraAxiom;
use bnint::prover::{enumerate_sporadic_range, AcceptMode};
use bnint::rules::apply;
use bnint::tuple::good;
use bnint::{
    run_sporadic_search, verify_certificate, verify_thm14, AxiomSet, AxiomTag, CertError,
    Certificate, Justification, ProveError, Prover, RuleId, SearchConfig, Tuple, SPORADIC30,
};
use proptest::prelude::*;
use rayon::prelude::*;

fn t(d: i64, g: i64, r: i64, l: i64, m: i64) -> Tuple {
    Tuple::new(d, g, r, l, m)
}

fn good_tuples(r_max: i64, d_max: i64) -> Vec<Tuple> {
    let mut out = Vec::new();
    for r in 1..=r_max {
        for d in 1..=d_max {
            for g in 0..=d - r {
                for ell in 0..=r / 2 {
                    for m in 0..=bnint::rho(d, g, r) {
                        let x = t(d, g, r, ell, m);
                        if good(&x) {
                            out.push(x);
                        }
                    }
                }
            }
        }
    }
    out
}

fn irreducible(cfg: SearchConfig) -> BTreeSet<Tuple> {
    run_sporadic_search(cfg).irreducible.into_iter().collect()
}

#[test]
fn reproduces_the_table() {
    let report = run_sporadic_search(SearchConfig::default());
    let got: BTreeSet<Tuple> = report.irreducible.iter().copied().collect();
    assert_eq!(got, SPORADIC30.iter().copied().collect());
    assert_eq!(report.examined, report.rows.len());
    for x in SPORADIC30 {
        assert!(
            report
                .rows
                .iter()
                .any(|row| row.tuple == x && !row.reducible),
            "{x}"
        );
    }
    for x in [t(4, 0, 3, 0, 1), t(9, 2, 5, 0, 0), t(11, 4, 7, 1, 0)] {
        assert!(got.contains(&x));
    }
}

#[test]
fn witnesses_replay() {
    let report = run_sporadic_search(SearchConfig::default());
    for row in report.rows.iter().filter(|r| r.reducible) {
        let w = row.witness.as_ref().unwrap();
        assert_eq!(apply(w.rule, &row.tuple, &w.params).unwrap(), w.subgoals);
        assert!(w
            .subgoals
            .iter()
            .all(|s| good(s) || AxiomSet::default().contains(s)));
    }
}

#[test]
fn reports_are_deterministic() {
    let a = serde_json::to_string(&run_sporadic_search(SearchConfig::default())).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap();
    let b = pool
        .install(|| serde_json::to_string(&run_sporadic_search(SearchConfig::default())).unwrap());
    assert_eq!(a, b);
}

#[test]
fn strict_roles_give_the_same_table() {
    let cfg = SearchConfig {
        role_mode: bnint::RoleMode::Strict,
        ..SearchConfig::default()
    };
    assert_eq!(irreducible(cfg), SPORADIC30.iter().copied().collect());
}

#[test]
fn recursive_acceptance_gives_the_same_table() {
    let cfg = SearchConfig {
        accept: AcceptMode::Recursive,
        ..SearchConfig::default()
    };
    assert_eq!(irreducible(cfg), SPORADIC30.iter().copied().collect());
}

#[test]
fn extra_axiom_unlocks_dependent_cases() {
    let extra = ExtraAxiom {
        tuple: t(6, 1, 5, 3, 0),
        citation: "assumed".into(),
    };
    let cfg = SearchConfig {
        axioms: AxiomSet::default().with_extra([extra]),
        ..SearchConfig::default()
    };
    let got = irreducible(cfg);
    let base: BTreeSet<Tuple> = SPORADIC30.iter().copied().collect();
    let freed: BTreeSet<Tuple> = base.difference(&got).copied().collect();
    assert_eq!(
        freed,
        [t(7, 1, 6, 2, 1), t(7, 1, 6, 3, 1), t(8, 2, 6, 2, 0)]
            .into_iter()
            .collect()
    );
    assert!(got.is_subset(&base));
}

#[test]
fn removing_the_erasable_master_breaks_reproduction() {
    let got = irreducible(SearchConfig::default().without_rule(RuleId::MasterErasable));
    assert!(got.len() > 30);
    assert!(got.is_superset(&SPORADIC30.iter().copied().collect()));
}

#[test]
fn smaller_rank_range() {
    let cfg = SearchConfig {
        r_max: 5,
        ..SearchConfig::default()
    };
    let got = irreducible(cfg);
    let want: BTreeSet<Tuple> = SPORADIC30.iter().copied().filter(|x| x.r <= 5).collect();
    assert_eq!(got, want);
}

#[test]
fn sporadic_region_is_closed_under_goodness() {
    for x in enumerate_sporadic_range(3, 13) {
        assert!(good(&x), "{x}");
        assert!(
            !(x.delta().unwrap() == 1.into() && x.ell == 0 && x.m == 0),
            "{x}"
        );
    }
}

#[test]
fn box_coverage_small() {
    let report = verify_thm14(14, 16);
    assert!(report.violators().is_empty());
    assert_eq!(report.rows.len(), 3);
}

#[test]
fn box_families_reduce() {
    let prover = Prover::new(SearchConfig {
        rules: bnint::prover::basic_rules(),
        ..SearchConfig::default()
    });
    for k in 7..=10 {
        let x = t(3 * k + 1, k, 2 * k, 0, 2 * k - 3);
        let via_master111 = bnint::rules::enumerate_instances(RuleId::Master111, &x, &good)
            .into_iter()
            .any(|i| {
                i.params.ell_prime == Some(0)
                    && i.params.m_prime == Some(2)
                    && i.params.d_prime == Some(x.d)
            });
        assert!(via_master111, "{x}");
        assert!(prover.reduce(&x).is_some());
    }
    for k in 14..=20 {
        let x = t(k + 1, 0, k, 0, 1);
        let insts = bnint::rules::enumerate_instances(RuleId::TwoProj, &x, &good);
        assert!(insts.iter().any(|i| i.params.eps == Some(0)), "{x}");
    }
}

#[test]
fn certify_examples() {
    let prover = Prover::new(SearchConfig::default());
    let c = prover.certify(&t(16, 3, 13, 0, 0)).unwrap();
    assert_eq!(c.nodes.len(), 1);
    assert!(matches!(
        c.nodes[0].justification,
        Justification::Axiom {
            tag: AxiomTag::Delta1Base,
            ..
        }
    ));

    let c = prover.certify(&t(9, 2, 5, 0, 0)).unwrap();
    assert!(matches!(
        c.nodes[0].justification,
        Justification::Axiom {
            tag: AxiomTag::Sporadic30,
            ..
        }
    ));

    assert!(matches!(
        prover.certify(&t(5, 2, 3, 0, 0)),
        Err(ProveError::NotGood(_))
    ));
}

#[test]
fn delta_one_chain_descends_to_base() {
    let prover = Prover::new(SearchConfig::default());
    for g in 1..=5i64 {
        // on 2d + 2g = 3r - 1 with the base at (5g + 1, g, 4g + 1)
        let steps = 4;
        let root = t(5 * g + 1 + 3 * steps, g, 4 * g + 1 + 2 * steps, 0, 0);
        assert_eq!(2 * root.d + 2 * root.g, 3 * root.r - 1);
        let c = prover.certify(&root).unwrap();
        let mut x = root;
        for _ in 0..steps {
            let node = c.node(&x).unwrap();
            let Justification::Rule {
                rule,
                children,
                proviso,
                ..
            } = &node.justification
            else {
                panic!("{x} is not a rule node");
            };
            assert_eq!(*rule, RuleId::Delta1Step);
            assert!(proviso.is_some());
            let next = children[0];
            assert_eq!(next.d - next.g - next.r, x.d - x.g - x.r - 1);
            x = next;
        }
        assert_eq!(x, t(5 * g + 1, g, 4 * g + 1, 0, 0));
        assert!(matches!(
            c.node(&x).unwrap().justification,
            Justification::Axiom {
                tag: AxiomTag::Delta1Base,
                ..
            }
        ));
    }
}

#[test]
fn removing_the_table_leaves_a_gap() {
    let cfg = SearchConfig {
        axioms: AxiomSet::default().without(AxiomTag::Sporadic30),
        ..SearchConfig::default()
    };
    let prover = Prover::new(cfg);
    assert!(matches!(
        prover.certify(&t(9, 2, 5, 0, 0)),
        Err(ProveError::Irreducible(_))
    ));
}

#[test]
fn bounded_certify_refuses_large_roots() {
    let prover = Prover::new(SearchConfig::default());
    let x = t(13, 2, 6, 1, 0);
    assert!(prover.certify_bounded(&x, 6, 13).is_ok());
    assert!(matches!(
        prover.certify_bounded(&x, 5, 13),
        Err(ProveError::BoundsExceeded(_))
    ));
    assert!(matches!(
        prover.certify_bounded(&x, 6, 12),
        Err(ProveError::BoundsExceeded(_))
    ));
}

fn cert_closed(c: &Certificate, axioms: &AxiomSet) {
    let listed: BTreeSet<Tuple> = c.nodes.iter().map(|n| n.tuple).collect();
    for n in &c.nodes {
        match &n.justification {
            Justification::Axiom { .. } => assert!(axioms.contains(&n.tuple)),
            Justification::Rule { children, .. } => {
                assert!(good(&n.tuple), "rule applied to {}", n.tuple);
                for ch in children {
                    assert!(good(ch) || axioms.contains(ch), "{ch}");
                    assert!(listed.contains(ch));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn certificates_round_trip(r in 3i64..=9, extra in 0i64..16, g in 0i64..8, l in 0i64..5, m in 0i64..12) {
        let x = t(g + r + extra, g, r, l, m);
        prop_assume!(good(&x));
        let axioms = AxiomSet::default();
        let prover = Prover::new(SearchConfig::default());
        let c = prover.certify(&x).unwrap();
        prop_assert_eq!(c.root, x);
        prop_assert_eq!(c.nodes[0].tuple, x);
        cert_closed(&c, &axioms);
        let back = Certificate::from_json(&c.to_json()).unwrap();
        prop_assert_eq!(&back, &c);
        let stats = verify_certificate(&back, &axioms).unwrap();
        prop_assert_eq!(stats.nodes, c.nodes.len());
        prop_assert_eq!(stats.rule_nodes + stats.axiom_nodes, stats.nodes);
    }
}

#[test]
fn tampering_is_caught() {
    let prover = Prover::new(SearchConfig::default());
    let c = prover.certify(&t(13, 2, 6, 1, 0)).unwrap();
    let mut bad = c.clone();
    let Justification::Rule { children, .. } = &mut bad.nodes[0].justification else {
        panic!()
    };
    children[0].d += 1;
    assert!(matches!(
        verify_certificate(&bad, &AxiomSet::default()),
        Err(CertError::ChildMismatch { .. })
    ));

    let mut dropped = c.clone();
    dropped.nodes.pop();
    assert!(verify_certificate(&dropped, &AxiomSet::default()).is_err());
}

fn depths(r_max: i64, d_max: i64) -> Vec<(Tuple, usize)> {
    let prover = Prover::new(SearchConfig::default());
    let axioms = AxiomSet::default();
    good_tuples(r_max, d_max)
        .par_iter()
        .map(|x| {
            (
                *x,
                verify_certificate(&prover.certify(x).unwrap(), &axioms)
                    .unwrap()
                    .depth,
            )
        })
        .collect()
}

#[test]
fn depth_bounded_by_r_plus_d_plus_m() {
    for (x, depth) in depths(9, 30) {
        assert!(depth as i64 <= x.r + x.d + x.m, "{x} has depth {depth}");
    }
}

#[test]
fn long_pancake_chain_exceeds_r_plus_d() {
    let x = t(30, 0, 3, 1, 108);
    let c = Prover::new(SearchConfig::default()).certify(&x).unwrap();
    let depth = verify_certificate(&c, &AxiomSet::default()).unwrap().depth;
    assert_eq!(depth, 68);
    assert!(depth as i64 > x.r + x.d);
}

#[test]
#[ignore = "fails: pancake chains lower only m, see long_pancake_chain_exceeds_r_plus_d"]
fn depth_bounded_by_r_plus_d() {
    for (x, depth) in depths(9, 30) {
        assert!(depth as i64 <= x.r + x.d, "{x} has depth {depth}");
    }
}
