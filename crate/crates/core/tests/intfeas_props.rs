use bnint::intfeas::{eliminate_sufficient, integer_in_interval, BoundSystem, Presented};
use bnint::Rational;
use proptest::prelude::*;

fn bound() -> impl Strategy<Value = Presented> {
    (-80i64..80, 1i64..=12).prop_map(|(n, d)| Presented::new(n, d))
}

fn system() -> impl Strategy<Value = BoundSystem> {
    (
        prop::collection::vec(bound(), 0..4),
        prop::collection::vec(bound(), 0..4),
    )
        .prop_map(|(l, u)| BoundSystem::new(l, u))
}

fn satisfies(s: &BoundSystem, n: i64) -> bool {
    let n = Rational::from_integer(n);
    s.lowers.iter().all(|l| l.value() <= n) && s.uppers.iter().all(|u| u.value() >= n)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 5000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn sufficient_implies_integer(s in system()) {
        if eliminate_sufficient(&s) {
            let n = integer_in_interval(&s);
            prop_assert!(n.is_some());
            prop_assert!(satisfies(&s, n.unwrap()));
        }
    }

    #[test]
    fn matches_scan(s in system()) {
        let scan: Vec<i64> = (-10_000..=10_000).filter(|&n| satisfies(&s, n)).collect();
        let got = integer_in_interval(&s);
        match (s.lowers.is_empty(), s.uppers.is_empty()) {
            (false, _) => prop_assert_eq!(got, scan.first().copied()),
            (true, false) => prop_assert_eq!(got, scan.last().copied()),
            (true, true) => prop_assert_eq!(got, Some(0)),
        }
    }
}

#[test]
fn criterion_is_not_necessary() {
    // an integer fits, yet the presented bounds fail the criterion
    let s = BoundSystem::new(vec![Presented::new(5, 6)], vec![Presented::new(7, 6)]);
    assert_eq!(integer_in_interval(&s), Some(1));
    assert!(!eliminate_sufficient(&s));
}
