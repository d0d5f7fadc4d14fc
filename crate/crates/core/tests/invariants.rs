use std::sync::OnceLock;

use num_bigint::BigInt;
use proptest::prelude::*;

use maxdet::border::{run_trial, SearchConfig};
use maxdet::bounds::evaluate_bounds;
use maxdet::construct::{Base, Method, Recipe};
use maxdet::det::det_exact_i64;
use maxdet::sieve::{build_order_set, resolve, OrderSet, Rule, RuleSet, SMALL_ORDER_EXCEPTIONS};

fn full_set() -> &'static OrderSet {
    static SET: OnceLock<OrderSet> = OnceLock::new();
    SET.get_or_init(|| build_order_set(65536, RuleSet::all()).unwrap())
}

fn rule_subset(mask: u16) -> RuleSet {
    let rules: Vec<Rule> = Rule::ALL.iter().copied().filter(|r| mask >> (r.id() - 1) & 1 == 1).collect();
    RuleSet::of(&rules)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn adding_rules_never_removes_orders(a in 0u16..1 << 12, extra in 0u16..1 << 12) {
        let small = build_order_set(6000, rule_subset(a)).unwrap();
        let large = build_order_set(6000, rule_subset(a | extra)).unwrap();
        prop_assert!(small.members().all(|h| large.contains(h)));
    }

    #[test]
    fn schur_identity_on_random_borders(
        core in prop::sample::select(vec![
            Recipe::plan_hadamard(8, Method::Auto).unwrap(),
            Recipe::plan_hadamard(20, Method::Auto).unwrap(),
            Recipe::plan_hadamard(32, Method::Auto).unwrap(),
            Recipe::base(Base::Conference(13)),
            Recipe::base(Base::Conference(29)),
        ]),
        d in 1usize..=6,
        seed in any::<u64>(),
        index in 0u64..64,
    ) {
        let q = core.build().unwrap();
        let config = SearchConfig { master_seed: seed, ..SearchConfig::default() };
        let r = run_trial(&q, d, &config, index);
        let direct = det_exact_i64(&r.border.assemble(&q)).unwrap();
        let k = BigInt::from(q.weight());
        prop_assert_eq!(
            &direct * &direct * k.pow(2 * d as u32),
            k.pow(q.order() as u32) * &r.det_n * &r.det_n
        );
    }
}

proptest! {
    #[test]
    fn resolver_is_monotone(n in 1u64..65000) {
        let set = full_set();
        let a = resolve(n, set).unwrap();
        let b = resolve(n + 4, set).unwrap();
        prop_assert!(set.contains(a.h));
        prop_assert_eq!(a.h + a.d, n);
        prop_assert!(b.h >= a.h);
    }

    #[test]
    fn normalized_bounds_lie_in_the_unit_interval(h in (1u64..20000).prop_map(|x| 4 * x), d in 0u64..40) {
        let report = evaluate_bounds(h + d, h, d).unwrap();
        for e in &report.entries {
            if let Some(v) = e.normalized_log {
                prop_assert!(v <= 1e-12 && v.is_finite(), "{} = {}", e.name, v);
            }
        }
        let value = |name: &str| report.entry(name).and_then(|e| e.normalized_log);
        if let (Some(small), Some(uniform)) = (value("small_d_normalized"), value("uniform")) {
            prop_assert!(uniform < small);
        }
        if let (Some(t2), Some(t1)) = (value("log_condition_normalized"), value("large_h_normalized")) {
            prop_assert!(t2 < t1);
        }
    }
}

#[test]
fn without_the_small_order_table_members_are_multiples_of_four() {
    let set = build_order_set(4096, RuleSet::all().without(Rule::SmallOrders)).unwrap();
    for h in set.members().filter(|&h| (4..=2056).contains(&h)) {
        assert_eq!(h % 4, 0, "{h}");
        assert!(!SMALL_ORDER_EXCEPTIONS.contains(&h), "{h}");
    }
}
