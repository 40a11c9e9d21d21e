use proptest::prelude::*;

use ringload_core::adversary::catalog::builtin_instances;
use ringload_core::adversary::search::objective;
use ringload_core::adversary::{build_milp, max_feasible_objective};
use ringload_core::boost::boost;
use ringload_core::exact::{
    min_additive_performance, min_additive_performance_naive, optimal_unsplittable, optimal_unsplittable_boosted,
    split_optimum_boosted,
};
use ringload_core::greedy::{backward_greedy, forward_greedy, is_greedy, Direction};
use ringload_core::pattern::Pattern;
use ringload_core::rational::{half, int, rat, Rational};
use ringload_core::routing::CrossingRouting;
use ringload_core::Error;

/// Routings with parts `p/q`, `p <= 12`, `q <= 4`.
fn routing(max_m: usize) -> impl Strategy<Value = CrossingRouting> {
    prop::collection::vec((1i64..=12, 1i64..=12, 1i64..=4), 1..=max_m).prop_map(|parts| {
        let u = parts.iter().map(|(a, _, q)| rat(*a, *q)).collect();
        let v = parts.iter().map(|(_, b, q)| rat(*b, *q)).collect();
        CrossingRouting::new(u, v).unwrap()
    })
}

fn start() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=6).prop_map(|(p, q)| rat(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn performance_is_the_largest_delta(r in routing(10), mask in any::<u64>(), x in start()) {
        let p = Pattern::from_mask(&r, mask, x);
        let delta = p.delta();
        prop_assert_eq!(p.additive_performance(), delta.max_abs());
        let m = r.m();
        for k in 0..m {
            prop_assert_eq!(&delta.0[k], &-delta.0[k + m].clone());
        }
    }

    #[test]
    fn delta_matches_recomputed_loads(r in routing(10), mask in any::<u64>()) {
        let p = Pattern::from_mask(&r, mask, int(0));
        let lifted = r.split_loads().apply(&p.delta());
        prop_assert_eq!(lifted, r.unsplittable_loads(p.clockwise()));
    }

    #[test]
    fn translation_invariance(r in routing(10), mask in any::<u64>(), x in start(), y in start()) {
        let p = Pattern::from_mask(&r, mask, x);
        prop_assert_eq!(p.performance_is_start_invariant(y), p.additive_performance());
    }

    #[test]
    fn greedy_stays_in_the_strip(r in routing(12), t in 0i64..=8) {
        let big_d = r.max_demand();
        let x = &big_d * rat(t, 8);
        let f = forward_greedy(&r, x.clone()).unwrap();
        let b = backward_greedy(&r, x).unwrap();
        for p in [&f, &b] {
            prop_assert!(p.points().iter().all(|z| z >= &int(0) && z <= &big_d));
        }
        prop_assert!(is_greedy(&f, Direction::Forward));
        prop_assert!(is_greedy(&b, Direction::Backward));
    }

    #[test]
    fn forward_greedy_from_the_middle_is_within_three_halves(r in routing(12)) {
        let big_d = r.max_demand();
        let p = forward_greedy(&r, half(&big_d)).unwrap();
        prop_assert!(p.additive_performance() <= rat(3, 2) * big_d);
    }

    #[test]
    fn greedy_is_deterministic(r in routing(12)) {
        let x = half(&r.max_demand());
        let a = forward_greedy(&r, x.clone()).unwrap().clockwise().to_vec();
        let b = forward_greedy(&r.clone(), x).unwrap().clockwise().to_vec();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn backward_greedy_mirrors_forward_on_the_reflection(r in routing(10), t in 0i64..=8) {
        // reflecting the strip and reversing the demand order turns a backward
        // run ending at y into a forward run starting at D - y
        let big_d = r.max_demand();
        let y = &big_d * rat(t, 8);
        let b = backward_greedy(&r, y.clone()).unwrap();
        let mirror = r.reversed();
        let f = forward_greedy(&mirror, &big_d - &y).unwrap();
        prop_assert_eq!(b.additive_performance(), f.additive_performance());
        let m = r.m();
        for (k, z) in b.points().iter().enumerate() {
            prop_assert_eq!(&(&big_d - z), f.point(m - k));
        }
    }

    #[test]
    fn exact_matches_naive_in_both_orders(r in routing(10)) {
        let (fast, witness) = min_additive_performance(&r).unwrap();
        prop_assert_eq!(witness.additive_performance(), fast.clone());
        for descending in [false, true] {
            prop_assert_eq!(min_additive_performance_naive(&r, descending).0, fast.clone());
        }
    }

    #[test]
    fn exact_is_within_the_greedy_bound(r in routing(10)) {
        let (opt, _) = min_additive_performance(&r).unwrap();
        prop_assert!(opt <= rat(3, 2) * r.max_demand());
        prop_assert!(opt >= int(0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fixing_shorts_loses_nothing(r in prop::collection::vec((1i64..=4, 1i64..=4), 1..=3)) {
        let u: Vec<i64> = r.iter().map(|p| p.0).collect();
        let v: Vec<i64> = r.iter().map(|p| p.1).collect();
        let r = CrossingRouting::from_integers(&u, &v).unwrap();
        let b = boost(&r);
        let (fixed, _) = optimal_unsplittable_boosted(&b, 24).unwrap();
        match optimal_unsplittable(&b.instance, 22) {
            Ok((full, _)) => prop_assert_eq!(full, fixed),
            Err(Error::TooLarge { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn boost_gap_is_at_least_the_optimum(r in routing(5)) {
        let b = boost(&r);
        let (alpha_d, _) = min_additive_performance(&r).unwrap();
        let l_star = split_optimum_boosted(&b).unwrap();
        let (l, _) = optimal_unsplittable_boosted(&b, 24).unwrap();
        prop_assert!(l - l_star >= alpha_d);
        let big_d = r.max_demand();
        prop_assert!(b.instance.demands().iter().all(|d| d.value > int(0) && d.value <= big_d));
    }

    #[test]
    fn reduced_and_full_models_agree(parts in prop::collection::vec((1i64..=6, 1i64..=6), 2..=3)) {
        let u: Vec<i64> = parts.iter().map(|p| p.0).collect();
        let v: Vec<i64> = parts.iter().map(|p| p.1).collect();
        let r = CrossingRouting::from_integers(&u, &v).unwrap();
        let m = r.m();
        let full = max_feasible_objective(&build_milp(m, false, false).unwrap(), &r);
        let reduced = max_feasible_objective(&build_milp(m, true, false).unwrap(), &r);
        prop_assert_eq!(&full, &reduced);
        prop_assert_eq!(full, Some(objective(&r).unwrap()));
    }
}

#[test]
fn boost_gap_equals_the_optimum_on_builtins() {
    for (name, r) in builtin_instances() {
        let b = boost(&r);
        let (alpha_d, _) = min_additive_performance(&r).unwrap();
        let l_star = split_optimum_boosted(&b).unwrap();
        let (l, _) = optimal_unsplittable_boosted(&b, 24).unwrap();
        assert_eq!(l - l_star, alpha_d, "{name}");
    }
}
