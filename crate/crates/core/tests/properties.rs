use approx::assert_relative_eq;
use proptest::prelude::*;
use std::f64::consts::E;

use tailbound::bounds::{
    bentkus_bound, corollary1_bound, f_branch, g_branch, hoeffding_exponential,
    solve_corollary_constants, theorem1_finite, theorem1_limit, BoundQuery, Branch,
};
use tailbound::extremal::{binomial_pmf, extremal_for_branch, tail_at_most_one, BinomialSpec};
use tailbound::oracles::{
    l_n, monte_carlo_tail, two_point_tail, BoundedDistSpec, SimplexPoint, TwoPoint, TwoPointSpec,
};

fn finite(lambda: f64, n: u64) -> f64 {
    theorem1_finite(BoundQuery::new(lambda, n).unwrap())
        .unwrap()
        .value
}

/// P(sum <= 1) by walking all 2^n outcomes.
fn enumerate_bernoulli(q: &[f64]) -> f64 {
    (0u32..1 << q.len())
        .filter(|mask| mask.count_ones() <= 1)
        .map(|mask| {
            q.iter()
                .enumerate()
                .map(|(i, p)| if mask >> i & 1 == 1 { *p } else { 1.0 - p })
                .product::<f64>()
        })
        .sum()
}

fn two_point_strategy() -> impl Strategy<Value = TwoPoint> {
    (0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(a, b, p)| {
        TwoPoint::new(a.min(b), a.max(b), p).unwrap()
    })
}

fn dist_strategy() -> impl Strategy<Value = BoundedDistSpec> {
    prop_oneof![
        two_point_strategy().prop_map(|t| BoundedDistSpec::TwoPoint {
            low: t.low,
            high: t.high,
            prob_high: t.prob_high
        }),
        (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(a, b)| BoundedDistSpec::Uniform {
            lo: a.min(b),
            hi: a.max(b)
        }),
        prop::collection::vec((0.0..=1.0f64, 0.01..1.0f64), 1..5).prop_map(|pairs| {
            let total: f64 = pairs.iter().map(|p| p.1).sum();
            let mut probs: Vec<f64> = pairs.iter().map(|p| p.1 / total).collect();
            let head: f64 = probs[..probs.len() - 1].iter().sum();
            *probs.last_mut().unwrap() = 1.0 - head;
            BoundedDistSpec::Discrete {
                points: pairs.iter().map(|p| p.0).collect(),
                probs,
            }
        }),
    ]
}

#[test]
fn finite_bound_never_exceeds_limit_on_grid() {
    for n in 2..=200u64 {
        let steps = (n as f64 / 0.01).round() as u64;
        for i in 0..=steps {
            let lambda = (i as f64 * 0.01).min(n as f64);
            let f = finite(lambda, n);
            let lim = theorem1_limit(lambda).unwrap().value;
            assert!(f <= lim + 1e-12, "n {n}, lambda {lambda}: {f} > {lim}");
        }
    }
}

#[test]
fn bentkus_ratio_is_at_least_e() {
    let mut lambda = E - 1.0;
    while lambda <= 20.0 {
        let n = (2.0 * lambda).ceil() as u64;
        let q = BoundQuery::new(lambda, n).unwrap();
        let simple = bentkus_bound(q, true).unwrap().raw;
        let ratio = simple / theorem1_limit(lambda).unwrap().raw;
        assert!(ratio >= E - 1e-12, "lambda {lambda}: ratio {ratio}");
        lambda += 0.01;
    }
}

#[test]
fn monte_carlo_bernoulli_matches_binomial() {
    let specs = vec![
        BoundedDistSpec::TwoPoint {
            low: 0.0,
            high: 1.0,
            prob_high: 0.5
        };
        4
    ];
    let mc = monte_carlo_tail(&specs, 1_000_000, 42).unwrap();
    assert!((mc.estimate - 0.3125).abs() <= mc.ci_halfwidth);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ln_matches_enumeration(q in prop::collection::vec(0.0..=1.0f64, 1..=12)) {
        let point = SimplexPoint::from_means(q.clone()).unwrap();
        assert_relative_eq!(l_n(&point), enumerate_bernoulli(&q), epsilon = 1e-13);
    }

    #[test]
    fn bernoulli_tail_is_below_envelope(q in prop::collection::vec(0.0..=1.0f64, 1..=12)) {
        let point = SimplexPoint::from_means(q.clone()).unwrap();
        let mean: f64 = q.iter().sum();
        prop_assert!(l_n(&point) <= finite(mean, q.len() as u64) + 1e-12);
    }

    #[test]
    fn two_point_sum_is_below_envelope(summands in prop::collection::vec(two_point_strategy(), 1..=8)) {
        let n = summands.len() as u64;
        let spec = TwoPointSpec::new(summands);
        let mean = tailbound::oracles::two_point_mean(&spec).min(n as f64);
        prop_assert!(two_point_tail(&spec).unwrap() <= finite(mean, n) + 1e-12);
    }

    #[test]
    fn bound_chain(lambda in 0.0..40.0f64) {
        let c = solve_corollary_constants(1e-12).unwrap();
        let limit = theorem1_limit(lambda).unwrap().value;
        let corollary = corollary1_bound(lambda, &c).unwrap().value;
        prop_assert!(limit <= corollary + 1e-12);
        if lambda >= 1.0 {
            prop_assert!(corollary <= hoeffding_exponential(lambda).unwrap() + 1e-12);
        }
    }

    #[test]
    fn envelope_monotone_in_n(lambda in 0.0..30.0f64, n in 1u64..300) {
        let lambda = lambda.min(n as f64);
        prop_assert!(finite(lambda, n) <= finite(lambda, n + 1) + 1e-12);
    }

    #[test]
    fn envelope_monotone_in_lambda(n in 1u64..300, a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let (lo, hi) = (a.min(b) * n as f64, a.max(b) * n as f64);
        prop_assert!(finite(hi, n) <= finite(lo, n) + 1e-12);
    }

    #[test]
    fn extremal_laws_attain_each_term(n in 2u64..60, frac in 0.0..1.0f64) {
        let lambda = 1.0 + frac * (n as f64 - 1.0);
        let q = BoundQuery::new(lambda, n).unwrap();
        let first = extremal_for_branch(q, Branch::FirstMaxTerm).unwrap();
        let second = extremal_for_branch(q, Branch::SecondMaxTerm).unwrap();
        assert_relative_eq!(first.mean(), lambda, epsilon = 1e-12);
        assert_relative_eq!(second.mean(), lambda, epsilon = 1e-12);
        prop_assert!((tail_at_most_one(&first) - f_branch(q)).abs() <= 1e-12);
        prop_assert!((tail_at_most_one(&second) - g_branch(q).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn pmf_sums_to_one(p in 0.0..=1.0f64, trials in 0u64..400, shift in 0u8..=1) {
        let spec = BinomialSpec::new(p, trials, shift).unwrap();
        let total: f64 = (0..=trials as i64 + 1).map(|k| binomial_pmf(&spec, k)).sum();
        prop_assert!((total - 1.0).abs() <= 1e-10, "total {}", total);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn monte_carlo_respects_bound(specs in prop::collection::vec(dist_strategy(), 1..=6), seed in any::<u64>()) {
        let n = specs.len() as u64;
        let mean: f64 = specs.iter().map(BoundedDistSpec::mean).sum::<f64>().min(n as f64);
        let mc = monte_carlo_tail(&specs, 20_000, seed).unwrap();
        prop_assert!(mc.estimate - mc.ci_halfwidth <= finite(mean, n) + 1e-12);
    }

    #[test]
    fn monte_carlo_is_deterministic(specs in prop::collection::vec(dist_strategy(), 1..=4), seed in any::<u64>()) {
        let a = monte_carlo_tail(&specs, 70_000, seed).unwrap();
        let b = monte_carlo_tail(&specs, 70_000, seed).unwrap();
        prop_assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
    }
}
