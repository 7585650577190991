mod common;

use proptest::prelude::*;
use tritail::bounds::{
    binomial_coefficient_bound, binomial_tail_bound, concentration_bound, degree_tail_bound, matching_tail_bound,
    rate_function, sharp_bound, weak_bound, BoundParams,
};

#[test]
fn sharp_never_exceeds_weak_on_grid() {
    let mut checked = 0;
    for i in 0..10 {
        for j in 0..10 {
            for k in 0..10 {
                let lambda = 0.1 * 1.9f64.powi(i);
                let t = lambda * (1.0 + 0.7 * j as f64);
                let a = 0.25 * 1.6f64.powi(k);
                let bp = BoundParams::new(t, lambda, a).unwrap();
                let (s, w) = concentration_bound(bp).unwrap();
                assert!(s.log_bound <= w.log_bound + 1e-12 * w.log_bound.abs(), "{bp:?}");
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 1000);
}

#[test]
fn binomial_coefficient_sweep() {
    for a in 2..=40u64 {
        for b in 1..a {
            let exact = common::choose(a, b) as f64;
            assert!(binomial_coefficient_bound(a, b).unwrap() >= exact, "a={a} b={b}");
        }
    }
}

#[test]
fn binomial_tail_beats_exact_sum() {
    // Bin(100, 0.01) at 10.
    let exact: f64 = common::binomial_pmf(100, 0.01)[10..].iter().sum();
    let b = binomial_tail_bound(10.0, 1.0).unwrap();
    assert!((b.prob_bound - (-10.0 * (10.0f64 / 3.0).ln()).exp()).abs() < 1e-18);
    assert!(b.prob_bound >= exact);
}

#[test]
fn documented_values() {
    assert_eq!(matching_tail_bound(1.5, 1, 8, 0.25).unwrap().prob_bound, 1.0);
    let m = matching_tail_bound(12.0, 1, 8, 0.25).unwrap().prob_bound;
    assert!((m - 8f64.powi(-4)).abs() < 1e-15);
    let d = degree_tail_bound(24.0, 10, 1, 0.1).unwrap().prob_bound;
    assert!((d - 4f64.powi(-12)).abs() < 1e-20);
    assert_eq!(degree_tail_bound(6.0, 10, 1, 0.1).unwrap().prob_bound, 1.0);
}

proptest! {
    #[test]
    fn bounds_are_probabilities(t in 1e-3f64..1e4, lambda in 1e-3f64..1e3, a in 1e-2f64..1e2) {
        let bp = BoundParams::new(t, lambda, a).unwrap();
        for b in [sharp_bound(bp), weak_bound(bp)] {
            prop_assert!((0.0..=1.0).contains(&b.prob_bound));
            prop_assert_eq!(b.trivial, b.prob_bound >= 1.0 || (t < lambda && b.form == tritail::bounds::BoundForm::Sharp));
        }
    }

    #[test]
    fn rate_function_is_nonnegative(x in 1e-6f64..0.999_999, p in 1e-6f64..0.999_999) {
        let v = rate_function(x, p).unwrap();
        prop_assert!(v >= -1e-12);
        if (x - p).abs() > 1e-3 {
            prop_assert!(v > 0.0);
        }
    }
}

#[test]
fn rate_function_vanishes_at_p() {
    for p in [0.01, 0.1, 0.5, 0.9] {
        assert!(rate_function(p, p).unwrap().abs() < 1e-12);
    }
}
