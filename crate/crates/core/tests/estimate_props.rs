mod common;

use tritail::estimate::{
    clique_planting_lower_bound, clique_tail, exact_tail, plain_mc_tail, tilted_mc_tail, triangle_census,
    DEFAULT_CONFIDENCE,
};
use tritail::graph::{choose3, expected_triangles};

#[test]
fn exact_tail_matches_brute_force() {
    for n in 3..=5 {
        for p in [0.2, 0.5, 0.75] {
            for t in 0..=choose3(n) {
                let a = exact_tail(n, p, t as f64).unwrap().p_hat;
                let b = common::exact_tail(n, p, t as f64);
                assert!((a - b).abs() < 1e-13, "n={n} p={p} t={t}");
            }
        }
    }
}

#[test]
fn exact_tail_is_monotone() {
    for n in 3..=6 {
        let census = triangle_census(n).unwrap();
        let ps = [0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 0.95];
        for t in 0..=choose3(n) + 1 {
            let t = t as f64;
            for w in ps.windows(2) {
                assert!(census.tail(w[0], t) <= census.tail(w[1], t) + 1e-12, "n={n} t={t}");
            }
            for &p in &ps {
                assert!(census.tail(p, t + 1.0) <= census.tail(p, t) + 1e-12);
            }
        }
    }
}

#[test]
fn clique_bound_never_exceeds_exact_tail() {
    for n in 3..=6 {
        let census = triangle_census(n).unwrap();
        for p in [0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9] {
            for extra in 0..=25 {
                let extra = extra as f64;
                let lb = clique_planting_lower_bound(p, extra).unwrap();
                let v = if lb.k > n { 0.0 } else { lb.log_prob.exp() };
                assert!(v <= census.tail(p, extra) * (1.0 + 1e-12), "n={n} p={p} extra={extra}");
                let packaged = clique_tail(n, p, extra).unwrap().p_hat;
                assert!(packaged <= census.tail(p, extra) * (1.0 + 1e-12));
            }
        }
    }
}

#[test]
fn clique_bound_documented_instance() {
    let lb = clique_planting_lower_bound(0.5, 4.0).unwrap();
    assert_eq!(lb.k, 4);
    assert!((lb.log_prob + 4.158_883_083_359_672).abs() < 1e-12);
    let threshold = expected_triangles(6, 0.5).ceil() + 4.0;
    assert!(lb.log_prob.exp() <= exact_tail(6, 0.5, threshold).unwrap().p_hat);
}

#[test]
fn monte_carlo_covers_documented_cases() {
    let plain = plain_mc_tail(3, 0.5, 1.0, 100_000, 11, DEFAULT_CONFIDENCE).unwrap();
    assert!(plain.ci_low <= 0.125 && 0.125 <= plain.ci_high);
    assert_eq!(plain_mc_tail(5, 0.3, 0.0, 1000, 1, DEFAULT_CONFIDENCE).unwrap().p_hat, 1.0);

    let exact = common::exact_tail(5, 0.3, 6.0);
    let tilted = tilted_mc_tail(5, 0.3, 6.0, 0.6, 100_000, 12, DEFAULT_CONFIDENCE).unwrap();
    assert!(tilted.ci_low <= exact && exact <= tilted.ci_high, "{tilted:?} vs {exact}");
}

#[test]
fn estimators_are_deterministic_across_pools() {
    let run = || {
        (
            plain_mc_tail(6, 0.4, 4.0, 30_000, 5, DEFAULT_CONFIDENCE).unwrap(),
            tilted_mc_tail(6, 0.4, 4.0, 0.55, 30_000, 5, DEFAULT_CONFIDENCE).unwrap(),
        )
    };
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(run);
    assert_eq!(one, four);
}
