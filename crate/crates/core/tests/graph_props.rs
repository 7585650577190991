mod common;

use proptest::prelude::*;
use tritail::graph::{
    count_triangles, degree_sum, edge_triangle_counts, enumerate_graphs, sample_gnp, Graph,
};
use tritail::SeededRng;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = common::pair_count(n);
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut g = Graph::empty(n);
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        g.insert(u, v);
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

proptest! {
    #[test]
    fn fast_count_matches_oracle(g in arb_graph(70)) {
        prop_assert_eq!(count_triangles(&g), common::triangles(&g));
    }

    #[test]
    fn pair_counts_sum_to_three_t(g in arb_graph(40)) {
        let counts = edge_triangle_counts(&g);
        let on_edges: u64 = g.edges().map(|(u, v)| counts.get(u, v) as u64).sum();
        prop_assert_eq!(on_edges, 3 * count_triangles(&g));
        for (u, v) in g.edges().take(20) {
            prop_assert_eq!(counts.get(u, v) as u64, common::common(&g, u, v));
        }
    }

    #[test]
    fn full_degree_sum_is_twice_edges(g in arb_graph(40)) {
        let all: Vec<usize> = (0..g.n()).collect();
        prop_assert_eq!(degree_sum(&g, &all).unwrap(), 2 * g.edge_count() as u64);
    }

    #[test]
    fn edge_list_round_trips(g in arb_graph(30)) {
        let text = g.edge_list_string();
        let back = Graph::read_edge_list(text.as_bytes()).unwrap();
        prop_assert_eq!(back, g);
    }
}

#[test]
fn enumeration_weights_sum_to_one() {
    for n in 1..=6 {
        for p in [0.1, 0.5, 0.9] {
            let total: f64 = enumerate_graphs(n).unwrap().map(|g| g.weight(p)).sum();
            assert!((total - 1.0).abs() < 1e-12, "n={n} p={p}: {total}");
        }
    }
}

#[test]
fn enumeration_matches_mask_oracle() {
    for g in enumerate_graphs(5).unwrap() {
        assert_eq!(g.graph, common::graph_from_mask(5, g.index));
    }
}

#[test]
fn sampler_marginal_at_n2() {
    for p in [0.1, 0.37, 0.5, 0.9] {
        let samples = 1_000_000u64;
        let hits = (0..samples)
            .filter(|&i| sample_gnp(2, p, &mut SeededRng::new(0x5A, i)).unwrap().has_edge(0, 1))
            .count() as f64;
        let se = (p * (1.0 - p) / samples as f64).sqrt();
        let freq = hits / samples as f64;
        assert!((freq - p).abs() < 4.0 * se, "p={p}: {freq} is more than 4 SE away");
    }
}

#[test]
fn sampler_pairs_are_uncorrelated() {
    // Two edges of G(3, p) should be independent; check the joint frequency.
    let p = 0.3;
    let samples = 200_000u64;
    let both = (0..samples)
        .filter(|&i| {
            let g = sample_gnp(3, p, &mut SeededRng::new(0x5B, i)).unwrap();
            g.has_edge(0, 1) && g.has_edge(1, 2)
        })
        .count() as f64;
    let q = p * p;
    let se = (q * (1.0 - q) / samples as f64).sqrt();
    assert!((both / samples as f64 - q).abs() < 4.0 * se);
}
