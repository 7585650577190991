//! Detect the four events behind the bad-edge and bad-vertex estimates, and
//! color the bad edges between good vertices into matchings.
//!
//! cargo run --example events -- 10 0.4 0.25

use tritail::classify::classify;
use tritail::matchings::{detect_events, greedy_matching_coloring, t_sum};
use tritail::{GnpParams, SeededRng};

fn main() -> tritail::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(10, |s| s.parse().expect("n"));
    let p: f64 = args.get(1).map_or(0.4, |s| s.parse().expect("p"));
    let eps: f64 = args.get(2).map_or(0.25, |s| s.parse().expect("epsilon"));
    let params = GnpParams::new(n, p, eps)?;

    for i in 0..5 {
        let g = params.sample(&mut SeededRng::new(3, i));
        let flags = detect_events(&g, &params);
        let b_prime = classify(&g, &params).bad_edges_between_good_vertices();
        let coloring = greedy_matching_coloring(&b_prime);
        println!(
            "sample {i}: E1={} E2={} E3={} E4={} exact={}  |B'|={} t(B')={} classes={} (<= 14np+1 = {:.1})",
            flags.e1.holds,
            flags.e2.holds,
            flags.e3.holds,
            flags.e4.holds,
            flags.all_exact(),
            b_prime.len(),
            t_sum(&g, &b_prime)?,
            coloring.class_count(),
            14.0 * params.np() + 1.0
        );
    }
    Ok(())
}
