//! Evaluate the closed-form tail bounds: the two forms of the localized
//! concentration bound, the three weak-form instances, the pieces of the
//! main argument, and the exponential envelopes.

use tritail::bounds::{
    binomial_tail_bound, combined_threshold, concentration_bound, degree_tail_bound, matching_tail_bound,
    min_edges_for_triangles, one_bad_vertex_params, all_good_edges_constant, rate_function, sharp_bound,
    theorem_envelope, two_bad_vertices_params, BoundParams,
};

fn main() -> tritail::Result<()> {
    println!("concentration bound, lambda = 10, a = 2:");
    for t in [10.0, 20.0, 40.0, 80.0] {
        let (sharp, weak) = concentration_bound(BoundParams::new(t, 10.0, 2.0)?)?;
        println!("  t = {t:>4}: sharp {:.3e}  weak {:.3e}", sharp.prob_bound, weak.prob_bound);
    }

    println!("binomial tail, lambda = 1: t = 6 -> {:.6}", binomial_tail_bound(6.0, 1.0)?.prob_bound);
    println!("matching tail, m = 1, n = 8, p = 0.25: t = 12 -> {:.3e}", matching_tail_bound(12.0, 1, 8, 0.25)?.prob_bound);
    println!("degree tail, n = 10, m = 1, p = 0.1: t = 24 -> {:.3e}", degree_tail_bound(24.0, 10, 1, 0.1)?.prob_bound);

    let (n, p, eps) = (2000, 0.01, 1.0);
    let all_good = all_good_edges_constant(n, p, eps)?;
    println!("\nn = {n}, p = {p}, eps = {eps}");
    println!("  all good edges: c = {:.4}, log bound = {:.3}", all_good.c, all_good.bound.log_bound);
    println!("  one bad vertex: log bound = {:.3}", sharp_bound(one_bad_vertex_params(n, p, eps)?).log_bound);
    println!("  two bad vertices: log bound = {:.3}", sharp_bound(two_bad_vertices_params(n, p, eps)?).log_bound);
    println!("  combined threshold E(T) + 19 eps n^3 p^3 = {:.1}", combined_threshold(n, p, eps));

    let env = theorem_envelope(100, 0.1, 1.0, 0.01, 0.01, 0.01)?;
    println!("\nenvelopes at n = 100, p = 0.1 with all constants 0.01: {env:?}");
    println!("I_0.5(0.25) = {:.10}", rate_function(0.25, 0.5)?);
    println!("a graph with 4 triangles has at least {:.4} edges", min_edges_for_triangles(4.0)?);
    Ok(())
}
