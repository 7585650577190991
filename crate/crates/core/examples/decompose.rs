//! Split the triangle count of one sampled graph by edge and vertex
//! goodness, and print it as JSON.
//!
//! cargo run --example decompose -- 60 0.15 0.5

use tritail::classify::{classify, decompose_report};
use tritail::{GnpParams, SeededRng};

fn main() -> tritail::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(60, |s| s.parse().expect("n"));
    let p: f64 = args.get(1).map_or(0.15, |s| s.parse().expect("p"));
    let eps: f64 = args.get(2).map_or(0.5, |s| s.parse().expect("epsilon"));

    // A smaller vertex constant makes bad vertices show up at desk scale.
    for vertex_constant in [7.0, 1.5] {
        let params = GnpParams::with_vertex_constant(n, p, eps, vertex_constant)?;
        let g = params.sample(&mut SeededRng::new(1, 0));
        let class = classify(&g, &params);
        let report = decompose_report(&g, &params);
        println!(
            "vertex constant {vertex_constant}: {} bad edges, {} bad vertices, covering sum {} >= T = {}",
            class.bad_edges().len(),
            class.bad_vertices().len(),
            report.counts.covering_sum(),
            report.counts.t
        );
        println!("{}", serde_json::to_string_pretty(&report)?);
    }
    Ok(())
}
