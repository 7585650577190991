//! Sample G(n, p), count triangles and per-edge triangle counts, and compare
//! with the mean `C(n,3) p^3`.
//!
//! cargo run --example sample_and_count -- 200 0.05 7

use tritail::graph::{count_triangles, edge_triangle_counts, expected_triangles, sample_gnp};
use tritail::SeededRng;

fn main() -> tritail::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(200, |s| s.parse().expect("n"));
    let p: f64 = args.get(1).map_or(0.05, |s| s.parse().expect("p"));
    let seed: u64 = args.get(2).map_or(7, |s| s.parse().expect("seed"));

    let samples = 20;
    let mut total = 0u64;
    for i in 0..samples {
        let g = sample_gnp(n, p, &mut SeededRng::new(seed, i))?;
        let t = count_triangles(&g);
        total += t;
        if i < 3 {
            let counts = edge_triangle_counts(&g);
            let busiest = g.edges().map(|(u, v)| counts.get(u, v)).max().unwrap_or(0);
            println!("sample {i}: {} edges, {t} triangles, busiest edge in {busiest} triangles", g.edge_count());
        }
    }
    println!(
        "mean over {samples} samples: {:.2} (E(T) = {:.2})",
        total as f64 / samples as f64,
        expected_triangles(n, p)
    );
    Ok(())
}
