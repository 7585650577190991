//! Tilted Monte Carlo sweep of the normalized exponent
//! `-ln P(T >= 2 E(T)) / (n^2 p^2 ln(1/p))`, written as CSV.
//!
//! cargo run --release --example scaling_sweep > scaling.csv

use tritail::cli::{run_sweep, sweep_csv, RunConfig};
use tritail::estimate::Method;

fn main() -> tritail::Result<()> {
    let cfg = RunConfig {
        n: vec![40, 60, 80],
        p: vec![0.1],
        epsilon: vec![1.0],
        methods: vec![Method::Tilted, Method::CliqueLb],
        samples: 100_000,
        master_seed: 9,
        ..RunConfig::default()
    };
    let table = run_sweep(&cfg)?;
    for r in &table.rows {
        eprintln!(
            "n = {:>3} {:<9} p_hat = {:.3e}  normalized exponent = {:.4}",
            r.n,
            r.method,
            r.p_hat.unwrap_or(f64::NAN),
            r.normalized_exponent.unwrap_or(f64::NAN)
        );
    }
    print!("{}", sweep_csv(&table)?);
    Ok(())
}
