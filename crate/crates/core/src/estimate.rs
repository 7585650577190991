//! Estimators of the upper tail `P(T >= t)`.
//!
//! * `exact`: sum over all labeled graphs (n <= 7);
//! * `plain`: crude Monte Carlo with a Wilson score interval;
//! * `tilted`: sample G(n, q) with q >= p and reweight by the likelihood
//!   ratio `(p/q)^e ((1-p)/(1-q))^(N-e)`;
//! * `clique_lb`: the probability that one fixed clique carries every
//!   triangle the threshold asks for (a guaranteed lower bound).
//!
//! Sample `i` of a run always draws from stream `(seed, i)`. Workers only
//! accumulate integer hit counts keyed by edge count, and the likelihood
//! ratio depends on the edge count alone, so every floating-point reduction
//! happens once, serially, in a fixed order. Results are therefore identical
//! for any number of threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{invalid, Result};
use crate::graph::{
    choose2, choose3, count_triangles, edge_count_weight, enumerate_graphs, sample_gnp,
};
use crate::rng::SeededRng;

pub const DEFAULT_CONFIDENCE: f64 = 0.95;

/// Below this effective sample size the tilted interval is flagged.
pub const MIN_EFFECTIVE_SAMPLES: f64 = 100.0;

/// Upper clamp for the default tilt.
pub const MAX_DEFAULT_TILT: f64 = 0.99;

const CHUNK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Plain,
    Tilted,
    #[serde(rename = "clique_lb", alias = "clique-lb")]
    CliqueLb,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Plain => "plain",
            Method::Tilted => "tilted",
            Method::CliqueLb => "clique_lb",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Method::Exact),
            "plain" => Ok(Method::Plain),
            "tilted" => Ok(Method::Tilted),
            "clique-lb" | "clique_lb" => Ok(Method::CliqueLb),
            other => Err(format!("unknown method `{other}` (expected exact, plain, tilted or clique-lb)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub method: Method,
    pub n: usize,
    pub p: f64,
    pub threshold: f64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence: f64,
    pub samples: u64,
    pub master_seed: Option<u64>,
    pub tilt_q: Option<f64>,
    /// Kish effective sample size of the weighted hits (tilted only).
    pub ess: Option<f64>,
    /// Raised when `ess` is below [`MIN_EFFECTIVE_SAMPLES`].
    pub low_ess: bool,
    /// Number of samples with `T >= threshold`.
    pub hits: u64,
}

/// Joint counts of (edge count, triangle count) over all labeled graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleCensus {
    n: usize,
    pairs: usize,
    /// `counts[e][t]` = number of labeled graphs with `e` edges and `t` triangles.
    counts: Vec<Vec<u64>>,
}

pub fn triangle_census(n: usize) -> Result<TriangleCensus> {
    let en = enumerate_graphs(n)?;
    let pairs = en.pair_count();
    let max_t = choose3(n);
    let total = en.total();
    let chunks: Vec<(u64, u64)> = (0..total).step_by(CHUNK as usize).map(|s| (s, (s + CHUNK).min(total))).collect();
    let counts = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut local = vec![vec![0u64; max_t + 1]; pairs + 1];
            for idx in lo..hi {
                let g = en.graph_at(idx);
                local[g.edges][count_triangles(&g.graph) as usize] += 1;
            }
            local
        })
        .reduce(
            || vec![vec![0u64; max_t + 1]; pairs + 1],
            |mut a, b| {
                for (ra, rb) in a.iter_mut().zip(b) {
                    for (x, y) in ra.iter_mut().zip(rb) {
                        *x += y;
                    }
                }
                a
            },
        );
    Ok(TriangleCensus { n, pairs, counts })
}

impl TriangleCensus {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self, edges: usize, triangles: usize) -> u64 {
        self.counts
            .get(edges)
            .and_then(|r| r.get(triangles))
            .copied()
            .unwrap_or(0)
    }

    /// `P(T >= threshold)` under G(n, p), for `p` in `[0, 1]`.
    pub fn tail(&self, p: f64, threshold: f64) -> f64 {
        let mut total = 0.0;
        for (e, row) in self.counts.iter().enumerate() {
            let hits: u64 = row
                .iter()
                .enumerate()
                .filter(|&(t, _)| t as f64 >= threshold)
                .map(|(_, &c)| c)
                .sum();
            if hits > 0 {
                total += hits as f64 * edge_count_weight(p, e, self.pairs);
            }
        }
        total
    }
}

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(name, format!("{p} is not a probability")))
    }
}

fn check_threshold(t: f64) -> Result<()> {
    if t.is_nan() {
        Err(invalid("threshold", "is NaN"))
    } else {
        Ok(())
    }
}

fn check_confidence(c: f64) -> Result<()> {
    if c > 0.0 && c < 1.0 {
        Ok(())
    } else {
        Err(invalid("confidence", format!("{c} is not in (0, 1)")))
    }
}

/// Two-sided standard normal quantile for `confidence`.
pub fn z_value(confidence: f64) -> f64 {
    Normal::standard().inverse_cdf(0.5 + confidence / 2.0)
}

pub fn exact_tail(n: usize, p: f64, threshold: f64) -> Result<TailEstimate> {
    check_probability("p", p)?;
    check_threshold(threshold)?;
    let census = triangle_census(n)?;
    let v = census.tail(p, threshold);
    Ok(TailEstimate {
        method: Method::Exact,
        n,
        p,
        threshold,
        p_hat: v,
        ci_low: v,
        ci_high: v,
        confidence: 1.0,
        samples: 1u64 << choose2(n),
        master_seed: None,
        tilt_q: None,
        ess: None,
        low_ess: false,
        hits: 0,
    })
}

/// Per-edge-count hit counts of `T >= threshold` over `samples` draws of G(n, q).
fn hits_by_edge_count(n: usize, q: f64, threshold: f64, samples: u64, seed: u64) -> Vec<u64> {
    let pairs = choose2(n);
    let chunks: Vec<(u64, u64)> = (0..samples)
        .step_by(CHUNK as usize)
        .map(|s| (s, (s + CHUNK).min(samples)))
        .collect();
    chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut local = vec![0u64; pairs + 1];
            for i in lo..hi {
                let mut rng = SeededRng::new(seed, i);
                let g = sample_gnp(n, q, &mut rng).expect("validated");
                if count_triangles(&g) as f64 >= threshold {
                    local[g.edge_count()] += 1;
                }
            }
            local
        })
        .reduce(
            || vec![0u64; pairs + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Wilson score interval for `hits` successes out of `samples`.
pub fn wilson_interval(hits: u64, samples: u64, z: f64) -> (f64, f64) {
    let n = samples as f64;
    let phat = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if hits == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if hits == samples { 1.0 } else { (center + half).min(1.0) };
    (lo.min(phat), hi.max(phat))
}

pub fn plain_mc_tail(
    n: usize,
    p: f64,
    threshold: f64,
    samples: u64,
    seed: u64,
    confidence: f64,
) -> Result<TailEstimate> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    check_probability("p", p)?;
    check_threshold(threshold)?;
    check_confidence(confidence)?;
    if samples == 0 {
        return Err(invalid("samples", "must be at least 1"));
    }
    let hits: u64 = hits_by_edge_count(n, p, threshold, samples, seed).iter().sum();
    let (ci_low, ci_high) = wilson_interval(hits, samples, z_value(confidence));
    Ok(TailEstimate {
        method: Method::Plain,
        n,
        p,
        threshold,
        p_hat: hits as f64 / samples as f64,
        ci_low,
        ci_high,
        confidence,
        samples,
        master_seed: Some(seed),
        tilt_q: None,
        ess: None,
        low_ess: false,
        hits,
    })
}

/// Likelihood ratio of a graph with `edges` edges out of `pairs`, G(n,p)
/// against G(n,q).
pub fn likelihood_ratio(p: f64, q: f64, edges: usize, pairs: usize) -> f64 {
    if p == q {
        return 1.0;
    }
    let e = edges as f64;
    let rest = (pairs - edges) as f64;
    let log_w = if edges == 0 { 0.0 } else { e * (p / q).ln() } + if pairs == edges { 0.0 } else { rest * ((1.0 - p) / (1.0 - q)).ln() };
    log_w.exp()
}

/// Default tilt `(1 + eps)^(1/3) p`, clamped to `(p, 0.99]`; `p` itself when
/// `eps <= 0` or `p >= 0.99`.
pub fn default_tilt(p: f64, epsilon: f64) -> f64 {
    if epsilon <= 0.0 || p >= MAX_DEFAULT_TILT {
        return p;
    }
    ((1.0 + epsilon).cbrt() * p).min(MAX_DEFAULT_TILT)
}

pub fn tilted_mc_tail(
    n: usize,
    p: f64,
    threshold: f64,
    q: f64,
    samples: u64,
    seed: u64,
    confidence: f64,
) -> Result<TailEstimate> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid("p", format!("{p} is not in (0, 1)")));
    }
    if !(q > 0.0 && q < 1.0) || q < p {
        return Err(invalid("tilt_q", format!("{q} must lie in [p, 1) with p = {p}")));
    }
    check_threshold(threshold)?;
    check_confidence(confidence)?;
    if samples == 0 {
        return Err(invalid("samples", "must be at least 1"));
    }
    let pairs = choose2(n);
    let hits = hits_by_edge_count(n, q, threshold, samples, seed);
    let (mut sum_w, mut sum_w2, mut total_hits) = (0.0f64, 0.0f64, 0u64);
    for (e, &h) in hits.iter().enumerate() {
        if h == 0 {
            continue;
        }
        let w = likelihood_ratio(p, q, e, pairs);
        sum_w += h as f64 * w;
        sum_w2 += h as f64 * w * w;
        total_hits += h;
    }
    let ns = samples as f64;
    let mean = sum_w / ns;
    let var = if samples > 1 {
        ((sum_w2 / ns - mean * mean) * ns / (ns - 1.0)).max(0.0)
    } else {
        0.0
    };
    let half = z_value(confidence) * (var / ns).sqrt();
    let ess = if sum_w2 > 0.0 { sum_w * sum_w / sum_w2 } else { 0.0 };
    let p_hat = mean.min(1.0);
    Ok(TailEstimate {
        method: Method::Tilted,
        n,
        p,
        threshold,
        p_hat,
        ci_low: (mean - half).max(0.0).min(p_hat),
        ci_high: (mean + half).min(1.0).max(p_hat),
        confidence,
        samples,
        master_seed: Some(seed),
        tilt_q: Some(q),
        ess: Some(ess),
        low_ess: ess < MIN_EFFECTIVE_SAMPLES,
        hits: total_hits,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliqueLowerBound {
    /// Smallest `k` with `C(k, 3) >= extra_triangles` (at least 2).
    pub k: usize,
    /// `C(k, 2) ln p`: log-probability that a fixed `k`-set is a clique.
    pub log_prob: f64,
    /// `C(k, 3)`, the triangle count the clique guarantees on its own.
    pub guaranteed_triangles: u64,
}

/// Probability that one fixed set of `k` vertices spans a clique, where `k`
/// is the smallest clique size carrying `extra_triangles` triangles.
///
/// Since the planted clique alone contains `C(k, 3)` triangles,
/// `exp(log_prob) <= P(T >= extra_triangles)` always.
pub fn clique_planting_lower_bound(p: f64, extra_triangles: f64) -> Result<CliqueLowerBound> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(invalid("p", format!("{p} is not in (0, 1]")));
    }
    if !(extra_triangles >= 0.0 && extra_triangles.is_finite()) {
        return Err(invalid("extra_triangles", "must be nonnegative and finite"));
    }
    let mut k = 2usize;
    while (choose3(k) as f64) < extra_triangles {
        k += 1;
    }
    Ok(CliqueLowerBound {
        k,
        log_prob: choose2(k) as f64 * p.ln(),
        guaranteed_triangles: choose3(k) as u64,
    })
}

/// The clique bound packaged as a tail estimate at `threshold`.
///
/// The clique must carry all `threshold` triangles by itself. Asking it for
/// only the excess over `E(T)` is the right asymptotic picture but not a
/// bound: at n = 4, p = 0.9, threshold 3 it would give 0.729 while the true
/// tail is 0.531.
pub fn clique_tail(n: usize, p: f64, threshold: f64) -> Result<TailEstimate> {
    check_threshold(threshold)?;
    let lb = clique_planting_lower_bound(p, threshold.max(0.0))?;
    let v = if lb.k > n { 0.0 } else { lb.log_prob.exp() };
    Ok(TailEstimate {
        method: Method::CliqueLb,
        n,
        p,
        threshold,
        p_hat: v,
        ci_low: v,
        ci_high: v,
        confidence: 1.0,
        samples: 0,
        master_seed: None,
        tilt_q: None,
        ess: None,
        low_ess: false,
        hits: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_fixtures() {
        assert_eq!(exact_tail(3, 0.5, 1.0).unwrap().p_hat, 0.125);
        assert_eq!(exact_tail(4, 0.5, 1.0).unwrap().p_hat, 23.0 / 64.0);
        assert_eq!(exact_tail(4, 0.37, 5.0).unwrap().p_hat, 0.0);
        assert!(exact_tail(8, 0.5, 1.0).is_err());
        let e = exact_tail(4, 0.5, 1.0).unwrap();
        assert!(e.ci_low == e.p_hat && e.ci_high == e.p_hat);
    }

    #[test]
    fn plain_fixtures() {
        let r = plain_mc_tail(5, 0.3, 0.0, 1000, 1, 0.95).unwrap();
        assert_eq!(r.p_hat, 1.0);
        let a = plain_mc_tail(6, 0.4, 2.0, 5000, 77, 0.95).unwrap();
        let b = plain_mc_tail(6, 0.4, 2.0, 5000, 77, 0.95).unwrap();
        assert_eq!(a, b);
        assert!(plain_mc_tail(6, 0.4, 2.0, 0, 77, 0.95).is_err());
    }

    #[test]
    fn tilted_reduces_to_plain_when_q_equals_p() {
        let a = plain_mc_tail(5, 0.3, 2.0, 3000, 5, 0.95).unwrap();
        let b = tilted_mc_tail(5, 0.3, 2.0, 0.3, 3000, 5, 0.95).unwrap();
        assert_eq!(a.p_hat, b.p_hat);
        assert_eq!(a.hits, b.hits);
    }

    #[test]
    fn empty_graph_weight() {
        let w = likelihood_ratio(0.2, 0.5, 0, 3);
        assert!((w - 4.096).abs() < 1e-12);
    }

    #[test]
    fn tilted_validation() {
        assert!(tilted_mc_tail(5, 0.3, 2.0, 0.2, 10, 1, 0.95).is_err());
        assert!(tilted_mc_tail(5, 0.3, 2.0, 1.0, 10, 1, 0.95).is_err());
    }

    #[test]
    fn wilson_brackets_estimate() {
        for (h, n) in [(0u64, 10u64), (10, 10), (3, 100), (50, 100)] {
            let (lo, hi) = wilson_interval(h, n, 1.96);
            let ph = h as f64 / n as f64;
            assert!(lo <= ph && ph <= hi && lo >= 0.0 && hi <= 1.0);
        }
    }

    #[test]
    fn default_tilt_clamps() {
        assert_eq!(default_tilt(0.3, 0.0), 0.3);
        assert!((default_tilt(0.1, 7.0) - 0.2).abs() < 1e-12);
        assert_eq!(default_tilt(0.9, 7.0), MAX_DEFAULT_TILT);
    }

    #[test]
    fn clique_fixtures() {
        let z = clique_planting_lower_bound(0.5, 0.0).unwrap();
        assert_eq!((z.k, z.log_prob), (2, 0.5f64.ln()));
        let one = clique_planting_lower_bound(0.3, 1.0).unwrap();
        assert_eq!(one.k, 3);
        assert!((one.log_prob - 3.0 * 0.3f64.ln()).abs() < 1e-15);
        let four = clique_planting_lower_bound(0.5, 4.0).unwrap();
        assert_eq!(four.k, 4);
        assert!((four.log_prob - 6.0 * 0.5f64.ln()).abs() < 1e-15);
        let five = clique_planting_lower_bound(0.5, 4.5).unwrap();
        assert_eq!(five.k, 5);
        let t = clique_tail(4, 0.9, 3.0).unwrap();
        assert!((t.p_hat - 0.9f64.powi(6)).abs() < 1e-15);
        assert_eq!(clique_tail(4, 0.9, 5.0).unwrap().p_hat, 0.0);
    }

    #[test]
    fn method_parsing() {
        assert_eq!("clique-lb".parse::<Method>().unwrap(), Method::CliqueLb);
        assert!("bogus".parse::<Method>().is_err());
    }
}
