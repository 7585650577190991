//! Command-line surface: argument parsing, run configurations and the table
//! emitters shared by the `tritail` binary and the examples.
//!
//! Output is data only. Sweeps and per-sample tables are CSV (a single
//! `# run_config=<json>` comment line precedes the header so the file alone
//! re-derives every row); single structured results are JSON with the
//! configuration embedded under `"config"`.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    binomial_tail_bound, concentration_bound, degree_tail_bound, matching_tail_bound, one_bad_vertex_params,
    all_good_edges_constant, sharp_bound, two_bad_vertices_params, BoundParams, BoundResult,
};
use crate::classify::{classify_with_counts, decompose_classified, DecompositionReport};
use crate::error::{invalid, Error, Result};
use crate::estimate::{
    clique_tail, default_tilt, exact_tail, plain_mc_tail, tilted_mc_tail, Method, TailEstimate, DEFAULT_CONFIDENCE,
};
use crate::graph::{edge_triangle_counts, expected_triangles, GnpParams, Graph};
use crate::harness::{check_all_centers, check_independence, IndependenceReport};
use crate::matchings::{detect_events_classified, greedy_matching_coloring, t_sum, Exactness};
use crate::rng::SeededRng;

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "TRITAIL_THREADS";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Everything needed to re-run a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub command: String,
    pub n: Vec<usize>,
    pub p: Vec<f64>,
    pub epsilon: Vec<f64>,
    pub methods: Vec<Method>,
    pub samples: u64,
    pub master_seed: u64,
    /// Explicit threshold; `(1 + eps) E(T)` when absent.
    pub threshold: Option<f64>,
    /// Explicit tilt; the default tilt for `eps` when absent.
    pub tilt_q: Option<f64>,
    pub confidence: f64,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    /// Adds a wall-clock `runtime_ms` column (makes output non-reproducible).
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: "sweep".into(),
            n: Vec::new(),
            p: Vec::new(),
            epsilon: vec![1.0],
            methods: Vec::new(),
            samples: 100_000,
            master_seed: 0,
            threshold: None,
            tilt_q: None,
            confidence: DEFAULT_CONFIDENCE,
            output: None,
            format: OutputFormat::Csv,
            timings: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n.is_empty() {
            return Err(invalid("n", "grid is empty"));
        }
        if self.p.is_empty() {
            return Err(invalid("p", "grid is empty"));
        }
        if self.epsilon.is_empty() {
            return Err(invalid("epsilon", "grid is empty"));
        }
        if self.methods.is_empty() {
            return Err(invalid("methods", "no method selected"));
        }
        if self.samples == 0 {
            return Err(invalid("samples", "must be at least 1"));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(invalid("confidence", "must lie in (0, 1)"));
        }
        Ok(())
    }

    /// Grid points in row order: `n` outermost, then `p`, `epsilon`, method.
    pub fn grid(&self) -> Vec<GridPoint> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &p in &self.p {
                for &epsilon in &self.epsilon {
                    for &method in &self.methods {
                        let grid_index = out.len();
                        out.push(GridPoint {
                            grid_index,
                            n,
                            p,
                            epsilon,
                            method,
                        });
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridPoint {
    pub grid_index: usize,
    pub n: usize,
    pub p: f64,
    pub epsilon: f64,
    pub method: Method,
}

/// Seed used for grid point `i`: distinct streams per point.
pub fn point_seed(master_seed: u64, grid_index: usize) -> u64 {
    master_seed.wrapping_add((grid_index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub grid_index: usize,
    pub method: &'static str,
    pub n: usize,
    pub p: f64,
    pub epsilon: f64,
    pub threshold: Option<f64>,
    pub expected_triangles: Option<f64>,
    pub p_hat: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub tilt_q: Option<f64>,
    pub ess: Option<f64>,
    /// `-ln(p_hat) / (n^2 p^2 ln(1/p))`.
    pub normalized_exponent: Option<f64>,
    pub runtime_ms: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable {
    pub config: RunConfig,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn errors(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.error.is_some())
    }

    pub fn is_complete(&self) -> bool {
        self.errors().next().is_none()
    }
}

pub fn normalized_exponent(p_hat: f64, n: usize, p: f64) -> Option<f64> {
    if p_hat > 0.0 && p > 0.0 && p < 1.0 {
        let scale = (n as f64 * p).powi(2) * (1.0 / p).ln();
        Some(-p_hat.ln() / scale)
    } else {
        None
    }
}

fn estimate_point(cfg: &RunConfig, pt: &GridPoint) -> Result<TailEstimate> {
    if !(pt.p > 0.0 && pt.p < 1.0) {
        return Err(invalid("p", format!("{} is not in (0, 1)", pt.p)));
    }
    if pt.epsilon.is_nan() || pt.epsilon <= 0.0 {
        return Err(invalid("epsilon", format!("{} must be positive", pt.epsilon)));
    }
    if pt.n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    let threshold = cfg
        .threshold
        .unwrap_or_else(|| (1.0 + pt.epsilon) * expected_triangles(pt.n, pt.p));
    let seed = point_seed(cfg.master_seed, pt.grid_index);
    match pt.method {
        Method::Exact => exact_tail(pt.n, pt.p, threshold),
        Method::Plain => plain_mc_tail(pt.n, pt.p, threshold, cfg.samples, seed, cfg.confidence),
        Method::Tilted => {
            let q = cfg.tilt_q.unwrap_or_else(|| default_tilt(pt.p, pt.epsilon));
            tilted_mc_tail(pt.n, pt.p, threshold, q, cfg.samples, seed, cfg.confidence)
        }
        Method::CliqueLb => clique_tail(pt.n, pt.p, threshold),
    }
}

/// Runs every grid point. Invalid points become rows carrying `error`; the
/// remaining points still run. Rows come back in grid order.
pub fn run_sweep(cfg: &RunConfig) -> Result<SweepTable> {
    cfg.validate()?;
    let rows = cfg
        .grid()
        .par_iter()
        .map(|pt| {
            let start = Instant::now();
            let res = estimate_point(cfg, pt);
            let runtime_ms = cfg.timings.then(|| start.elapsed().as_secs_f64() * 1e3);
            let mut row = SweepRow {
                grid_index: pt.grid_index,
                method: pt.method.as_str(),
                n: pt.n,
                p: pt.p,
                epsilon: pt.epsilon,
                threshold: None,
                expected_triangles: None,
                p_hat: None,
                ci_low: None,
                ci_high: None,
                samples: None,
                seed: None,
                tilt_q: None,
                ess: None,
                normalized_exponent: None,
                runtime_ms,
                error: None,
            };
            match res {
                Ok(est) => {
                    row.threshold = Some(est.threshold);
                    row.expected_triangles = Some(expected_triangles(pt.n, pt.p));
                    row.p_hat = Some(est.p_hat);
                    row.ci_low = Some(est.ci_low);
                    row.ci_high = Some(est.ci_high);
                    row.samples = Some(est.samples);
                    row.seed = est.master_seed;
                    row.tilt_q = est.tilt_q;
                    row.ess = est.ess;
                    row.normalized_exponent = normalized_exponent(est.p_hat, pt.n, pt.p);
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect();
    Ok(SweepTable {
        config: cfg.clone(),
        rows,
    })
}

fn config_comment<C: Serialize>(config: &C) -> Result<String> {
    Ok(format!("# run_config={}\n", serde_json::to_string(config)?))
}

/// CSV text with the config comment line, header and one line per row.
pub fn to_csv<C: Serialize, R: Serialize>(config: &C, rows: &[R]) -> Result<String> {
    let mut out = config_comment(config)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    out.push_str(std::str::from_utf8(&body).expect("csv output is utf-8"));
    Ok(out)
}

pub fn sweep_csv(table: &SweepTable) -> Result<String> {
    if table.config.timings {
        return to_csv(&table.config, &table.rows);
    }
    #[derive(Serialize)]
    struct Row<'a> {
        grid_index: usize,
        method: &'a str,
        n: usize,
        p: f64,
        epsilon: f64,
        threshold: Option<f64>,
        expected_triangles: Option<f64>,
        p_hat: Option<f64>,
        ci_low: Option<f64>,
        ci_high: Option<f64>,
        samples: Option<u64>,
        seed: Option<u64>,
        tilt_q: Option<f64>,
        ess: Option<f64>,
        normalized_exponent: Option<f64>,
        error: Option<&'a str>,
    }
    let rows: Vec<Row> = table
        .rows
        .iter()
        .map(|r| Row {
            grid_index: r.grid_index,
            method: r.method,
            n: r.n,
            p: r.p,
            epsilon: r.epsilon,
            threshold: r.threshold,
            expected_triangles: r.expected_triangles,
            p_hat: r.p_hat,
            ci_low: r.ci_low,
            ci_high: r.ci_high,
            samples: r.samples,
            seed: r.seed,
            tilt_q: r.tilt_q,
            ess: r.ess,
            normalized_exponent: r.normalized_exponent,
            error: r.error.as_deref(),
        })
        .collect();
    to_csv(&table.config, &rows)
}

pub fn sweep_json(table: &SweepTable) -> Result<String> {
    #[derive(Serialize)]
    struct Doc<'a> {
        config: &'a RunConfig,
        rows: &'a [SweepRow],
        errors: Vec<&'a SweepRow>,
    }
    Ok(serde_json::to_string_pretty(&Doc {
        config: &table.config,
        rows: &table.rows,
        errors: table.errors().collect(),
    })?)
}

// ---------------------------------------------------------------------------
// bounds

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BoundName {
    /// Localized concentration bound, sharp form (needs t, lambda, a).
    ConcentrationSharp,
    /// Localized concentration bound, weak form (needs t, lambda, a).
    ConcentrationWeak,
    /// Binomial tail (needs t, lambda).
    BinomialTail,
    /// Tail of t(A) for a matching of size m (needs t, m, n, p).
    MatchingTail,
    /// Tail of the degree sum over m vertices (needs t, m, n, p).
    DegreeTail,
    /// Triangles with all good edges (needs n, p, epsilon).
    AllGoodEdges,
    /// Triangles with one bad vertex from a fixed set (needs n, p, epsilon).
    OneBadVertex,
    /// Triangles with two bad vertices from a fixed set (needs n, p, epsilon).
    TwoBadVertices,
}

impl BoundName {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundName::ConcentrationSharp => "concentration-sharp",
            BoundName::ConcentrationWeak => "concentration-weak",
            BoundName::BinomialTail => "binomial-tail",
            BoundName::MatchingTail => "matching-tail",
            BoundName::DegreeTail => "degree-tail",
            BoundName::AllGoodEdges => "all-good-edges",
            BoundName::OneBadVertex => "one-bad-vertex",
            BoundName::TwoBadVertices => "two-bad-vertices",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoundsGrid {
    pub bounds: Vec<BoundName>,
    pub t: Vec<f64>,
    pub lambda: Vec<f64>,
    pub a: Vec<f64>,
    pub n: Vec<usize>,
    pub p: Vec<f64>,
    pub epsilon: Vec<f64>,
    pub m: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub bound_name: &'static str,
    pub t: Option<f64>,
    pub lambda: Option<f64>,
    pub a: Option<f64>,
    pub n: Option<usize>,
    pub p: Option<f64>,
    pub epsilon: Option<f64>,
    pub exponent: Option<f64>,
    pub prob_bound: Option<f64>,
    pub error: Option<String>,
}

fn bound_row(name: BoundName, res: Result<BoundResult>, n: Option<usize>, p: Option<f64>, eps: Option<f64>) -> BoundRow {
    match res {
        Ok(b) => BoundRow {
            bound_name: name.as_str(),
            t: Some(b.params.t),
            lambda: Some(b.params.lambda),
            a: Some(b.params.a),
            n,
            p,
            epsilon: eps,
            exponent: Some(b.log_bound),
            prob_bound: Some(b.prob_bound),
            error: None,
        },
        Err(e) => BoundRow {
            bound_name: name.as_str(),
            t: None,
            lambda: None,
            a: None,
            n,
            p,
            epsilon: eps,
            exponent: None,
            prob_bound: None,
            error: Some(e.to_string()),
        },
    }
}

pub fn evaluate_bounds(grid: &BoundsGrid) -> Result<Vec<BoundRow>> {
    if grid.bounds.is_empty() {
        return Err(invalid("bounds", "no bound selected"));
    }
    let mut rows = Vec::new();
    for &name in &grid.bounds {
        let before = rows.len();
        match name {
            BoundName::ConcentrationSharp | BoundName::ConcentrationWeak | BoundName::BinomialTail => {
                let a_grid: Vec<f64> = if name == BoundName::BinomialTail { vec![1.0] } else { grid.a.clone() };
                for &t in &grid.t {
                    for &lambda in &grid.lambda {
                        for &a in &a_grid {
                            let res = match name {
                                BoundName::BinomialTail => binomial_tail_bound(t, lambda),
                                _ => concentration_bound(BoundParams { t, lambda, a }).map(|(s, w)| {
                                    if name == BoundName::ConcentrationSharp {
                                        s
                                    } else {
                                        w
                                    }
                                }),
                            };
                            rows.push(bound_row(name, res, None, None, None));
                        }
                    }
                }
            }
            BoundName::MatchingTail | BoundName::DegreeTail => {
                for &t in &grid.t {
                    for &m in &grid.m {
                        for &n in &grid.n {
                            for &p in &grid.p {
                                let res = if name == BoundName::MatchingTail {
                                    matching_tail_bound(t, m, n, p)
                                } else {
                                    degree_tail_bound(t, n, m, p)
                                };
                                rows.push(bound_row(name, res, Some(n), Some(p), None));
                            }
                        }
                    }
                }
            }
            BoundName::AllGoodEdges | BoundName::OneBadVertex | BoundName::TwoBadVertices => {
                for &n in &grid.n {
                    for &p in &grid.p {
                        for &eps in &grid.epsilon {
                            let res = match name {
                                BoundName::AllGoodEdges => all_good_edges_constant(n, p, eps).map(|c| c.bound),
                                BoundName::OneBadVertex => one_bad_vertex_params(n, p, eps).map(sharp_bound),
                                _ => two_bad_vertices_params(n, p, eps).map(sharp_bound),
                            };
                            rows.push(bound_row(name, res, Some(n), Some(p), Some(eps)));
                        }
                    }
                }
            }
        }
        if rows.len() == before {
            return Err(invalid("bounds", format!("grid for `{}` is empty", name.as_str())));
        }
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// events

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventsConfig {
    pub n: usize,
    pub p: f64,
    pub epsilon: f64,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EventRow {
    pub seed: u64,
    pub sample: u64,
    pub n: usize,
    pub p: f64,
    pub epsilon: f64,
    #[serde(rename = "E1")]
    pub e1: bool,
    #[serde(rename = "E2")]
    pub e2: bool,
    #[serde(rename = "E3")]
    pub e3: bool,
    #[serde(rename = "E4")]
    pub e4: bool,
    pub e1_exact: bool,
    pub e2_exact: bool,
    pub e3_exact: bool,
    pub e4_exact: bool,
    pub t_bprime: u64,
    pub class_count: usize,
    pub max_class_t: u64,
}

/// One row per sampled graph; sample `i` draws from stream `(seed, i)`.
pub fn run_events(cfg: &EventsConfig) -> Result<Vec<EventRow>> {
    let params = GnpParams::new(cfg.n, cfg.p, cfg.epsilon)?;
    if cfg.samples == 0 {
        return Err(invalid("samples", "must be at least 1"));
    }
    Ok((0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let g = params.sample(&mut SeededRng::new(cfg.seed, i));
            event_row(&g, &params, cfg.seed, i)
        })
        .collect())
}

pub fn event_row(g: &Graph, params: &GnpParams, seed: u64, sample: u64) -> EventRow {
    let counts = edge_triangle_counts(g);
    let class = classify_with_counts(g, params, &counts);
    let flags = detect_events_classified(g, params, &counts, &class);
    let b_prime = class.bad_edges_between_good_vertices();
    let coloring = greedy_matching_coloring(&b_prime);
    EventRow {
        seed,
        sample,
        n: params.n,
        p: params.p,
        epsilon: params.epsilon,
        e1: flags.e1.holds,
        e2: flags.e2.holds,
        e3: flags.e3.holds,
        e4: flags.e4.holds,
        e1_exact: flags.e1.exactness == Exactness::Exact,
        e2_exact: flags.e2.exactness == Exactness::Exact,
        e3_exact: flags.e3.exactness == Exactness::Exact,
        e4_exact: flags.e4.exactness == Exactness::Exact,
        t_bprime: t_sum(g, &b_prime).expect("edges of g"),
        class_count: coloring.class_count(),
        max_class_t: coloring.max_class_weight(g),
    }
}

// ---------------------------------------------------------------------------
// decompose

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecomposeConfig {
    pub n: usize,
    pub p: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub input: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecomposeOutput {
    pub config: DecomposeConfig,
    pub edges: usize,
    #[serde(flatten)]
    pub report: DecompositionReport,
}

pub fn run_decompose(cfg: &DecomposeConfig) -> Result<DecomposeOutput> {
    let graph = match &cfg.input {
        Some(path) => Graph::read_edge_list(io::BufReader::new(fs::File::open(path)?))?,
        None => {
            let params = GnpParams::new(cfg.n, cfg.p, cfg.epsilon)?;
            params.sample(&mut SeededRng::new(cfg.seed, 0))
        }
    };
    let mut cfg = cfg.clone();
    cfg.n = graph.n();
    let params = GnpParams::new(graph.n(), cfg.p, cfg.epsilon)?;
    let counts = edge_triangle_counts(&graph);
    let class = classify_with_counts(&graph, &params, &counts);
    Ok(DecomposeOutput {
        config: cfg,
        edges: graph.edge_count(),
        report: DecompositionReport {
            counts: decompose_classified(&graph, &class),
            edge_threshold: params.edge_threshold,
            vertex_threshold: params.vertex_threshold,
        },
    })
}

// ---------------------------------------------------------------------------
// verify-conditions

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub n: usize,
    pub p: f64,
    pub epsilon: f64,
    pub graphs: u64,
    pub seed: u64,
    /// Vertex count for the exact independence check (at most 5).
    pub independence_n: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConditionFailures {
    pub cond_a: u64,
    pub cond_c: u64,
    pub cond_d: u64,
    pub overlap_bound: u64,
    pub edge_load_bound: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyOutput {
    pub config: VerifyConfig,
    pub a_const: f64,
    pub graphs: u64,
    pub centers_checked: u64,
    pub centers_with_triangle: u64,
    pub failures: ConditionFailures,
    pub max_independence_gap: f64,
    pub flip_changes: u64,
    pub independence: Vec<IndependenceReport>,
    pub pass: bool,
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyOutput> {
    let params = GnpParams::new(cfg.n, cfg.p, cfg.epsilon)?;
    if cfg.n < 3 {
        return Err(invalid("n", "need at least three vertices"));
    }
    let per_graph: Vec<(u64, u64, ConditionFailures)> = (0..cfg.graphs)
        .into_par_iter()
        .map(|i| {
            let g = params.sample(&mut SeededRng::new(cfg.seed, i));
            let mut f = ConditionFailures::default();
            let mut with_triangle = 0;
            let reports = check_all_centers(&g, &params);
            for r in &reports {
                f.cond_a += !r.cond_a as u64;
                f.cond_c += !r.cond_c as u64;
                f.cond_d += !r.cond_d as u64;
                f.overlap_bound += !r.overlap_bound_holds as u64;
                f.edge_load_bound += !r.edge_load_bound_holds as u64;
                with_triangle += r.x_center as u64;
            }
            (reports.len() as u64, with_triangle, f)
        })
        .collect();
    let mut failures = ConditionFailures::default();
    let (mut centers, mut with_triangle) = (0, 0);
    for (c, w, f) in per_graph {
        centers += c;
        with_triangle += w;
        failures.cond_a += f.cond_a;
        failures.cond_c += f.cond_c;
        failures.cond_d += f.cond_d;
        failures.overlap_bound += f.overlap_bound;
        failures.edge_load_bound += f.edge_load_bound;
    }
    let mut independence = Vec::new();
    if cfg.independence_n >= 3 {
        for center in crate::harness::all_triplets(cfg.independence_n) {
            independence.push(check_independence(cfg.independence_n, cfg.p, cfg.epsilon, center)?);
        }
    }
    let max_gap = independence.iter().map(|r| r.max_gap).fold(0.0, f64::max);
    let flips = independence.iter().map(|r| r.flip_changes).sum();
    let pass = failures == ConditionFailures::default() && max_gap <= 1e-12 && flips == 0;
    Ok(VerifyOutput {
        config: cfg.clone(),
        a_const: 3.0 * params.edge_threshold,
        graphs: cfg.graphs,
        centers_checked: centers,
        centers_with_triangle: with_triangle,
        failures,
        max_independence_gap: max_gap,
        flip_changes: flips,
        independence,
        pass,
    })
}

// ---------------------------------------------------------------------------
// tail

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailConfig {
    pub n: usize,
    pub p: f64,
    pub epsilon: Option<f64>,
    pub threshold: Option<f64>,
    pub method: Method,
    pub samples: u64,
    pub seed: u64,
    pub tilt_q: Option<f64>,
    pub confidence: f64,
}

impl TailConfig {
    pub fn resolved_threshold(&self) -> Result<f64> {
        match (self.threshold, self.epsilon) {
            (Some(t), _) => Ok(t),
            (None, Some(eps)) => Ok((1.0 + eps) * expected_triangles(self.n, self.p)),
            (None, None) => Err(invalid("threshold", "give --threshold or --epsilon")),
        }
    }
}

pub fn run_tail(cfg: &TailConfig) -> Result<TailEstimate> {
    let t = cfg.resolved_threshold()?;
    match cfg.method {
        Method::Exact => exact_tail(cfg.n, cfg.p, t),
        Method::Plain => plain_mc_tail(cfg.n, cfg.p, t, cfg.samples, cfg.seed, cfg.confidence),
        Method::Tilted => {
            let q = match (cfg.tilt_q, cfg.epsilon) {
                (Some(q), _) => q,
                (None, Some(eps)) => default_tilt(cfg.p, eps),
                (None, None) => {
                    let mean = expected_triangles(cfg.n, cfg.p);
                    default_tilt(cfg.p, if mean > 0.0 { t / mean - 1.0 } else { 0.0 })
                }
            };
            tilted_mc_tail(cfg.n, cfg.p, t, q, cfg.samples, cfg.seed, cfg.confidence)
        }
        Method::CliqueLb => clique_tail(cfg.n, cfg.p, t),
    }
}

#[derive(Serialize)]
struct TailCsvRow {
    method: &'static str,
    n: usize,
    p: f64,
    threshold: f64,
    p_hat: f64,
    ci_low: f64,
    ci_high: f64,
    samples: u64,
    seed: Option<u64>,
    tilt_q: Option<f64>,
    ess: Option<f64>,
}

pub fn tail_csv(cfg: &TailConfig, est: &TailEstimate) -> Result<String> {
    to_csv(
        cfg,
        &[TailCsvRow {
            method: est.method.as_str(),
            n: est.n,
            p: est.p,
            threshold: est.threshold,
            p_hat: est.p_hat,
            ci_low: est.ci_low,
            ci_high: est.ci_high,
            samples: est.samples,
            seed: est.master_seed,
            tilt_q: est.tilt_q,
            ess: est.ess,
        }],
    )
}

pub fn tail_json(cfg: &TailConfig, est: &TailEstimate) -> Result<String> {
    #[derive(Serialize)]
    struct Doc<'a> {
        config: &'a TailConfig,
        #[serde(flatten)]
        estimate: &'a TailEstimate,
    }
    Ok(serde_json::to_string_pretty(&Doc { config: cfg, estimate: est })?)
}

// ---------------------------------------------------------------------------
// argument parsing

#[derive(Debug, Parser)]
#[command(name = "tritail", version, about = "Upper tails of triangle counts in G(n,p)")]
pub struct Cli {
    /// Worker threads (overrides TRITAIL_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate closed-form bounds on a parameter grid (CSV).
    Bounds(BoundsArgs),
    /// Estimate P(T >= t).
    Tail(TailArgs),
    /// Per-sample event flags and coloring statistics (CSV).
    Events(EventsArgs),
    /// Decompose one graph's triangle count (JSON).
    Decompose(DecomposeArgs),
    /// Check the localized-family conditions (JSON).
    VerifyConditions(VerifyArgs),
    /// Run a tail-estimation sweep over a grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long = "bound", value_enum, value_delimiter = ',', required = true)]
    pub bounds: Vec<BoundName>,
    #[arg(long, value_delimiter = ',')]
    pub t: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub a: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub epsilon: Vec<f64>,
    /// Matching or vertex-set size.
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TailArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long, conflicts_with = "threshold", required_unless_present = "threshold")]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, default_value = "exact")]
    pub method: Method,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub tilt_q: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_CONFIDENCE)]
    pub confidence: f64,
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EventsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 100)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Read the graph from an edge-list file instead of sampling it.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 100)]
    pub graphs: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub independence_n: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// JSON RunConfig; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub epsilon: Vec<f64>,
    #[arg(long = "method", value_delimiter = ',')]
    pub methods: Vec<Method>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub tilt_q: Option<f64>,
    #[arg(long)]
    pub confidence: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub timings: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl SweepArgs {
    pub fn to_config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => serde_json::from_str(&fs::read_to_string(path)?)?,
            None => RunConfig::default(),
        };
        if !self.n.is_empty() {
            cfg.n = self.n.clone();
        }
        if !self.p.is_empty() {
            cfg.p = self.p.clone();
        }
        if !self.epsilon.is_empty() {
            cfg.epsilon = self.epsilon.clone();
        }
        if !self.methods.is_empty() {
            cfg.methods = self.methods.clone();
        }
        cfg.samples = self.samples.unwrap_or(cfg.samples);
        cfg.master_seed = self.seed.unwrap_or(cfg.master_seed);
        cfg.threshold = self.threshold.or(cfg.threshold);
        cfg.tilt_q = self.tilt_q.or(cfg.tilt_q);
        cfg.confidence = self.confidence.unwrap_or(cfg.confidence);
        cfg.format = self.format.unwrap_or(cfg.format);
        cfg.timings |= self.timings;
        cfg.output = self.output.clone().or(cfg.output);
        Ok(cfg)
    }
}

/// What a subcommand produced: text to emit and whether every requested
/// computation finished.
pub struct Outcome {
    pub text: String,
    pub output: Option<PathBuf>,
    pub complete: bool,
}

pub fn thread_count(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|s| s.parse().ok()))
        .filter(|&k| k > 0)
}

/// Executes a parsed command inside a pool sized by `--threads` /
/// `TRITAIL_THREADS` (rayon's default otherwise).
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = thread_count(cli.threads) {
        builder = builder.num_threads(k);
    }
    let pool = builder
        .build()
        .map_err(|e| invalid("threads", e.to_string()))?;
    pool.install(|| dispatch(&cli.command))
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Bounds(a) => {
            let grid = BoundsGrid {
                bounds: a.bounds.clone(),
                t: a.t.clone(),
                lambda: a.lambda.clone(),
                a: a.a.clone(),
                n: a.n.clone(),
                p: a.p.clone(),
                epsilon: a.epsilon.clone(),
                m: a.m.clone(),
            };
            let rows = evaluate_bounds(&grid)?;
            let complete = rows.iter().all(|r| r.error.is_none());
            Ok(Outcome {
                text: to_csv(&grid, &rows)?,
                output: a.output.clone(),
                complete,
            })
        }
        Command::Tail(a) => {
            let cfg = TailConfig {
                n: a.n,
                p: a.p,
                epsilon: a.epsilon,
                threshold: a.threshold,
                method: a.method,
                samples: a.samples,
                seed: a.seed,
                tilt_q: a.tilt_q,
                confidence: a.confidence,
            };
            let est = run_tail(&cfg)?;
            let text = if a.csv { tail_csv(&cfg, &est)? } else { tail_json(&cfg, &est)? };
            Ok(Outcome {
                text,
                output: a.output.clone(),
                complete: true,
            })
        }
        Command::Events(a) => {
            let cfg = EventsConfig {
                n: a.n,
                p: a.p,
                epsilon: a.epsilon,
                samples: a.samples,
                seed: a.seed,
            };
            let rows = run_events(&cfg)?;
            Ok(Outcome {
                text: to_csv(&cfg, &rows)?,
                output: a.output.clone(),
                complete: true,
            })
        }
        Command::Decompose(a) => {
            let cfg = DecomposeConfig {
                n: a.n,
                p: a.p,
                epsilon: a.epsilon,
                seed: a.seed,
                input: a.input.clone(),
            };
            let out = run_decompose(&cfg)?;
            Ok(Outcome {
                text: serde_json::to_string_pretty(&out)?,
                output: a.output.clone(),
                complete: true,
            })
        }
        Command::VerifyConditions(a) => {
            let cfg = VerifyConfig {
                n: a.n,
                p: a.p,
                epsilon: a.epsilon,
                graphs: a.graphs,
                seed: a.seed,
                independence_n: a.independence_n,
            };
            let out = run_verify(&cfg)?;
            Ok(Outcome {
                text: serde_json::to_string_pretty(&out)?,
                output: a.output.clone(),
                complete: out.pass,
            })
        }
        Command::Sweep(a) => {
            let cfg = a.to_config()?;
            let table = run_sweep(&cfg)?;
            let text = match cfg.format {
                OutputFormat::Csv => sweep_csv(&table)?,
                OutputFormat::Json => sweep_json(&table)?,
            };
            Ok(Outcome {
                text,
                output: cfg.output.clone(),
                complete: table.is_complete(),
            })
        }
    }
}

/// Writes the outcome to its output path, or stdout.
pub fn emit(outcome: &Outcome) -> Result<()> {
    match &outcome.output {
        Some(path) => fs::write(path, &outcome.text)?,
        None => {
            let mut out = io::stdout().lock();
            out.write_all(outcome.text.as_bytes())?;
            if !outcome.text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sweep_cfg() -> RunConfig {
        RunConfig {
            n: vec![4],
            p: vec![0.5],
            epsilon: vec![1.0],
            methods: vec![Method::Exact],
            threshold: Some(1.0),
            ..RunConfig::default()
        }
    }

    #[test]
    fn single_exact_row() {
        let t = run_sweep(&sweep_cfg()).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].p_hat, Some(0.359375));
    }

    #[test]
    fn empty_methods_rejected() {
        let mut cfg = sweep_cfg();
        cfg.methods.clear();
        assert!(run_sweep(&cfg).is_err());
    }

    #[test]
    fn bad_grid_entry_is_row_error() {
        let mut cfg = sweep_cfg();
        cfg.n = vec![4, 9];
        let t = run_sweep(&cfg).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert!(t.rows[0].error.is_none());
        assert!(t.rows[1].error.as_deref().unwrap().contains("enumeration"));
        assert!(!t.is_complete());
    }

    #[test]
    fn csv_is_reproducible() {
        let mut cfg = sweep_cfg();
        cfg.methods = vec![Method::Plain, Method::Tilted, Method::CliqueLb];
        cfg.samples = 2000;
        cfg.threshold = None;
        let a = sweep_csv(&run_sweep(&cfg).unwrap()).unwrap();
        let b = sweep_csv(&run_sweep(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("# run_config={"));
        assert!(a.lines().nth(1).unwrap().starts_with("grid_index,method,n,p"));
    }

    #[test]
    fn bounds_grid_rows() {
        let grid = BoundsGrid {
            bounds: vec![BoundName::BinomialTail, BoundName::MatchingTail],
            t: vec![6.0, 10.0],
            lambda: vec![1.0],
            m: vec![1],
            n: vec![8],
            p: vec![0.25],
            ..BoundsGrid::default()
        };
        let rows = evaluate_bounds(&grid).unwrap();
        assert_eq!(rows.len(), 4);
        assert!((rows[0].prob_bound.unwrap() - 0.015625).abs() < 1e-15);
        let empty = BoundsGrid {
            bounds: vec![BoundName::ConcentrationSharp],
            ..BoundsGrid::default()
        };
        assert!(evaluate_bounds(&empty).is_err());
    }

    #[test]
    fn cli_parses_subcommands() {
        let c = Cli::try_parse_from(["tritail", "tail", "--method", "exact", "--n", "3", "--p", "0.5", "--threshold", "1"]).unwrap();
        let out = execute(&c).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["p_hat"], 0.125);
        assert!(Cli::try_parse_from(["tritail", "tail", "--bogus"]).is_err());
        assert!(Cli::try_parse_from(["tritail", "decompose", "--n", "10", "--p", "0.4", "--epsilon", "0.5", "--seed", "7"]).is_ok());
    }
}
