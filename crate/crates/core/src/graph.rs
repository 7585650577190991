//! Bit-packed simple graphs, the G(n,p) sampler and triangle counting.
//!
//! Row `u` of the adjacency matrix is stored as `ceil(n / 64)` words; bit `v`
//! of row `u` is set iff `uv` is an edge. All counting routines work on word
//! intersections so that a triangle count costs `O(|E| * n / 64)`.

use std::fmt::Write as _;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng::SeededRng;

/// Largest `n` accepted by [`enumerate_graphs`]; `2^21` labeled graphs.
pub const ENUMERATION_CAP: usize = 7;

/// Default multiplier in the bad-vertex threshold `c * n * p`.
pub const DEFAULT_VERTEX_CONSTANT: f64 = 7.0;

pub type Pair = (usize, usize);

#[inline]
pub fn normalize_pair((u, v): Pair) -> Pair {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[inline]
pub fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[inline]
pub fn choose3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        assert!(n >= 1, "a graph needs at least one vertex");
        let words = n.div_ceil(64);
        Self {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.insert(u, v);
            }
        }
        g
    }

    /// The cycle `0 - 1 - ... - (n-1) - 0`.
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            let v = (u + 1) % n;
            if u != v {
                g.insert(u, v);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[Pair]) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "a graph needs at least one vertex"));
        }
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.check_pair(u, v)?;
            g.insert(u, v);
        }
        Ok(g)
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: x,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u, v));
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && (self.rows[u * self.words + v / 64] >> (v % 64)) & 1 == 1
    }

    /// Adds edge `uv`. Panics on self-loops or out-of-range vertices.
    pub fn insert(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n, "bad pair ({u}, {v})");
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn remove(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n, "bad pair ({u}, {v})");
        self.rows[u * self.words + v / 64] &= !(1 << (v % 64));
        self.rows[v * self.words + u / 64] &= !(1 << (u % 64));
    }

    pub fn toggle(&mut self, u: usize, v: usize) {
        if self.has_edge(u, v) {
            self.remove(u, v)
        } else {
            self.insert(u, v)
        }
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.row(u))
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Pair> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// `t_uv`: number of common neighbours of `u` and `v` (defined for any pair).
    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        if u == v {
            return 0;
        }
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Triangles, in lexicographic order of `(u, v, w)` with `u < v < w`.
    pub fn triangles(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        self.edges().flat_map(move |(u, v)| {
            let ru = self.row(u);
            let rv = self.row(v);
            bits_above(ru, rv, v).map(move |w| [u, v, w])
        })
    }

    pub fn edge_list_string(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n={}", self.n).unwrap();
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    /// Parses the edge-list text format: a `n=<int>` header followed by one
    /// `u v` pair per line (0-based). Blank lines and `#` comments are skipped.
    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Self> {
        let mut graph: Option<Graph> = None;
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match graph.as_mut() {
                None => {
                    let n = line
                        .strip_prefix("n=")
                        .and_then(|s| s.trim().parse::<usize>().ok())
                        .filter(|&n| n >= 1)
                        .ok_or_else(|| Error::Parse {
                            line: line_no,
                            msg: format!("expected header `n=<positive int>`, got `{line}`"),
                        })?;
                    graph = Some(Graph::empty(n));
                }
                Some(g) => {
                    let mut it = line.split_whitespace();
                    let parse = |tok: Option<&str>| -> Result<usize> {
                        tok.and_then(|t| t.parse().ok()).ok_or_else(|| Error::Parse {
                            line: line_no,
                            msg: format!("expected `u v`, got `{line}`"),
                        })
                    };
                    let u = parse(it.next())?;
                    let v = parse(it.next())?;
                    if it.next().is_some() {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("trailing tokens in `{line}`"),
                        });
                    }
                    g.check_pair(u, v).map_err(|e| Error::Parse {
                        line: line_no,
                        msg: e.to_string(),
                    })?;
                    g.insert(u, v);
                }
            }
        }
        graph.ok_or(Error::Parse {
            line: 0,
            msg: "missing `n=<int>` header".into(),
        })
    }
}

fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            }
        })
    })
}

/// Set bits of `a & b` strictly above position `v`.
fn bits_above<'a>(a: &'a [u64], b: &'a [u64], v: usize) -> impl Iterator<Item = usize> + 'a {
    let first = v / 64;
    (first..a.len()).flat_map(move |i| {
        let mut w = a[i] & b[i];
        if i == first {
            w &= above_mask(v % 64);
        }
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            }
        })
    })
}

#[inline]
fn above_mask(bit: usize) -> u64 {
    if bit >= 63 {
        0
    } else {
        !0u64 << (bit + 1)
    }
}

/// Parameters `(n, p, epsilon)` of the classification and bound machinery,
/// together with the derived quantities every threshold is built from.
///
/// All logarithms are natural: `log_inv_p = ln(1/p)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GnpParams {
    pub n: usize,
    pub p: f64,
    pub epsilon: f64,
    /// `L = ln(1/p)`.
    pub log_inv_p: f64,
    /// `ell = 1/L`.
    pub ell: f64,
    pub vertex_constant: f64,
    /// An edge is bad once it lies in at least this many triangles.
    pub edge_threshold: f64,
    /// A vertex is bad once its degree reaches this value.
    pub vertex_threshold: f64,
}

impl GnpParams {
    pub fn new(n: usize, p: f64, epsilon: f64) -> Result<Self> {
        Self::with_vertex_constant(n, p, epsilon, DEFAULT_VERTEX_CONSTANT)
    }

    pub fn with_vertex_constant(n: usize, p: f64, epsilon: f64, vertex_constant: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "must be at least 1"));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(invalid("p", format!("{p} is not in the open interval (0, 1)")));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(invalid("epsilon", format!("{epsilon} must be positive and finite")));
        }
        if !(vertex_constant > 0.0 && vertex_constant.is_finite()) {
            return Err(invalid("vertex_constant", "must be positive and finite"));
        }
        let log_inv_p = (1.0 / p).ln();
        let ell = 1.0 / log_inv_p;
        let np = n as f64 * p;
        Ok(Self {
            n,
            p,
            epsilon,
            log_inv_p,
            ell,
            vertex_constant,
            edge_threshold: epsilon * ell * np,
            vertex_threshold: vertex_constant * np,
        })
    }

    #[inline]
    pub fn np(&self) -> f64 {
        self.n as f64 * self.p
    }

    /// `L * n * p`, the size scale of the matchings and bad-vertex sets.
    #[inline]
    pub fn lnp(&self) -> f64 {
        self.log_inv_p * self.np()
    }

    pub fn expected_triangles(&self) -> f64 {
        expected_triangles(self.n, self.p)
    }

    pub fn sample(&self, rng: &mut SeededRng) -> Graph {
        sample_gnp(self.n, self.p, rng).expect("validated parameters")
    }
}

/// `E(T) = C(n,3) p^3`.
pub fn expected_triangles(n: usize, p: f64) -> f64 {
    choose3(n) as f64 * p * p * p
}

/// Draws G(n, p). `p = 0` and `p = 1` are accepted here.
///
/// Pairs are visited in lexicographic order and each consumes one 32-bit
/// draw, so the output is a pure function of `(n, p, rng key)`.
pub fn sample_gnp(n: usize, p: f64, rng: &mut SeededRng) -> Result<Graph> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid("p", format!("{p} is not a probability")));
    }
    let coin = SeededRng::coin(p);
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.flip(coin) {
                g.insert(u, v);
            }
        }
    }
    Ok(g)
}

/// Triangle count by row intersection and popcount over the upper triangle.
pub fn count_triangles(g: &Graph) -> u64 {
    let mut total = 0u64;
    for u in 0..g.n() {
        let ru = g.row(u);
        for v in g.neighbors(u).filter(|&v| v > u) {
            let rv = g.row(v);
            let first = v / 64;
            let mut c = ((ru[first] & rv[first]) & above_mask(v % 64)).count_ones() as u64;
            for i in (first + 1)..ru.len() {
                c += (ru[i] & rv[i]).count_ones() as u64;
            }
            total += c;
        }
    }
    total
}

/// Reference triangle count: the explicit triple loop.
pub fn count_triangles_naive(g: &Graph) -> u64 {
    let n = g.n();
    let mut total = 0;
    for u in 0..n {
        for v in (u + 1)..n {
            if !g.has_edge(u, v) {
                continue;
            }
            for w in (v + 1)..n {
                if g.has_edge(u, w) && g.has_edge(v, w) {
                    total += 1;
                }
            }
        }
    }
    total
}

/// `t_uv` for every unordered pair, edge or not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCounts {
    n: usize,
    counts: Vec<u32>,
}

impl PairCounts {
    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.counts[u * self.n + v]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `(pair, t_uv)` over all pairs `u < v`.
    pub fn iter(&self) -> impl Iterator<Item = (Pair, u32)> + '_ {
        (0..self.n).flat_map(move |u| ((u + 1)..self.n).map(move |v| ((u, v), self.get(u, v))))
    }
}

pub fn edge_triangle_counts(g: &Graph) -> PairCounts {
    let n = g.n();
    let mut counts = vec![0u32; n * n];
    for u in 0..n {
        for v in (u + 1)..n {
            let c = g.common_neighbors(u, v) as u32;
            counts[u * n + v] = c;
            counts[v * n + u] = c;
        }
    }
    PairCounts { n, counts }
}

/// `d(A) = sum of degrees over A`.
pub fn degree_sum(g: &Graph, set: &[usize]) -> Result<u64> {
    let mut seen = vec![false; g.n()];
    let mut total = 0u64;
    for &u in set {
        if u >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: u, n: g.n() });
        }
        if std::mem::replace(&mut seen[u], true) {
            return Err(invalid("A", format!("vertex {u} listed twice")));
        }
        total += g.degree(u) as u64;
    }
    Ok(total)
}

/// One labeled graph from an exhaustive enumeration.
#[derive(Clone, Debug)]
pub struct EnumeratedGraph {
    pub index: u64,
    pub graph: Graph,
    pub edges: usize,
    pub pairs: usize,
}

impl EnumeratedGraph {
    /// `p^e (1-p)^(N-e)`.
    pub fn weight(&self, p: f64) -> f64 {
        edge_count_weight(p, self.edges, self.pairs)
    }
}

pub fn edge_count_weight(p: f64, edges: usize, pairs: usize) -> f64 {
    p.powi(edges as i32) * (1.0 - p).powi((pairs - edges) as i32)
}

/// All `2^(n(n-1)/2)` labeled graphs on `n` vertices.
///
/// Bit `k` of the graph index selects the `k`-th pair in lexicographic order.
#[derive(Clone, Debug)]
pub struct GraphEnumeration {
    n: usize,
    pairs: Vec<Pair>,
    next: u64,
    end: u64,
}

pub fn enumerate_graphs(n: usize) -> Result<GraphEnumeration> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    if n > ENUMERATION_CAP {
        return Err(Error::EnumerationTooLarge {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    let pairs = lexicographic_pairs(n);
    let end = 1u64 << pairs.len();
    Ok(GraphEnumeration {
        n,
        pairs,
        next: 0,
        end,
    })
}

impl GraphEnumeration {
    pub fn total(&self) -> u64 {
        self.end
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn graph_at(&self, index: u64) -> EnumeratedGraph {
        let mut graph = Graph::empty(self.n);
        for (k, &(u, v)) in self.pairs.iter().enumerate() {
            if (index >> k) & 1 == 1 {
                graph.insert(u, v);
            }
        }
        EnumeratedGraph {
            index,
            graph,
            edges: index.count_ones() as usize,
            pairs: self.pairs.len(),
        }
    }
}

impl Iterator for GraphEnumeration {
    type Item = EnumeratedGraph;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.end {
            return None;
        }
        let item = self.graph_at(self.next);
        self.next += 1;
        Some(item)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for GraphEnumeration {}

pub fn lexicographic_pairs(n: usize) -> Vec<Pair> {
    (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<Pair> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn sampler_extremes() {
        let mut rng = SeededRng::new(3, 0);
        assert_eq!(sample_gnp(5, 0.0, &mut rng).unwrap().edge_count(), 0);
        assert_eq!(sample_gnp(5, 1.0, &mut rng).unwrap(), Graph::complete(5));
    }

    #[test]
    fn sampler_is_deterministic() {
        let a = sample_gnp(40, 0.3, &mut SeededRng::new(9, 4)).unwrap();
        let b = sample_gnp(40, 0.3, &mut SeededRng::new(9, 4)).unwrap();
        assert_eq!(a.rows, b.rows);
    }

    #[test]
    fn sampler_rejects_bad_p() {
        let mut rng = SeededRng::new(0, 0);
        assert!(sample_gnp(4, 1.5, &mut rng).is_err());
        assert!(sample_gnp(4, -0.1, &mut rng).is_err());
        assert!(sample_gnp(4, f64::NAN, &mut rng).is_err());
    }

    #[test]
    fn triangle_fixtures() {
        assert_eq!(count_triangles(&Graph::complete(4)), 4);
        assert_eq!(count_triangles(&Graph::cycle(5)), 0);
        assert_eq!(count_triangles_naive(&Graph::empty(6)), 0);
        assert_eq!(count_triangles_naive(&Graph::complete(3)), 1);
        assert_eq!(count_triangles_naive(&Graph::complete(5)), 10);
        assert_eq!(count_triangles(&Graph::complete(70)), choose3(70) as u64);
    }

    #[test]
    fn triangle_iterator_matches_count() {
        let g = sample_gnp(8, 0.5, &mut SeededRng::new(11, 0)).unwrap();
        assert_eq!(g.triangles().count() as u64, count_triangles_naive(&g));
        assert_eq!(count_triangles(&g), count_triangles_naive(&g));
    }

    #[test]
    fn pair_counts() {
        let k4 = edge_triangle_counts(&Graph::complete(4));
        assert!(k4.iter().all(|(_, c)| c == 2));
        let k3 = edge_triangle_counts(&Graph::complete(3));
        assert_eq!(k3.get(0, 1), 1);
        let p = edge_triangle_counts(&path(3));
        assert_eq!(p.get(0, 1), 0);
        assert_eq!(p.get(0, 2), 1);
    }

    #[test]
    fn degree_sums() {
        let k4 = Graph::complete(4);
        assert_eq!(degree_sum(&k4, &[1, 2]).unwrap(), 6);
        assert_eq!(degree_sum(&k4, &[]).unwrap(), 0);
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(degree_sum(&star, &[0]).unwrap(), 3);
        assert!(degree_sum(&star, &[4]).is_err());
        assert!(degree_sum(&star, &[1, 1]).is_err());
    }

    #[test]
    fn enumeration_sizes_and_weights() {
        assert_eq!(enumerate_graphs(3).unwrap().count(), 8);
        assert_eq!(enumerate_graphs(4).unwrap().count(), 64);
        for g in enumerate_graphs(4).unwrap() {
            assert!((g.weight(0.5) - 1.0 / 64.0).abs() < 1e-15);
        }
        for p in [0.1, 0.5, 0.9] {
            let s: f64 = enumerate_graphs(3).unwrap().map(|g| g.weight(p)).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        assert!(matches!(
            enumerate_graphs(8),
            Err(Error::EnumerationTooLarge { n: 8, cap: 7 })
        ));
    }

    #[test]
    fn enumeration_hits_every_graph_once() {
        let mut seen = std::collections::HashSet::new();
        for g in enumerate_graphs(4).unwrap() {
            assert!(seen.insert(g.graph.edge_list_string()));
        }
        assert_eq!(seen.len(), 64);
    }

    #[test]
    fn params_validation() {
        assert!(GnpParams::new(5, 0.0, 1.0).is_err());
        assert!(GnpParams::new(5, 1.0, 1.0).is_err());
        assert!(GnpParams::new(5, 0.5, 0.0).is_err());
        assert!(GnpParams::new(0, 0.5, 1.0).is_err());
        let gp = GnpParams::new(3, 0.5, 1.0).unwrap();
        assert!((gp.log_inv_p * gp.ell - 1.0).abs() < 1e-15);
        assert!((gp.edge_threshold - 1.5 / 2f64.ln()).abs() < 1e-12);
        assert!((gp.vertex_threshold - 10.5).abs() < 1e-12);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = sample_gnp(9, 0.4, &mut SeededRng::new(5, 5)).unwrap();
        let text = g.edge_list_string();
        assert!(text.starts_with("n=9\n"));
        let back = Graph::read_edge_list(text.as_bytes()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn edge_list_errors() {
        assert!(Graph::read_edge_list("0 1\n".as_bytes()).is_err());
        assert!(Graph::read_edge_list("n=3\n0 0\n".as_bytes()).is_err());
        assert!(Graph::read_edge_list("n=3\n0 3\n".as_bytes()).is_err());
        assert!(Graph::read_edge_list("n=3\n0 1 2\n".as_bytes()).is_err());
        assert!(Graph::read_edge_list("".as_bytes()).is_err());
        let g = Graph::read_edge_list("# fixture\nn=3\n\n0 1\n1 2\n".as_bytes()).unwrap();
        assert_eq!(g.edge_count(), 2);
    }
}
