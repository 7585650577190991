//! Good/bad classification of edges and vertices and the five-way split of
//! the triangle count.
//!
//! An edge is good while it lies in fewer than `epsilon * ell * n * p`
//! triangles; a vertex is good while its degree is below `7 * n * p` (the
//! multiplier is `GnpParams::vertex_constant`). Both comparisons are strict,
//! so a count that lands exactly on an integer threshold is bad.

use serde::{Deserialize, Serialize};

use crate::graph::{edge_triangle_counts, GnpParams, Graph, Pair, PairCounts};

#[derive(Clone, Debug)]
pub struct Classification {
    good: Graph,
    bad: Graph,
    bad_vertex: Vec<bool>,
}

impl Classification {
    /// Present edges with `t_uv < edge_threshold`, as a graph.
    pub fn good_graph(&self) -> &Graph {
        &self.good
    }

    pub fn bad_graph(&self) -> &Graph {
        &self.bad
    }

    pub fn good_edges(&self) -> Vec<Pair> {
        self.good.edges().collect()
    }

    pub fn bad_edges(&self) -> Vec<Pair> {
        self.bad.edges().collect()
    }

    pub fn is_good_edge(&self, u: usize, v: usize) -> bool {
        self.good.has_edge(u, v)
    }

    pub fn is_bad_edge(&self, u: usize, v: usize) -> bool {
        self.bad.has_edge(u, v)
    }

    pub fn is_bad_vertex(&self, u: usize) -> bool {
        self.bad_vertex[u]
    }

    pub fn good_vertices(&self) -> Vec<usize> {
        (0..self.bad_vertex.len()).filter(|&u| !self.bad_vertex[u]).collect()
    }

    pub fn bad_vertices(&self) -> Vec<usize> {
        (0..self.bad_vertex.len()).filter(|&u| self.bad_vertex[u]).collect()
    }

    /// Bad edges whose endpoints are both good vertices.
    pub fn bad_edges_between_good_vertices(&self) -> Vec<Pair> {
        self.bad
            .edges()
            .filter(|&(u, v)| !self.bad_vertex[u] && !self.bad_vertex[v])
            .collect()
    }
}

pub fn classify(g: &Graph, params: &GnpParams) -> Classification {
    classify_with_counts(g, params, &edge_triangle_counts(g))
}

pub fn classify_with_counts(g: &Graph, params: &GnpParams, counts: &PairCounts) -> Classification {
    let n = g.n();
    let mut good = Graph::empty(n);
    let mut bad = Graph::empty(n);
    for (u, v) in g.edges() {
        if (counts.get(u, v) as f64) < params.edge_threshold {
            good.insert(u, v);
        } else {
            bad.insert(u, v);
        }
    }
    let bad_vertex = (0..n)
        .map(|u| (g.degree(u) as f64) >= params.vertex_threshold)
        .collect();
    Classification {
        good,
        bad,
        bad_vertex,
    }
}

/// Triangle counts split by edge and vertex goodness.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    #[serde(rename = "T")]
    pub t: u64,
    /// All three edges good.
    #[serde(rename = "T_prime")]
    pub t_prime: u64,
    /// At least one bad edge, all three vertices good.
    #[serde(rename = "T0")]
    pub t0: u64,
    /// Exactly one bad vertex.
    #[serde(rename = "T1")]
    pub t1: u64,
    #[serde(rename = "T2")]
    pub t2: u64,
    #[serde(rename = "T3")]
    pub t3: u64,
    /// All three vertices good (the bucket `T0` is carved out of).
    #[serde(rename = "T_good_vertices")]
    pub t_good_vertices: u64,
}

impl Decomposition {
    /// `T' + T0 + T1 + T2 + T3`, which always dominates `T`.
    pub fn covering_sum(&self) -> u64 {
        self.t_prime + self.t0 + self.t1 + self.t2 + self.t3
    }

    pub fn covers(&self) -> bool {
        self.t <= self.covering_sum()
    }

    /// Every triangle has 0, 1, 2 or 3 bad vertices.
    pub fn vertex_partition_holds(&self) -> bool {
        self.t == self.t_good_vertices + self.t1 + self.t2 + self.t3
    }
}

/// JSON shape of a decomposition together with the thresholds that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    #[serde(flatten)]
    pub counts: Decomposition,
    pub edge_threshold: f64,
    pub vertex_threshold: f64,
}

pub fn decompose(g: &Graph, params: &GnpParams) -> Decomposition {
    decompose_classified(g, &classify(g, params))
}

pub fn decompose_classified(g: &Graph, class: &Classification) -> Decomposition {
    let mut d = Decomposition::default();
    for [u, v, w] in g.triangles() {
        d.t += 1;
        let bad_edges = [(u, v), (v, w), (u, w)]
            .iter()
            .filter(|&&(a, b)| class.is_bad_edge(a, b))
            .count();
        let bad_vertices = [u, v, w].iter().filter(|&&x| class.is_bad_vertex(x)).count();
        if bad_edges == 0 {
            d.t_prime += 1;
        }
        match bad_vertices {
            0 => {
                d.t_good_vertices += 1;
                if bad_edges > 0 {
                    d.t0 += 1;
                }
            }
            1 => d.t1 += 1,
            2 => d.t2 += 1,
            _ => d.t3 += 1,
        }
    }
    d
}

pub fn decompose_report(g: &Graph, params: &GnpParams) -> DecompositionReport {
    DecompositionReport {
        counts: decompose(g, params),
        edge_threshold: params.edge_threshold,
        vertex_threshold: params.vertex_threshold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_all_good() {
        let params = GnpParams::new(3, 0.5, 1.0).unwrap();
        let g = Graph::complete(3);
        let c = classify(&g, &params);
        assert_eq!(c.good_edges().len(), 3);
        assert!(c.bad_edges().is_empty());
        assert_eq!(c.good_vertices(), vec![0, 1, 2]);
        let d = decompose(&g, &params);
        assert_eq!(
            (d.t, d.t_prime, d.t0, d.t1, d.t2, d.t3),
            (1, 1, 0, 0, 0, 0)
        );
    }

    #[test]
    fn empty_graph() {
        let params = GnpParams::new(5, 0.2, 0.5).unwrap();
        let g = Graph::empty(5);
        let c = classify(&g, &params);
        assert!(c.good_edges().is_empty() && c.bad_edges().is_empty());
        assert_eq!(c.good_vertices().len(), 5);
        assert_eq!(decompose(&g, &params), Decomposition::default());
    }

    #[test]
    fn dense_small_p_marks_vertices_bad() {
        let params = GnpParams::new(6, 0.1, 1.0).unwrap();
        let c = classify(&Graph::complete(6), &params);
        assert_eq!(c.bad_vertices().len(), 6);
        let d = decompose(&Graph::complete(6), &params);
        assert_eq!(d.t3, 20);
        assert!(d.covers() && d.vertex_partition_holds());
    }

    #[test]
    fn integer_threshold_tie_is_bad() {
        // n = 4, p = 0.5: vertex threshold 7 * 2 = 14 is never reached, and
        // with vertex constant 1.5 the threshold is exactly 3 = degree in K4.
        let params = GnpParams::with_vertex_constant(4, 0.5, 1.0, 1.5).unwrap();
        let c = classify(&Graph::complete(4), &params);
        assert_eq!(c.bad_vertices().len(), 4);
    }

    #[test]
    fn report_serializes_flat() {
        let params = GnpParams::new(3, 0.5, 1.0).unwrap();
        let r = decompose_report(&Graph::complete(3), &params);
        let v: serde_json::Value = serde_json::to_value(r).unwrap();
        for key in ["T", "T_prime", "T0", "T1", "T2", "T3", "edge_threshold", "vertex_threshold"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}
