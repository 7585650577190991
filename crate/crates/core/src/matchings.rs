//! Matchings, `t(F)` sums, the greedy coloring of bad edges into matchings,
//! and detectors for the four exceptional events:
//!
//! * `E1`: some matching of more than `L n p` bad edges exists;
//! * `E2`: some matching of at most `L n p` pairs has `t(F) > eps n^2 p^2`;
//! * `E3`: more than `L n p` vertices are bad;
//! * `E4`: some `A` with `|A| <= ceil(L n p)` has `d(A) >= 7 L n^2 p^2`.
//!
//! `E3` and `E4` are always decided exactly. `E1` and `E2` are searched
//! exhaustively up to [`EXACT_MATCHING_MAX_N`] vertices and greedily above,
//! where a positive answer still carries a checkable witness.

use serde::{Deserialize, Serialize};

use crate::classify::{classify_with_counts, Classification};
use crate::error::{Error, Result};
use crate::graph::{edge_triangle_counts, normalize_pair, GnpParams, Graph, Pair, PairCounts};

/// Largest vertex count for which `E1` and `E2` are decided exhaustively.
pub const EXACT_MATCHING_MAX_N: usize = 10;

/// A set of pairs no two of which share a vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching(Vec<Pair>);

impl Matching {
    pub fn new(pairs: Vec<Pair>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(pairs.len());
        for pair in pairs {
            let (u, v) = normalize_pair(pair);
            if u == v {
                return Err(Error::SelfLoop(u, v));
            }
            for x in [u, v] {
                if !seen.insert(x) {
                    return Err(Error::NotAMatching(x));
                }
            }
            out.push((u, v));
        }
        Ok(Self(out))
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn is_matching(pairs: &[Pair]) -> bool {
    Matching::new(pairs.to_vec()).is_ok()
}

/// `t(F) = sum over uv in F of t_uv`.
pub fn t_sum(g: &Graph, pairs: &[Pair]) -> Result<u64> {
    let n = g.n();
    let mut total = 0;
    for &(u, v) in pairs {
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u, v));
        }
        total += g.common_neighbors(u, v) as u64;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingColoring {
    pub classes: Vec<Matching>,
    /// The colored pairs, normalized and in coloring order.
    pub source: Vec<Pair>,
}

impl MatchingColoring {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Largest number of other source pairs sharing a vertex with one pair.
    pub fn max_adjacency_degree(&self) -> usize {
        max_adjacency_degree(&self.source)
    }

    /// `max_c t(F_c)`.
    pub fn max_class_weight(&self, g: &Graph) -> u64 {
        self.classes
            .iter()
            .map(|c| t_sum(g, c.pairs()).expect("pairs lie in g"))
            .max()
            .unwrap_or(0)
    }
}

pub fn max_adjacency_degree(pairs: &[Pair]) -> usize {
    let Some(n) = pairs.iter().map(|&(u, v)| u.max(v) + 1).max() else {
        return 0;
    };
    let mut cover = vec![0usize; n];
    for &(u, v) in pairs {
        cover[u] += 1;
        cover[v] += 1;
    }
    pairs
        .iter()
        .map(|&(u, v)| cover[u] + cover[v] - 2)
        .max()
        .unwrap_or(0)
}

/// Greedy proper coloring of the "share a vertex" graph on `source`.
///
/// Pairs are colored in lexicographic order of `(min, max)`, each with the
/// smallest color not already used at either endpoint, so the result is
/// deterministic and uses at most `max_adjacency_degree + 1` colors.
pub fn greedy_matching_coloring(source: &[Pair]) -> MatchingColoring {
    let mut pairs: Vec<Pair> = source.iter().copied().map(normalize_pair).collect();
    pairs.sort_unstable();
    pairs.dedup();
    let n = pairs.iter().map(|&(_, v)| v + 1).max().unwrap_or(0);
    let mut used: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut classes: Vec<Vec<Pair>> = Vec::new();
    for &(u, v) in &pairs {
        let color = (0..)
            .find(|c| !used[u].contains(c) && !used[v].contains(c))
            .unwrap();
        used[u].push(color);
        used[v].push(color);
        if color == classes.len() {
            classes.push(Vec::new());
        }
        classes[color].push((u, v));
    }
    MatchingColoring {
        classes: classes.into_iter().map(Matching).collect(),
        source: pairs,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    /// The event was reported false, but only a lower bound on the relevant
    /// maximum was computed.
    HeuristicLowerBound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Matching(Vec<Pair>),
    Vertices(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventOutcome {
    pub holds: bool,
    pub exactness: Exactness,
    /// Present iff `holds`.
    pub witness: Option<Witness>,
    /// The maximum (or its certified lower bound) compared with `threshold`.
    pub value: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventFlags {
    pub e1: EventOutcome,
    pub e2: EventOutcome,
    pub e3: EventOutcome,
    pub e4: EventOutcome,
}

impl EventFlags {
    /// Re-checks every witness from scratch against `g`.
    pub fn witnesses_valid(&self, g: &Graph, params: &GnpParams) -> bool {
        let counts = edge_triangle_counts(g);
        let class = classify_with_counts(g, params, &counts);
        let lnp = params.lnp();
        let check = |o: &EventOutcome, f: &dyn Fn(&Witness) -> bool| match (&o.witness, o.holds) {
            (Some(w), true) => f(w),
            (None, false) => true,
            _ => false,
        };
        let e1 = check(&self.e1, &|w| match w {
            Witness::Matching(m) => {
                is_matching(m) && m.iter().all(|&(u, v)| class.is_bad_edge(u, v)) && m.len() as f64 > lnp
            }
            _ => false,
        });
        let e2 = check(&self.e2, &|w| match w {
            Witness::Matching(m) => {
                is_matching(m)
                    && m.len() as f64 <= lnp
                    && m.iter().map(|&(u, v)| counts.get(u, v) as f64).sum::<f64>() > e2_threshold(params)
            }
            _ => false,
        });
        let e3 = check(&self.e3, &|w| match w {
            Witness::Vertices(vs) => {
                vs.len() as f64 > lnp && vs.iter().all(|&v| v < g.n() && class.is_bad_vertex(v))
            }
            _ => false,
        });
        let e4 = check(&self.e4, &|w| match w {
            Witness::Vertices(vs) => {
                let distinct: std::collections::HashSet<_> = vs.iter().collect();
                distinct.len() == vs.len()
                    && vs.len() <= e4_set_size(params)
                    && vs.iter().all(|&v| v < g.n())
                    && vs.iter().map(|&v| g.degree(v) as f64).sum::<f64>() >= e4_threshold(params)
            }
            _ => false,
        });
        e1 && e2 && e3 && e4
    }

    pub fn all_exact(&self) -> bool {
        [&self.e1, &self.e2, &self.e3, &self.e4]
            .iter()
            .all(|o| o.exactness == Exactness::Exact)
    }
}

/// `eps n^2 p^2`.
pub fn e2_threshold(params: &GnpParams) -> f64 {
    params.epsilon * params.np() * params.np()
}

/// `7 L n^2 p^2` (the 7 follows `GnpParams::vertex_constant`).
pub fn e4_threshold(params: &GnpParams) -> f64 {
    params.vertex_constant * params.log_inv_p * params.np() * params.np()
}

/// `ceil(L n p)`, capped at `n`.
pub fn e4_set_size(params: &GnpParams) -> usize {
    (params.lnp().ceil() as usize).min(params.n)
}

/// Cardinality cap for `E2`: `floor(L n p)`.
pub fn e2_cap(params: &GnpParams) -> usize {
    (params.lnp().floor() as usize).min(params.n / 2)
}

pub fn detect_events(g: &Graph, params: &GnpParams) -> EventFlags {
    let counts = edge_triangle_counts(g);
    let class = classify_with_counts(g, params, &counts);
    detect_events_classified(g, params, &counts, &class)
}

pub fn detect_events_classified(
    g: &Graph,
    params: &GnpParams,
    counts: &PairCounts,
    class: &Classification,
) -> EventFlags {
    let exact = g.n() <= EXACT_MATCHING_MAX_N;
    EventFlags {
        e1: detect_e1(class.bad_graph(), params, exact),
        e2: detect_e2(counts, params, exact),
        e3: detect_e3(class, params),
        e4: detect_e4(g, params),
    }
}

fn outcome(holds: bool, exactness: Exactness, witness: Witness, value: f64, threshold: f64) -> EventOutcome {
    EventOutcome {
        holds,
        exactness: if holds { Exactness::Exact } else { exactness },
        witness: holds.then_some(witness),
        value,
        threshold,
    }
}

fn detect_e1(bad: &Graph, params: &GnpParams, exact: bool) -> EventOutcome {
    let lnp = params.lnp();
    let weights = |u: usize, v: usize| bad.has_edge(u, v).then_some(1u64);
    if exact {
        let (size, m) = max_weight_matching_exhaustive(bad.n(), weights, bad.n() / 2);
        let value = size as f64;
        return outcome(value > lnp, Exactness::Exact, Witness::Matching(m), value, lnp);
    }
    let m = greedy_maximal_matching(bad);
    let value = m.len() as f64;
    // A maximal matching has at least half the size of a maximum one.
    let exactness = if 2.0 * value <= lnp {
        Exactness::Exact
    } else {
        Exactness::HeuristicLowerBound
    };
    outcome(value > lnp, exactness, Witness::Matching(m), value, lnp)
}

fn detect_e2(counts: &PairCounts, params: &GnpParams, exact: bool) -> EventOutcome {
    let threshold = e2_threshold(params);
    let cap = e2_cap(params);
    let n = counts.n();
    let weights = |u: usize, v: usize| {
        let c = counts.get(u, v);
        (c > 0).then_some(c as u64)
    };
    if exact {
        let (w, m) = max_weight_matching_exhaustive(n, weights, cap);
        let value = w as f64;
        return outcome(value > threshold, Exactness::Exact, Witness::Matching(m), value, threshold);
    }
    let mut candidates: Vec<(u32, Pair)> = counts.iter().filter(|&(_, c)| c > 0).map(|(p, c)| (c, p)).collect();
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut covered = vec![false; n];
    let mut chosen = Vec::new();
    let mut value = 0u64;
    for &(c, (u, v)) in &candidates {
        if chosen.len() >= cap {
            break;
        }
        if !covered[u] && !covered[v] {
            covered[u] = true;
            covered[v] = true;
            chosen.push((u, v));
            value += c as u64;
        }
    }
    let ceiling: u64 = candidates.iter().take(cap).map(|&(c, _)| c as u64).sum();
    let exactness = if ceiling as f64 <= threshold {
        Exactness::Exact
    } else {
        Exactness::HeuristicLowerBound
    };
    outcome(value as f64 > threshold, exactness, Witness::Matching(chosen), value as f64, threshold)
}

fn detect_e3(class: &Classification, params: &GnpParams) -> EventOutcome {
    let bad = class.bad_vertices();
    let value = bad.len() as f64;
    let lnp = params.lnp();
    outcome(value > lnp, Exactness::Exact, Witness::Vertices(bad), value, lnp)
}

fn detect_e4(g: &Graph, params: &GnpParams) -> EventOutcome {
    let k = e4_set_size(params);
    let mut by_degree: Vec<(usize, usize)> = (0..g.n()).map(|u| (g.degree(u), u)).collect();
    by_degree.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let top: Vec<usize> = by_degree.iter().take(k).map(|&(_, u)| u).collect();
    let value: f64 = by_degree.iter().take(k).map(|&(d, _)| d as f64).sum();
    let threshold = e4_threshold(params);
    outcome(value >= threshold, Exactness::Exact, Witness::Vertices(top), value, threshold)
}

/// Maximal matching by scanning edges in lexicographic order.
pub fn greedy_maximal_matching(g: &Graph) -> Vec<Pair> {
    let mut covered = vec![false; g.n()];
    let mut out = Vec::new();
    for (u, v) in g.edges() {
        if !covered[u] && !covered[v] {
            covered[u] = true;
            covered[v] = true;
            out.push((u, v));
        }
    }
    out
}

/// Maximum total weight over matchings with at most `cap` pairs, by
/// exhaustive search. `weight(u, v)` returns `None` for unusable pairs.
///
/// Exponential in `n`; intended for `n <= EXACT_MATCHING_MAX_N`.
pub fn max_weight_matching_exhaustive<W>(n: usize, weight: W, cap: usize) -> (u64, Vec<Pair>)
where
    W: Fn(usize, usize) -> Option<u64>,
{
    let mut table = vec![None; n * n];
    for u in 0..n {
        for v in (u + 1)..n {
            table[u * n + v] = weight(u, v);
        }
    }
    let mut search = Search {
        n,
        table,
        best: 0,
        best_pairs: Vec::new(),
        current: Vec::new(),
    };
    search.go(0, 0, 0, cap);
    (search.best, search.best_pairs)
}

struct Search {
    n: usize,
    table: Vec<Option<u64>>,
    best: u64,
    best_pairs: Vec<Pair>,
    current: Vec<Pair>,
}

impl Search {
    fn go(&mut self, from: usize, used: u64, acc: u64, left: usize) {
        if acc > self.best {
            self.best = acc;
            self.best_pairs = self.current.clone();
        }
        if left == 0 {
            return;
        }
        let Some(u) = (from..self.n).find(|&u| used >> u & 1 == 0) else {
            return;
        };
        // u stays unmatched.
        self.go(u + 1, used | 1 << u, acc, left);
        for v in (u + 1)..self.n {
            if used >> v & 1 == 1 {
                continue;
            }
            if let Some(w) = self.table[u * self.n + v] {
                self.current.push((u, v));
                self.go(u + 1, used | 1 << u | 1 << v, acc + w, left - 1);
                self.current.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_validation() {
        assert!(Matching::new(vec![(0, 1), (2, 3)]).is_ok());
        assert!(matches!(Matching::new(vec![(0, 1), (1, 2)]), Err(Error::NotAMatching(1))));
        assert!(Matching::new(vec![(2, 2)]).is_err());
    }

    #[test]
    fn t_sum_fixtures() {
        let k4 = Graph::complete(4);
        assert_eq!(t_sum(&k4, &[]).unwrap(), 0);
        assert_eq!(t_sum(&k4, &[(0, 1)]).unwrap(), 2);
        assert_eq!(t_sum(&k4, &[(0, 1), (2, 3)]).unwrap(), 4);
        assert!(t_sum(&k4, &[(0, 4)]).is_err());
    }

    #[test]
    fn coloring_fixtures() {
        let c = greedy_matching_coloring(&[(0, 1), (2, 3), (4, 5)]);
        assert_eq!(c.class_count(), 1);
        let c = greedy_matching_coloring(&[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(c.class_count(), 3);
        let c = greedy_matching_coloring(&[(2, 3), (1, 2), (3, 4)]);
        assert_eq!(c.classes[0].pairs(), &[(1, 2), (3, 4)]);
        assert_eq!(c.classes[1].pairs(), &[(2, 3)]);
        assert_eq!(greedy_matching_coloring(&[]).class_count(), 0);
    }

    #[test]
    fn exhaustive_matching_on_k6() {
        let k6 = Graph::complete(6);
        let (size, m) = max_weight_matching_exhaustive(6, |u, v| k6.has_edge(u, v).then_some(1), 3);
        assert_eq!(size, 3);
        assert!(is_matching(&m));
        let (size, _) = max_weight_matching_exhaustive(6, |u, v| k6.has_edge(u, v).then_some(1), 2);
        assert_eq!(size, 2);
        let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let (w, m) = max_weight_matching_exhaustive(4, |u, v| path.has_edge(u, v).then_some(if (u, v) == (1, 2) { 5 } else { 3 }), 2);
        assert_eq!((w, m), (6, vec![(0, 1), (2, 3)]));
    }

    #[test]
    fn events_on_empty_graph() {
        let params = GnpParams::new(8, 0.3, 1.0).unwrap();
        let g = Graph::empty(8);
        let f = detect_events(&g, &params);
        assert!(!f.e1.holds && !f.e2.holds && !f.e3.holds && !f.e4.holds);
        assert!(f.all_exact());
        assert!(f.witnesses_valid(&g, &params));
    }

    #[test]
    fn events_on_k6() {
        let params = GnpParams::new(6, 0.1, 1.0).unwrap();
        let g = Graph::complete(6);
        let f = detect_events(&g, &params);
        assert!(f.e3.holds);
        assert_eq!(f.e3.value, 6.0);
        assert!((f.e3.threshold - 0.6 * 10f64.ln()).abs() < 1e-12);
        assert!(f.e4.holds);
        assert_eq!(f.e4.value, 10.0);
        assert!((f.e4.threshold - 7.0 * 10f64.ln() * 0.36).abs() < 1e-12);
        assert!(f.witnesses_valid(&g, &params));
    }

    #[test]
    fn large_graph_uses_certificates() {
        let params = GnpParams::new(14, 0.5, 0.1).unwrap();
        let g = Graph::complete(14);
        let f = detect_events(&g, &params);
        // Every edge of K14 lies in 12 triangles, far above eps*ell*n*p.
        assert!(f.e1.holds || f.e1.exactness == Exactness::HeuristicLowerBound);
        assert!(f.witnesses_valid(&g, &params));
    }
}
