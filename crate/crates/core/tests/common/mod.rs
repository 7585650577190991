//! Independent oracles shared by the integration tests and the acceptance
//! runner. Everything here is written from the definitions, without the
//! library's fast paths.
#![allow(dead_code)]

use tritail::Graph;

pub fn triangles(g: &Graph) -> u64 {
    let n = g.n();
    let mut t = 0;
    for a in 0..n {
        for b in a + 1..n {
            if !g.has_edge(a, b) {
                continue;
            }
            for c in b + 1..n {
                if g.has_edge(a, c) && g.has_edge(b, c) {
                    t += 1;
                }
            }
        }
    }
    t
}

pub fn common(g: &Graph, u: usize, v: usize) -> u64 {
    (0..g.n())
        .filter(|&w| w != u && w != v && g.has_edge(u, w) && g.has_edge(v, w))
        .count() as u64
}

pub fn degree(g: &Graph, u: usize) -> u64 {
    (0..g.n()).filter(|&w| w != u && g.has_edge(u, w)).count() as u64
}

/// Thresholds for good edges (`t_uv < edge`) and good vertices (`deg < vertex`).
#[derive(Clone, Copy, Debug)]
pub struct Thresholds {
    pub edge: f64,
    pub vertex: f64,
}

impl Thresholds {
    pub fn new(n: usize, p: f64, epsilon: f64, vertex_constant: f64) -> Self {
        let np = n as f64 * p;
        Self {
            edge: epsilon * np / (1.0 / p).ln(),
            vertex: vertex_constant * np,
        }
    }

    pub fn bad_edge(&self, g: &Graph, u: usize, v: usize) -> bool {
        g.has_edge(u, v) && common(g, u, v) as f64 >= self.edge
    }

    pub fn good_edge(&self, g: &Graph, u: usize, v: usize) -> bool {
        g.has_edge(u, v) && (common(g, u, v) as f64) < self.edge
    }

    pub fn bad_vertex(&self, g: &Graph, u: usize) -> bool {
        degree(g, u) as f64 >= self.vertex
    }
}

/// `[T, T', T0, T1, T2, T3, T_good_vertices]`.
pub fn split(g: &Graph, th: &Thresholds) -> [u64; 7] {
    let n = g.n();
    let mut out = [0u64; 7];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if !(g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c)) {
                    continue;
                }
                out[0] += 1;
                let all_good = th.good_edge(g, a, b) && th.good_edge(g, a, c) && th.good_edge(g, b, c);
                let bad_v = [a, b, c].iter().filter(|&&x| th.bad_vertex(g, x)).count();
                if all_good {
                    out[1] += 1;
                }
                if bad_v == 0 {
                    out[6] += 1;
                    if !all_good {
                        out[2] += 1;
                    }
                } else {
                    out[2 + bad_v] += 1;
                }
            }
        }
    }
    out
}

/// `P(Bin(n, p) = k)` for every `k`, from log binomial coefficients.
pub fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            let log_c: f64 = (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum();
            (log_c + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp()
        })
        .collect()
}

pub fn choose(a: u64, b: u64) -> u128 {
    if b > a {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..b {
        r = r * (a - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Graph on `n` vertices whose pair `k` (lexicographic) is present iff bit
/// `k` of `mask` is set.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut g = Graph::empty(n);
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if (mask >> k) & 1 == 1 {
                g.insert(u, v);
            }
            k += 1;
        }
    }
    g
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub fn mask_weight(p: f64, mask: u64, pairs: usize) -> f64 {
    let e = mask.count_ones() as i32;
    p.powi(e) * (1.0 - p).powi(pairs as i32 - e)
}

/// `P(T >= t)` by brute force over all labeled graphs.
pub fn exact_tail(n: usize, p: f64, t: f64) -> f64 {
    let pairs = pair_count(n);
    (0..1u64 << pairs)
        .filter(|&m| triangles(&graph_from_mask(n, m)) as f64 >= t)
        .map(|m| mask_weight(p, m, pairs))
        .sum()
}

/// Every matching of the complete graph on `n` vertices.
pub fn all_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(free: u32, n: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        out.push(cur.clone());
        // Extend only with pairs after the last one, so each set appears once.
        let start = cur.last().map_or(0, |&(u, _)| u + 1);
        for u in start..n {
            if free & (1 << u) == 0 {
                continue;
            }
            for v in u + 1..n {
                if free & (1 << v) == 0 {
                    continue;
                }
                cur.push((u, v));
                go(free & !(1 << u) & !(1 << v), n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go((1u32 << n) - 1, n, &mut Vec::new(), &mut out);
    out
}

/// The localized value for triplet `t` relative to `center`, from the
/// definition.
pub fn x_loc(g: &Graph, th: &Thresholds, center: [usize; 3], t: [usize; 3]) -> bool {
    let shared: Vec<usize> = t.iter().copied().filter(|a| center.contains(a)).collect();
    let x_of = |[a, b, c]: [usize; 3]| th.good_edge(g, a, b) && th.good_edge(g, a, c) && th.good_edge(g, b, c);
    match shared.len() {
        0 => x_of(t),
        1 => {
            let x = shared[0];
            let outer: Vec<usize> = t.iter().copied().filter(|&a| a != x).collect();
            let inner: Vec<usize> = center.iter().copied().filter(|&a| a != x).collect();
            let (y, z) = (outer[0], outer[1]);
            let (v, w) = (inner[0], inner[1]);
            let load = |y: usize| {
                let n_y = g.has_edge(y, v) as usize + g.has_edge(y, w) as usize;
                let t_y = (0..g.n())
                    .filter(|&r| ![x, y, v, w].contains(&r))
                    .filter(|&r| g.has_edge(x, y) && g.has_edge(x, r) && g.has_edge(y, r))
                    .count();
                (n_y + t_y) as f64
            };
            g.has_edge(x, y)
                && g.has_edge(x, z)
                && g.has_edge(y, z)
                && th.good_edge(g, y, z)
                && load(y) < th.edge
                && load(z) < th.edge
        }
        _ => false,
    }
}
