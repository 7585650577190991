//! The localized family behind the tail bound for triangles with all good
//! edges, and checkers for the four conditions of the concentration theorem.
//!
//! Index set: all triplets `xyz`. For a fixed center `uvw`:
//!
//! * `X_xyz`  = 1 iff `xyz` is a triangle with three good edges;
//! * `X'_xyz` = `Y_xyz`, the triangle indicator;
//! * `X_xyz(uvw)`:
//!   - triplets disjoint from the center: `X_xyz`;
//!   - triplets sharing exactly one vertex `x` with the center (the other
//!     center vertices are `v, w`): `Y_xyz * Z_yz * E_y * E_z`, where
//!     `E_y = 1{N_y + T_y < eps ell n p}`, `T_y` counts triangles `xyr` with
//!     `r` outside `{v, w}` and `N_y` counts neighbours of `y` in `{v, w}`;
//!   - triplets sharing two or more vertices: 0.
//!
//! None of the localized values reads the center's own three edges, which is
//! what [`check_independence`] certifies by exhaustive edge flipping.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{choose2, edge_triangle_counts, enumerate_graphs, GnpParams, Graph, PairCounts};

/// Largest `n` for which [`check_independence`] enumerates the joint law.
pub const INDEPENDENCE_MAX_N: usize = 5;

pub type Triplet = [usize; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Overlap {
    /// Shares no vertex with the center.
    Disjoint,
    /// Shares exactly one vertex.
    One,
    /// Shares two or three vertices.
    TwoOrMore,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalizedFamily {
    pub center: Triplet,
    /// All triplets in lexicographic order; the vectors below are indexed alike.
    pub triplets: Vec<Triplet>,
    pub overlap: Vec<Overlap>,
    pub x_vals: Vec<u8>,
    pub x_prime_vals: Vec<u8>,
    pub x_loc_vals: Vec<u8>,
    /// `3 eps ell n p`.
    pub a_const: f64,
}

impl LocalizedFamily {
    pub fn center_index(&self) -> usize {
        self.triplets.iter().position(|t| *t == self.center).expect("center is a triplet")
    }

    pub fn sum_x(&self) -> u64 {
        self.x_vals.iter().map(|&x| x as u64).sum()
    }

    pub fn sum_x_loc(&self) -> u64 {
        self.x_loc_vals.iter().map(|&x| x as u64).sum()
    }
}

pub fn all_triplets(n: usize) -> Vec<Triplet> {
    let mut out = Vec::with_capacity(crate::graph::choose3(n));
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn validate_center(n: usize, center: Triplet) -> Result<Triplet> {
    let mut c = center;
    c.sort_unstable();
    for &x in &c {
        if x >= n {
            return Err(Error::VertexOutOfRange { vertex: x, n });
        }
    }
    if c[0] == c[1] || c[1] == c[2] {
        return Err(invalid("center", format!("{center:?} does not have three distinct vertices")));
    }
    Ok(c)
}

pub fn build_localized(g: &Graph, params: &GnpParams, center: Triplet) -> Result<LocalizedFamily> {
    let center = validate_center(g.n(), center)?;
    Ok(Builder::new(g, params).family(center))
}

/// Shared per-graph state for building families around many centers.
struct Builder<'a> {
    g: &'a Graph,
    counts: PairCounts,
    threshold: f64,
    a_const: f64,
    triplets: Vec<Triplet>,
}

impl<'a> Builder<'a> {
    fn new(g: &'a Graph, params: &GnpParams) -> Self {
        Self {
            g,
            counts: edge_triangle_counts(g),
            threshold: params.edge_threshold,
            a_const: 3.0 * params.edge_threshold,
            triplets: all_triplets(g.n()),
        }
    }

    #[inline]
    fn good(&self, a: usize, b: usize) -> bool {
        self.g.has_edge(a, b) && (self.counts.get(a, b) as f64) < self.threshold
    }

    #[inline]
    fn triangle(&self, [a, b, c]: Triplet) -> bool {
        self.g.has_edge(a, b) && self.g.has_edge(b, c) && self.g.has_edge(a, c)
    }

    fn x(&self, [a, b, c]: Triplet) -> bool {
        self.good(a, b) && self.good(b, c) && self.good(a, c)
    }

    /// `N_y + T_y` for shared vertex `x`, outer vertex `y` and the center's
    /// other vertices `v, w`.
    fn local_load(&self, x: usize, y: usize, v: usize, w: usize) -> usize {
        let n_y = self.g.has_edge(y, v) as usize + self.g.has_edge(y, w) as usize;
        let t_y = if self.g.has_edge(x, y) {
            self.g
                .neighbors(x)
                .filter(|&r| r != y && r != v && r != w && self.g.has_edge(y, r))
                .count()
        } else {
            0
        };
        n_y + t_y
    }

    fn localized(&self, t: Triplet, center: Triplet, overlap: Overlap) -> bool {
        match overlap {
            Overlap::Disjoint => self.x(t),
            Overlap::TwoOrMore => false,
            Overlap::One => {
                let x = *t.iter().find(|a| center.contains(a)).unwrap();
                let [y, z] = others(t, x);
                let [v, w] = others(center, x);
                self.triangle(t)
                    && self.good(y, z)
                    && (self.local_load(x, y, v, w) as f64) < self.threshold
                    && (self.local_load(x, z, v, w) as f64) < self.threshold
            }
        }
    }

    fn family(&self, center: Triplet) -> LocalizedFamily {
        let m = self.triplets.len();
        let mut overlap = Vec::with_capacity(m);
        let mut x_vals = Vec::with_capacity(m);
        let mut x_prime_vals = Vec::with_capacity(m);
        let mut x_loc_vals = Vec::with_capacity(m);
        for &t in &self.triplets {
            let o = overlap_of(t, center);
            overlap.push(o);
            x_vals.push(self.x(t) as u8);
            x_prime_vals.push(self.triangle(t) as u8);
            x_loc_vals.push(self.localized(t, center, o) as u8);
        }
        LocalizedFamily {
            center,
            triplets: self.triplets.clone(),
            overlap,
            x_vals,
            x_prime_vals,
            x_loc_vals,
            a_const: self.a_const,
        }
    }
}

fn others(t: Triplet, x: usize) -> [usize; 2] {
    let mut out = [0; 2];
    let mut i = 0;
    for &a in &t {
        if a != x {
            out[i] = a;
            i += 1;
        }
    }
    out
}

pub fn overlap_of(t: Triplet, center: Triplet) -> Overlap {
    match t.iter().filter(|a| center.contains(a)).count() {
        0 => Overlap::Disjoint,
        1 => Overlap::One,
        _ => Overlap::TwoOrMore,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub center: Triplet,
    pub a_const: f64,
    pub x_center: bool,
    /// `X <= X'` pointwise.
    pub cond_a: bool,
    /// `X_loc <= X` pointwise.
    pub cond_c: bool,
    /// `sum X <= a + sum X_loc` whenever `X_center = 1`.
    pub cond_d: bool,
    pub sum_x: u64,
    pub sum_x_loc: u64,
    /// Triangles sharing at least two vertices with the center.
    pub overlapping_triangles: u64,
    /// `overlapping_triangles <= a` whenever `X_center = 1`.
    pub overlap_bound_holds: bool,
    /// For every one-vertex-overlap triangle `xyz`: `t_xy <= T_y + N_y`
    /// (and likewise for `xz`).
    pub edge_load_bound_holds: bool,
}

impl ConditionReport {
    pub fn all_hold(&self) -> bool {
        self.cond_a && self.cond_c && self.cond_d && self.overlap_bound_holds && self.edge_load_bound_holds
    }
}

pub fn check_conditions(g: &Graph, params: &GnpParams, center: Triplet) -> Result<ConditionReport> {
    let center = validate_center(g.n(), center)?;
    let b = Builder::new(g, params);
    Ok(conditions_for(&b, center))
}

fn conditions_for(b: &Builder<'_>, center: Triplet) -> ConditionReport {
    let fam = b.family(center);
    let x_center = b.x(center);
    let cond_a = fam.x_vals.iter().zip(&fam.x_prime_vals).all(|(x, xp)| x <= xp);
    let cond_c = fam.x_loc_vals.iter().zip(&fam.x_vals).all(|(l, x)| l <= x);
    let sum_x = fam.sum_x();
    let sum_x_loc = fam.sum_x_loc();
    let cond_d = !x_center || sum_x as f64 <= fam.a_const + sum_x_loc as f64;
    let overlapping_triangles = fam
        .triplets
        .iter()
        .zip(&fam.overlap)
        .filter(|&(&t, &o)| o == Overlap::TwoOrMore && b.triangle(t))
        .count() as u64;
    let overlap_bound_holds = !x_center || overlapping_triangles as f64 <= fam.a_const;
    let edge_load_bound_holds = fam.triplets.iter().zip(&fam.overlap).all(|(&t, &o)| {
        if o != Overlap::One || !b.triangle(t) {
            return true;
        }
        let x = *t.iter().find(|a| center.contains(a)).unwrap();
        let [y, z] = others(t, x);
        let [v, w] = others(center, x);
        b.counts.get(x, y) as usize <= b.local_load(x, y, v, w)
            && b.counts.get(x, z) as usize <= b.local_load(x, z, v, w)
    });
    ConditionReport {
        center,
        a_const: fam.a_const,
        x_center,
        cond_a,
        cond_c,
        cond_d,
        sum_x,
        sum_x_loc,
        overlapping_triangles,
        overlap_bound_holds,
        edge_load_bound_holds,
    }
}

/// Condition reports for every center of `g`.
pub fn check_all_centers(g: &Graph, params: &GnpParams) -> Vec<ConditionReport> {
    let b = Builder::new(g, params);
    b.triplets.iter().map(|&c| conditions_for(&b, c)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub n: usize,
    pub p: f64,
    pub epsilon: f64,
    pub center: Triplet,
    /// `max_{b,s} |P(X' = b, S = s) - P(X' = b) P(S = s)|`.
    pub max_gap: f64,
    /// Graphs where flipping a center edge changed some localized value.
    pub flip_changes: u64,
    pub graphs: u64,
    /// `joint[b][s] = P(X'_center = b, S = s)`.
    pub joint: [Vec<f64>; 2],
}

/// Exact joint law of `(X'_center, sum of localized values)` by enumeration,
/// plus the edge-flip test on every enumerated graph.
pub fn check_independence(n: usize, p: f64, epsilon: f64, center: Triplet) -> Result<IndependenceReport> {
    if n > INDEPENDENCE_MAX_N {
        return Err(Error::EnumerationTooLarge {
            n,
            cap: INDEPENDENCE_MAX_N,
        });
    }
    let params = GnpParams::new(n, p, epsilon)?;
    let center = validate_center(n, center)?;
    let en = enumerate_graphs(n)?;
    let pairs = choose2(n);
    let max_s = crate::graph::choose3(n);
    let center_edges = [(center[0], center[1]), (center[1], center[2]), (center[0], center[2])];

    // counts[e][b][s], exact integers.
    let per_graph: Vec<(usize, usize, usize, bool)> = (0..en.total())
        .into_par_iter()
        .map(|idx| {
            let item = en.graph_at(idx);
            let b = Builder::new(&item.graph, &params);
            let fam = b.family(center);
            let xp = fam.x_prime_vals[fam.center_index()] as usize;
            let s = fam.sum_x_loc() as usize;
            let mut changed = false;
            for &(u, v) in &center_edges {
                let mut flipped = item.graph.clone();
                flipped.toggle(u, v);
                let fb = Builder::new(&flipped, &params);
                if fb.family(center).x_loc_vals != fam.x_loc_vals {
                    changed = true;
                }
            }
            (item.edges, xp, s, changed)
        })
        .collect();

    let mut counts = vec![[vec![0u64; max_s + 1], vec![0u64; max_s + 1]]; pairs + 1];
    let mut flip_changes = 0;
    for &(e, b, s, changed) in &per_graph {
        counts[e][b][s] += 1;
        flip_changes += changed as u64;
    }
    let mut joint = [vec![0.0; max_s + 1], vec![0.0; max_s + 1]];
    for (e, row) in counts.iter().enumerate() {
        let w = crate::graph::edge_count_weight(p, e, pairs);
        for b in 0..2 {
            for s in 0..=max_s {
                if row[b][s] > 0 {
                    joint[b][s] += row[b][s] as f64 * w;
                }
            }
        }
    }
    let pb: Vec<f64> = (0..2).map(|b| joint[b].iter().sum()).collect();
    let ps: Vec<f64> = (0..=max_s).map(|s| joint[0][s] + joint[1][s]).collect();
    let mut max_gap = 0.0f64;
    for b in 0..2 {
        for s in 0..=max_s {
            max_gap = max_gap.max((joint[b][s] - pb[b] * ps[s]).abs());
        }
    }
    Ok(IndependenceReport {
        n,
        p,
        epsilon,
        center,
        max_gap,
        flip_changes,
        graphs: en.total(),
        joint,
    })
}
