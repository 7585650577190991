//! Closed-form tail bounds and the auxiliary inequalities they rest on.
//!
//! Every logarithm here is natural. The exponent of a bound is always kept
//! unclamped in [`BoundResult::log_bound`]; only `prob_bound` is clamped to 1.
//!
//! The central inequality: for a sum `X` of nonnegative variables admitting
//! a localized family with constant `a` and mean sum `lambda`,
//!
//! ```text
//! P(X >= t) <= exp(-(t/a) (ln(t/lambda) - 1 + lambda/t))     t >= lambda   (sharp)
//!           <= exp(-(t/a)  ln(t/(3 lambda)))                  t > 0         (weak)
//! ```
//!
//! The binomial, matching and degree-sum tails are all instances of the weak
//! form with particular `(lambda, a)`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{choose3, expected_triangles};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub t: f64,
    pub lambda: f64,
    pub a: f64,
}

impl BoundParams {
    pub fn new(t: f64, lambda: f64, a: f64) -> Result<Self> {
        positive("t", t)?;
        positive("lambda", lambda)?;
        positive("a", a)?;
        Ok(Self { t, lambda, a })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundForm {
    Sharp,
    Weak,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    /// Natural log of the bound before clamping.
    pub log_bound: f64,
    /// `min(1, exp(log_bound))`.
    pub prob_bound: f64,
    pub form: BoundForm,
    pub params: BoundParams,
    /// The bound carries no information: it is `>= 1`, or the sharp form was
    /// asked for below its domain `t >= lambda`.
    pub trivial: bool,
}

impl BoundResult {
    fn from_exponent(log_bound: f64, form: BoundForm, params: BoundParams) -> Self {
        Self {
            log_bound,
            prob_bound: log_bound.min(0.0).exp(),
            form,
            params,
            trivial: log_bound >= 0.0,
        }
    }
}

fn positive(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("{x} must be positive and finite")))
    }
}

fn probability(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("{x} is not in the open interval (0, 1)")))
    }
}

pub fn sharp_exponent(bp: &BoundParams) -> f64 {
    let r = bp.t / bp.lambda;
    -(bp.t / bp.a) * (r.ln() - 1.0 + 1.0 / r)
}

pub fn weak_exponent(bp: &BoundParams) -> f64 {
    -(bp.t / bp.a) * (bp.t / (3.0 * bp.lambda)).ln()
}

pub fn sharp_bound(bp: BoundParams) -> BoundResult {
    if bp.t < bp.lambda {
        return BoundResult {
            log_bound: 0.0,
            prob_bound: 1.0,
            form: BoundForm::Sharp,
            params: bp,
            trivial: true,
        };
    }
    BoundResult::from_exponent(sharp_exponent(&bp), BoundForm::Sharp, bp)
}

pub fn weak_bound(bp: BoundParams) -> BoundResult {
    BoundResult::from_exponent(weak_exponent(&bp), BoundForm::Weak, bp)
}

/// Both forms of the localized concentration bound.
pub fn concentration_bound(bp: BoundParams) -> Result<(BoundResult, BoundResult)> {
    let bp = BoundParams::new(bp.t, bp.lambda, bp.a)?;
    Ok((sharp_bound(bp), weak_bound(bp)))
}

/// `P(X >= t) <= exp(-t ln(t / (3 lambda)))` for `X` binomial with mean `lambda`.
pub fn binomial_tail_bound(t: f64, lambda: f64) -> Result<BoundResult> {
    Ok(weak_bound(BoundParams::new(t, lambda, 1.0)?))
}

/// Tail of `t(A)` for a matching `A` of size `m`:
/// `exp(-(t/3) ln(t / (3 m n p^2)))`, i.e. the weak form with
/// `lambda = m n p^2` and `a = 3`.
pub fn matching_tail_bound(t: f64, m: usize, n: usize, p: f64) -> Result<BoundResult> {
    if m == 0 {
        return Err(invalid("m", "matching size must be at least 1"));
    }
    if n < 2 {
        return Err(invalid("n", "need at least two vertices"));
    }
    probability("p", p)?;
    let lambda = m as f64 * n as f64 * p * p;
    Ok(weak_bound(BoundParams::new(t, lambda, 3.0)?))
}

/// Tail of the degree sum `d(A)` for `|A| = m`:
/// `exp(-(t/2) ln(t / (6 n m p)))`, i.e. the weak form with
/// `lambda = 2 n m p` and `a = 2`.
pub fn degree_tail_bound(t: f64, n: usize, m: usize, p: f64) -> Result<BoundResult> {
    if m == 0 {
        return Err(invalid("m", "set size must be at least 1"));
    }
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    probability("p", p)?;
    let lambda = 2.0 * n as f64 * m as f64 * p;
    Ok(weak_bound(BoundParams::new(t, lambda, 2.0)?))
}

/// `I_p(x) = (x/2) ln(x/p) + ((1-x)/2) ln((1-x)/(1-p))`.
pub fn rate_function(x: f64, p: f64) -> Result<f64> {
    probability("x", x)?;
    probability("p", p)?;
    Ok(0.5 * x * (x / p).ln() + 0.5 * (1.0 - x) * ((1.0 - x) / (1.0 - p)).ln())
}

/// Minimum number of edges of a graph with `r` triangles: `(6r)^(2/3) / 2`.
pub fn min_edges_for_triangles(r: f64) -> Result<f64> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(invalid("r", format!("{r} must be nonnegative and finite")));
    }
    Ok(0.5 * (6.0 * r).powf(2.0 / 3.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixInequality {
    /// `sum_ij M_ij^2`
    pub lhs: f64,
    /// `|sum_ijk M_ij M_jk M_ki|^(2/3)`
    pub rhs: f64,
    pub holds: bool,
}

/// Relative slack granted to `lhs >= rhs` for rounding.
pub const MATRIX_RELATIVE_TOLERANCE: f64 = 1e-9;

pub fn symmetric_matrix_inequality(m: &[Vec<f64>]) -> Result<MatrixInequality> {
    let k = m.len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != k {
            return Err(invalid("M", format!("row {i} has length {} (expected {k})", row.len())));
        }
    }
    for i in 0..k {
        for j in (i + 1)..k {
            if m[i][j] != m[j][i] {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    let lhs: f64 = m.iter().flatten().map(|x| x * x).sum();
    // trace(M^3) via the square M^2.
    let mut sq = vec![vec![0.0; k]; k];
    for i in 0..k {
        for l in 0..k {
            let mil = m[i][l];
            if mil == 0.0 {
                continue;
            }
            for j in 0..k {
                sq[i][j] += mil * m[l][j];
            }
        }
    }
    let mut trace = 0.0;
    for i in 0..k {
        for j in 0..k {
            trace += sq[i][j] * m[j][i];
        }
    }
    let rhs = trace.abs().powf(2.0 / 3.0);
    let holds = lhs >= rhs - MATRIX_RELATIVE_TOLERANCE * rhs.max(lhs);
    Ok(MatrixInequality { lhs, rhs, holds })
}

/// `e^(b + b ln(a/b)) = (a e / b)^b`, an upper bound on `C(a, b)`.
pub fn binomial_coefficient_bound(a: u64, b: u64) -> Result<f64> {
    if b < 1 || b >= a {
        return Err(invalid("b", format!("need 1 <= b < a, got a = {a}, b = {b}")));
    }
    let (a, b) = (a as f64, b as f64);
    Ok((b + b * (a / b).ln()).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    /// `exp(-C1 n^2 p^2 ln(1/p))`
    pub lower: f64,
    /// `exp(-C2 n^2 p^2)`
    pub upper_kimvu: f64,
    /// `exp(-C3 n^2 p^2 ln(1/p))`
    pub upper_main: f64,
    pub log_lower: f64,
    pub log_upper_kimvu: f64,
    pub log_upper_main: f64,
}

/// Exponential envelopes of the upper tail for caller-supplied constants.
///
/// The constants depend on `epsilon` in an unspecified way, so they are
/// inputs here; `epsilon` is only validated.
pub fn theorem_envelope(n: usize, p: f64, epsilon: f64, c1: f64, c2: f64, c3: f64) -> Result<Envelope> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    probability("p", p)?;
    positive("epsilon", epsilon)?;
    positive("C1", c1)?;
    positive("C2", c2)?;
    positive("C3", c3)?;
    let n2p2 = (n as f64 * p).powi(2);
    let l = (1.0 / p).ln();
    let log_lower = -c1 * n2p2 * l;
    let log_upper_kimvu = -c2 * n2p2;
    let log_upper_main = -c3 * n2p2 * l;
    Ok(Envelope {
        lower: log_lower.exp(),
        upper_kimvu: log_upper_kimvu.exp(),
        upper_main: log_upper_main.exp(),
        log_lower,
        log_upper_kimvu,
        log_upper_main,
    })
}

/// The quantities behind the tail bound for triangles with all good edges.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AllGoodEdgesConstant {
    /// `E(T) = C(n,3) p^3`.
    pub lambda: f64,
    /// `(lambda + epsilon n^3 p^3) / lambda`.
    pub c: f64,
    /// `ln c - 1 + 1/c`.
    pub factor: f64,
    /// Sharp bound at `t = lambda + epsilon n^3 p^3` with `a = 3 epsilon ell n p`.
    pub bound: BoundResult,
}

pub fn all_good_edges_constant(n: usize, p: f64, epsilon: f64) -> Result<AllGoodEdgesConstant> {
    if n < 3 {
        return Err(invalid("n", "need at least three vertices"));
    }
    probability("p", p)?;
    positive("epsilon", epsilon)?;
    let lambda = expected_triangles(n, p);
    let excess = epsilon * (n as f64 * p).powi(3);
    let c = (lambda + excess) / lambda;
    let factor = c.ln() - 1.0 + 1.0 / c;
    let a = 3.0 * epsilon * n as f64 * p / (1.0 / p).ln();
    let bound = sharp_bound(BoundParams::new(lambda + excess, lambda, a)?);
    Ok(AllGoodEdgesConstant {
        lambda,
        c,
        factor,
        bound,
    })
}

/// `(t, lambda, a)` for triangles with one bad vertex drawn from a fixed
/// set of size at most `L n p`: `t = eps n^3 p^3`, `lambda = n^2 (L n p) p^3`,
/// `a = 21 n p`.
pub fn one_bad_vertex_params(n: usize, p: f64, epsilon: f64) -> Result<BoundParams> {
    probability("p", p)?;
    positive("epsilon", epsilon)?;
    let (nf, l) = (n as f64, (1.0 / p).ln());
    BoundParams::new(epsilon * (nf * p).powi(3), nf * nf * (l * nf * p) * p.powi(3), 21.0 * nf * p)
}

/// `(t, lambda, a)` for triangles with two bad vertices from a fixed set:
/// `t = eps n^3 p^3`, `lambda = n (L n p)^2 p^2`, `a = 14 n p`.
pub fn two_bad_vertices_params(n: usize, p: f64, epsilon: f64) -> Result<BoundParams> {
    probability("p", p)?;
    positive("epsilon", epsilon)?;
    let (nf, l) = (n as f64, (1.0 / p).ln());
    BoundParams::new(epsilon * (nf * p).powi(3), nf * (l * nf * p).powi(2) * p * p, 14.0 * nf * p)
}

/// Threshold of the combined statement: `E(T) + 19 eps n^3 p^3`.
pub fn combined_threshold(n: usize, p: f64, epsilon: f64) -> f64 {
    expected_triangles(n, p) + 19.0 * epsilon * (n as f64 * p).powi(3)
}

/// Exact `C(n, 3)` as a float, for callers working in bound space.
pub fn triplet_count(n: usize) -> f64 {
    choose3(n) as f64
}
