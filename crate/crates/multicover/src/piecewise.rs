//! Piecewise-linear curves over bucket prefix sums, and sparse convex
//! envelopes of them: an envelope keeps an exact leading piece and then lets
//! successive breakpoints grow by a geometric value budget, so its size
//! depends on the weight spread rather than the bucket size.

use crate::error::{Error, Result};

/// Slack for accepting an evaluation point just outside the domain.
const DOMAIN_TOL: f64 = 1e-9;
/// Adjacent pieces whose slopes differ by at most this merge into one.
const COLLINEAR_TOL: f64 = 1e-12;

/// A continuous piecewise-linear function given by breakpoints and values.
/// Breakpoints are strictly increasing and values never decrease.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(Error::Argument(format!(
                "piecewise function needs matching non-empty axes, got {} breakpoints and {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        for (b, v) in breakpoints.iter().zip(&values) {
            if !b.is_finite() || !v.is_finite() {
                return Err(Error::Argument("non-finite breakpoint or value".into()));
            }
        }
        for w in breakpoints.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Argument(format!(
                    "breakpoints must increase strictly, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        for w in values.windows(2) {
            if w[1] < w[0] - COLLINEAR_TOL {
                return Err(Error::Argument(format!(
                    "values must be non-decreasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { breakpoints, values })
    }

    /// Interpolates cumulative cost: breakpoint k sits at x = k with value
    /// `prefix[k]`, the cheapest total over k selections from the bucket.
    pub fn from_prefix_sums(prefix: &[f64]) -> Result<Self> {
        let breakpoints = (0..prefix.len()).map(|k| k as f64).collect();
        Self::new(breakpoints, prefix.to_vec())
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn num_pieces(&self) -> usize {
        self.breakpoints.len().saturating_sub(1)
    }

    /// Piece slopes in order. Non-decreasing exactly when the function is
    /// convex, as prefix-sum curves of ascending weights are.
    pub fn slopes(&self) -> Vec<f64> {
        self.breakpoints
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, v)| (v[1] - v[0]) / (x[1] - x[0]))
            .collect()
    }
}

/// A non-decreasing curve that can be evaluated on a closed domain.
pub trait Curve {
    fn domain(&self) -> (f64, f64);

    fn eval(&self, x: f64) -> Result<f64>;

    /// Largest x in `[from, domain end]` with `eval(x) ≤ budget`, located to
    /// within `beta` by bisection. Callers guarantee `eval(from) ≤ budget`.
    fn largest_below(&self, from: f64, budget: f64, beta: f64) -> Result<f64> {
        let (_, hi) = self.domain();
        if self.eval(hi)? <= budget {
            return Ok(hi);
        }
        let mut lo = from;
        let mut hi_x = hi;
        while hi_x - lo > beta {
            let mid = 0.5 * (lo + hi_x);
            if self.eval(mid)? <= budget {
                lo = mid;
            } else {
                hi_x = mid;
            }
        }
        Ok(lo)
    }
}

impl Curve for PiecewiseLinear {
    fn domain(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if x < lo - DOMAIN_TOL || x > hi + DOMAIN_TOL {
            return Err(Error::Domain(format!(
                "x = {x} outside the curve domain [{lo}, {hi}]"
            )));
        }
        let x = x.clamp(lo, hi);
        // First breakpoint strictly beyond x bounds the active piece.
        let k = self.breakpoints.partition_point(|&b| b <= x);
        if k == self.breakpoints.len() {
            return Ok(*self.values.last().unwrap());
        }
        if k == 0 {
            return Ok(self.values[0]);
        }
        let (x0, x1) = (self.breakpoints[k - 1], self.breakpoints[k]);
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        Ok((v1 - v0) / (x1 - x0) * (x - x0) + v0)
    }

    /// Closed form: walk to the piece where the budget is exhausted. The
    /// `beta` tolerance is unused because the answer is exact.
    fn largest_below(&self, from: f64, budget: f64, _beta: f64) -> Result<f64> {
        let (_, hi) = self.domain();
        if *self.values.last().unwrap() <= budget {
            return Ok(hi);
        }
        let k = self.values.partition_point(|&v| v <= budget);
        debug_assert!(k >= 1, "caller guarantees eval(from) <= budget");
        let (x0, x1) = (self.breakpoints[k - 1], self.breakpoints[k]);
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        let slope = (v1 - v0) / (x1 - x0);
        let x = x0 + (budget - v0) / slope;
        Ok(x.clamp(from, x1))
    }
}

/// Adapter exposing an arbitrary non-decreasing function as a curve.
pub struct ClosureCurve<F: Fn(f64) -> f64> {
    pub f: F,
    pub lo: f64,
    pub hi: f64,
}

impl<F: Fn(f64) -> f64> Curve for ClosureCurve<F> {
    fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    fn eval(&self, x: f64) -> Result<f64> {
        if x < self.lo - DOMAIN_TOL || x > self.hi + DOMAIN_TOL {
            return Err(Error::Domain(format!(
                "x = {x} outside the curve domain [{}, {}]",
                self.lo, self.hi
            )));
        }
        let v = (self.f)(x.clamp(self.lo, self.hi));
        if !v.is_finite() {
            return Err(Error::Domain(format!("curve evaluated to {v} at x = {x}")));
        }
        Ok(v)
    }
}

/// Largest x at or after `x_i` where the curve stays within `budget`.
/// Exact on piecewise-linear curves, bisected to `beta` otherwise.
pub fn largest_val(curve: &dyn Curve, x_i: f64, budget: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::Argument(format!("beta must be positive, got {beta}")));
    }
    if !budget.is_finite() {
        return Err(Error::Argument(format!("budget must be finite, got {budget}")));
    }
    let (lo, hi) = curve.domain();
    if x_i < lo - DOMAIN_TOL || x_i > hi + DOMAIN_TOL {
        return Err(Error::Domain(format!(
            "start x = {x_i} outside the curve domain [{lo}, {hi}]"
        )));
    }
    let x_i = x_i.clamp(lo, hi);
    if curve.eval(x_i)? > budget {
        return Err(Error::Domain(format!(
            "curve already exceeds the budget {budget} at x = {x_i}"
        )));
    }
    curve.largest_below(x_i, budget, beta)
}

/// Sparse upper envelope of a non-negative non-decreasing convex curve.
/// Starting from the left edge, each next breakpoint is pushed as far as the
/// value budget `(1 + epsilon) · f(current)` allows; chords between the
/// resulting points stay within a factor `1 + epsilon` above the curve.
pub fn approx_convex(curve: &dyn Curve, epsilon: f64, beta: f64) -> Result<PiecewiseLinear> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Argument(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    let (lo, _) = curve.domain();
    let f_lo = curve.eval(lo)?;
    if f_lo < 0.0 {
        return Err(Error::Domain(format!(
            "curve must be non-negative, got {f_lo} at the left edge"
        )));
    }
    walk_envelope(curve, lo, f_lo, epsilon, beta)
}

/// Budget walk shared by `approx_convex` and `compress`: repeatedly pushes
/// the breakpoint as far as the geometric budget allows.
fn walk_envelope(
    curve: &dyn Curve,
    start: f64,
    f_start: f64,
    epsilon: f64,
    beta: f64,
) -> Result<PiecewiseLinear> {
    let (_, hi) = curve.domain();
    let mut xs = vec![start];
    let mut vs = vec![f_start];
    let mut x = start;
    let mut fx = f_start;
    while x < hi {
        let budget = (1.0 + epsilon) * fx;
        let next = largest_val(curve, x, budget, beta)?.min(hi);
        if next <= x {
            return Err(Error::Domain(format!(
                "no progress at x = {x}: the curve outruns any finite budget step"
            )));
        }
        x = next;
        fx = curve.eval(x)?;
        xs.push(x);
        vs.push(fx);
    }
    PiecewiseLinear::new(xs, vs)
}

/// One linear piece of a compressed curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub length: f64,
    pub slope: f64,
}

/// A bucket cost curve reduced to few pieces: exact up to the first positive
/// prefix value, budget-spaced beyond it, collinear neighbours merged.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedCurve {
    pub envelope: PiecewiseLinear,
    pub segments: Vec<Segment>,
}

/// Compresses the cumulative cost curve of a bucket given its weight prefix
/// sums (`prefix[k]` = cheapest total over k selections, `prefix[0] = 0`).
/// The envelope never drops below the true curve and never exceeds it by
/// more than a factor `1 + epsilon`.
pub fn compress(prefix: &[f64], epsilon: f64) -> Result<CompressedCurve> {
    if prefix.is_empty() || prefix[0] != 0.0 {
        return Err(Error::Argument(
            "prefix sums must start at zero and be non-empty".into(),
        ));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Argument(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    let size = prefix.len() - 1;
    if size == 0 {
        let envelope = PiecewiseLinear::new(vec![0.0], vec![0.0])?;
        return Ok(CompressedCurve { envelope, segments: Vec::new() });
    }
    let curve = PiecewiseLinear::from_prefix_sums(prefix)?;

    // Exact head: a flat run over any zero-weight selections, then the first
    // positively priced piece. The geometric budget needs a positive value
    // to grow from.
    let zeros = prefix.iter().take_while(|&&p| p == 0.0).count() - 1;
    let mut xs = vec![0.0];
    let mut vs = vec![0.0];
    if zeros > 0 {
        xs.push(zeros as f64);
        vs.push(0.0);
    }
    if zeros < size {
        let first = zeros + 1;
        xs.push(first as f64);
        vs.push(prefix[first]);
        // Budget walk over the remainder. When the budget runs out inside
        // the linear piece the walk is standing on, the breakpoint extends
        // to that piece's end: the chord is collinear with the curve there,
        // so the extension costs no accuracy, while the value still grows by
        // at least the (1 + epsilon) factor per step. Without it, a tiny
        // epsilon would scatter breakpoints microscopically instead of
        // converging to the exact curve.
        let end = size as f64;
        let mut x = first as f64;
        let mut fx = prefix[first];
        while x < end {
            let budget = (1.0 + epsilon) * fx;
            let by_budget = largest_val(&curve, x, budget, 1e-9)?;
            let piece_end = x.floor() + 1.0;
            x = by_budget.max(piece_end).min(end);
            fx = curve.eval(x)?;
            xs.push(x);
            vs.push(fx);
        }
    }

    let (xs, vs) = merge_collinear(xs, vs);
    let envelope = PiecewiseLinear::new(xs, vs)?;
    let segments = envelope
        .breakpoints()
        .windows(2)
        .zip(envelope.values().windows(2))
        .map(|(x, v)| Segment {
            length: x[1] - x[0],
            slope: (v[1] - v[0]) / (x[1] - x[0]),
        })
        .collect();
    Ok(CompressedCurve { envelope, segments })
}

fn merge_collinear(xs: Vec<f64>, vs: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    if xs.len() < 3 {
        return (xs, vs);
    }
    let mut out_x = vec![xs[0]];
    let mut out_v = vec![vs[0]];
    for k in 1..xs.len() {
        if out_x.len() >= 2 {
            let px = out_x[out_x.len() - 2];
            let pv = out_v[out_v.len() - 2];
            let lx = out_x[out_x.len() - 1];
            let lv = out_v[out_v.len() - 1];
            let s_prev = (lv - pv) / (lx - px);
            let s_next = (vs[k] - lv) / (xs[k] - lx);
            if (s_next - s_prev).abs() <= COLLINEAR_TOL {
                out_x.pop();
                out_v.pop();
            }
        }
        out_x.push(xs[k]);
        out_v.push(vs[k]);
    }
    (out_x, out_v)
}
