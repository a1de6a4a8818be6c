//! Exact algebra of compactly supported step functions and piecewise-linear
//! functions on `ℝ`.
//!
//! Convolution of two step functions is a finite sum of trapezoids, one per
//! pair of constant pieces, so the result is piecewise linear with
//! breakpoints at pairwise sums of endpoints; it is assembled here without
//! quadrature. Composition integrals `∫ f∘ψ` reduce per linear piece to the
//! exact antiderivative of `f` via `∫ₐᵇ f(ψ(x)) dx = (Δx/Δy)·∫ f(y) dy`;
//! only black-box `f` fall back to adaptive quadrature.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::convexity::ConvexFn;
use crate::quad;

#[derive(Debug, Error)]
pub enum PiecewiseError {
    #[error("breakpoints must be strictly increasing and finite: {0}")]
    InvalidBreakpoints(String),
    #[error("negative value {value} at piece {index}")]
    NegativeValue { index: usize, value: f64 },
    #[error("expected {expected} values for {breaks} breakpoints, got {got}")]
    LengthMismatch {
        expected: usize,
        breaks: usize,
        got: usize,
    },
    #[error("quadrature tolerance not met: achieved error bound {achieved}, requested {requested}")]
    ToleranceNotMet { achieved: f64, requested: f64 },
}

/// Relative tolerance for fusing nearly coincident breakpoints; pairwise
/// sums of endpoints of symmetric inputs collide and must not create
/// zero-width pieces.
pub const MERGE_REL_TOL: f64 = 1e-12;

/// A nonnegative step function: value `values[i]` on
/// `(breakpoints[i], breakpoints[i+1])`, zero outside the hull.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self, PiecewiseError> {
        if breakpoints.len() != values.len() + 1 && !(breakpoints.is_empty() && values.is_empty()) {
            return Err(PiecewiseError::LengthMismatch {
                expected: breakpoints.len().saturating_sub(1),
                breaks: breakpoints.len(),
                got: values.len(),
            });
        }
        for w in breakpoints.windows(2) {
            if !(w[1] > w[0]) || !w[0].is_finite() || !w[1].is_finite() {
                return Err(PiecewiseError::InvalidBreakpoints(format!(
                    "{} then {}",
                    w[0], w[1]
                )));
            }
        }
        for (i, &v) in values.iter().enumerate() {
            if !(v >= 0.0) {
                return Err(PiecewiseError::NegativeValue { index: i, value: v });
            }
        }
        let mut f = StepFunction {
            breakpoints,
            values,
        };
        f.normalize();
        Ok(f)
    }

    pub fn zero() -> Self {
        StepFunction {
            breakpoints: vec![],
            values: vec![],
        }
    }

    /// `1_(a,b)`.
    pub fn indicator(a: f64, b: f64) -> Self {
        Self::scaled_indicator(a, b, 1.0)
    }

    /// `v·1_(a,b)`.
    pub fn scaled_indicator(a: f64, b: f64, v: f64) -> Self {
        assert!(b > a && v >= 0.0, "need a < b and v >= 0");
        StepFunction {
            breakpoints: vec![a, b],
            values: vec![v],
        }
    }

    /// From disjoint `(left, right, value)` triples in ascending order.
    pub fn from_pieces(pieces: &[(f64, f64, f64)]) -> Result<Self, PiecewiseError> {
        let mut breakpoints = vec![];
        let mut values = vec![];
        for &(l, r, v) in pieces {
            if r <= l {
                continue; // degenerate interval carries no mass
            }
            if let Some(&last) = breakpoints.last() {
                if l > last {
                    values.push(0.0);
                    breakpoints.push(l);
                } else if l < last {
                    return Err(PiecewiseError::InvalidBreakpoints(format!(
                        "piece starting at {l} overlaps previous end {last}"
                    )));
                }
            } else {
                breakpoints.push(l);
            }
            values.push(v);
            breakpoints.push(r);
        }
        Self::new(breakpoints, values)
    }

    /// Merges adjacent equal values, drops zero-value ends.
    fn normalize(&mut self) {
        if self.values.is_empty() {
            self.breakpoints.clear();
            return;
        }
        let mut bp = Vec::with_capacity(self.breakpoints.len());
        let mut vals = Vec::with_capacity(self.values.len());
        bp.push(self.breakpoints[0]);
        for i in 0..self.values.len() {
            if !vals.is_empty() && self.values[i] == *vals.last().unwrap() {
                *bp.last_mut().unwrap() = self.breakpoints[i + 1];
            } else {
                vals.push(self.values[i]);
                bp.push(self.breakpoints[i + 1]);
            }
        }
        while vals.first() == Some(&0.0) {
            vals.remove(0);
            bp.remove(0);
        }
        while vals.last() == Some(&0.0) {
            vals.pop();
            bp.pop();
        }
        if vals.is_empty() {
            bp.clear();
        }
        self.breakpoints = bp;
        self.values = vals;
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(left, right, value)` triples.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(self.values.iter())
            .map(|(w, &v)| (w[0], w[1], v))
    }

    /// Pointwise value; breakpoints (a measure-zero set) report the
    /// right-hand limit.
    pub fn eval(&self, x: f64) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        let idx = self.breakpoints.partition_point(|&b| b <= x);
        if idx == 0 || idx == self.breakpoints.len() {
            0.0
        } else {
            self.values[idx - 1]
        }
    }

    /// Lebesgue measure of `{φ ≠ 0}`.
    pub fn support_measure(&self) -> f64 {
        self.pieces()
            .filter(|&(_, _, v)| v > 0.0)
            .map(|(l, r, _)| r - l)
            .sum()
    }

    /// `∫ φ`.
    pub fn mass(&self) -> f64 {
        self.pieces().map(|(l, r, v)| v * (r - l)).sum()
    }

    /// Lebesgue measure of `{φ > t}`, exact.
    pub fn level_measure(&self, t: f64) -> f64 {
        assert!(t >= 0.0, "level threshold must be nonnegative");
        self.pieces()
            .filter(|&(_, _, v)| v > t)
            .map(|(l, r, _)| r - l)
            .sum()
    }

    /// `(∫ φ^p)^{1/p}`; exact via the power antiderivative.
    pub fn lp_norm(&self, p: f64) -> f64 {
        assert!(p > 0.0, "p must be positive");
        let s: f64 = self
            .pieces()
            .filter(|&(_, _, v)| v > 0.0)
            .map(|(l, r, v)| v.powf(p) * (r - l))
            .sum();
        s.powf(1.0 / p)
    }

    /// `∫ f∘φ` (the hull complement contributes nothing since `f(0) = 0`).
    pub fn compose_integral(&self, f: &ConvexFn) -> f64 {
        self.pieces().map(|(l, r, v)| f.eval(v) * (r - l)).sum()
    }

    pub fn translate(&self, shift: f64) -> StepFunction {
        StepFunction {
            breakpoints: self.breakpoints.iter().map(|b| b + shift).collect(),
            values: self.values.clone(),
        }
    }
}

/// A continuous nonnegative piecewise-linear function: node values `ys`
/// at `xs`, linear in between, zero outside the hull. Convolutions of
/// step functions land here exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, PiecewiseError> {
        if xs.len() != ys.len() {
            return Err(PiecewiseError::LengthMismatch {
                expected: xs.len(),
                breaks: xs.len(),
                got: ys.len(),
            });
        }
        for w in xs.windows(2) {
            if !(w[1] > w[0]) || !w[0].is_finite() || !w[1].is_finite() {
                return Err(PiecewiseError::InvalidBreakpoints(format!(
                    "{} then {}",
                    w[0], w[1]
                )));
            }
        }
        let mut ys = ys;
        for (i, y) in ys.iter_mut().enumerate() {
            if *y < 0.0 {
                if *y > -1e-12 {
                    *y = 0.0; // rounding dust from trapezoid summation
                } else {
                    return Err(PiecewiseError::NegativeValue {
                        index: i,
                        value: *y,
                    });
                }
            }
        }
        let mut f = PiecewiseLinear { xs, ys };
        f.normalize();
        Ok(f)
    }

    pub fn zero() -> Self {
        PiecewiseLinear { xs: vec![], ys: vec![] }
    }

    /// Drops interior nodes that are exactly collinear with their
    /// neighbours and trims zero tails.
    fn normalize(&mut self) {
        if self.xs.len() < 2 {
            if self.ys.iter().all(|&y| y == 0.0) {
                self.xs.clear();
                self.ys.clear();
            }
            return;
        }
        let mut xs = Vec::with_capacity(self.xs.len());
        let mut ys = Vec::with_capacity(self.ys.len());
        for i in 0..self.xs.len() {
            xs.push(self.xs[i]);
            ys.push(self.ys[i]);
            while xs.len() >= 3 {
                let k = xs.len();
                let (x0, y0) = (xs[k - 3], ys[k - 3]);
                let (x1, y1) = (xs[k - 2], ys[k - 2]);
                let (x2, y2) = (xs[k - 1], ys[k - 1]);
                // exact collinearity via cross product
                if (y1 - y0) * (x2 - x0) == (y2 - y0) * (x1 - x0) {
                    xs.remove(k - 2);
                    ys.remove(k - 2);
                } else {
                    break;
                }
            }
        }
        while xs.len() >= 2 && ys[0] == 0.0 && ys[1] == 0.0 {
            xs.remove(0);
            ys.remove(0);
        }
        while xs.len() >= 2 && ys[xs.len() - 1] == 0.0 && ys[xs.len() - 2] == 0.0 {
            xs.pop();
            ys.pop();
        }
        if xs.len() <= 1 && ys.iter().all(|&y| y == 0.0) {
            xs.clear();
            ys.clear();
        }
        self.xs = xs;
        self.ys = ys;
    }

    pub fn is_zero(&self) -> bool {
        self.xs.is_empty() || self.ys.iter().all(|&y| y == 0.0)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.xs.is_empty() {
            return 0.0;
        }
        let n = self.xs.len();
        if x <= self.xs[0] {
            return if x == self.xs[0] { self.ys[0] } else { 0.0 };
        }
        if x >= self.xs[n - 1] {
            return if x == self.xs[n - 1] { self.ys[n - 1] } else { 0.0 };
        }
        let idx = self.xs.partition_point(|&b| b <= x);
        let (x0, x1) = (self.xs[idx - 1], self.xs[idx]);
        let (y0, y1) = (self.ys[idx - 1], self.ys[idx]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// `∫ ψ` (trapezoid rule is exact here).
    pub fn mass(&self) -> f64 {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| 0.5 * (y[0] + y[1]) * (x[1] - x[0]))
            .sum()
    }

    /// Cumulative integral `∫_{x₀}^{x} ψ`, exact; clamps outside the hull.
    pub fn antiderivative_at(&self, x: f64) -> f64 {
        if self.xs.is_empty() || x <= self.xs[0] {
            return 0.0;
        }
        let mut acc = 0.0;
        for i in 1..self.xs.len() {
            let (x0, x1) = (self.xs[i - 1], self.xs[i]);
            let (y0, y1) = (self.ys[i - 1], self.ys[i]);
            if x >= x1 {
                acc += 0.5 * (y0 + y1) * (x1 - x0);
            } else {
                let yx = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
                acc += 0.5 * (y0 + yx) * (x - x0);
                return acc;
            }
        }
        acc
    }

    /// Lebesgue measure of `{ψ > t}`; linear-piece crossings solved in
    /// closed form.
    pub fn level_measure(&self, t: f64) -> f64 {
        assert!(t >= 0.0, "level threshold must be nonnegative");
        let mut acc = 0.0;
        for i in 1..self.xs.len() {
            let w = self.xs[i] - self.xs[i - 1];
            let (lo, hi) = {
                let (a, b) = (self.ys[i - 1], self.ys[i]);
                (a.min(b), a.max(b))
            };
            if hi <= t {
                continue;
            }
            if lo > t || hi == lo {
                acc += w;
            } else {
                acc += w * (hi - t) / (hi - lo);
            }
        }
        acc
    }

    /// Exact `∫ ψ^p` for any `p > 0` via the antiderivative
    /// `y^{p+1}/(p+1)` on each linear piece.
    pub fn power_integral(&self, p: f64) -> f64 {
        assert!(p > 0.0, "p must be positive");
        let mut acc = 0.0;
        for i in 1..self.xs.len() {
            let dx = self.xs[i] - self.xs[i - 1];
            let (y0, y1) = (self.ys[i - 1], self.ys[i]);
            if y0 == y1 {
                if y0 > 0.0 {
                    acc += y0.powf(p) * dx;
                }
            } else {
                acc += dx / (y1 - y0) * (y1.powf(p + 1.0) - y0.powf(p + 1.0)) / (p + 1.0);
            }
        }
        acc
    }

    /// `(∫ ψ^p)^{1/p}`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        self.power_integral(p).powf(1.0 / p)
    }

    pub fn support_measure(&self) -> f64 {
        self.level_measure(0.0)
    }

    /// Largest pointwise difference against `other` over the union of
    /// both node sets (linear functions attain extrema at nodes).
    pub fn sup_diff(&self, other: &PiecewiseLinear) -> f64 {
        let mut worst = 0.0f64;
        for &x in self.xs.iter().chain(other.xs.iter()) {
            worst = worst.max((self.eval(x) - other.eval(x)).abs());
        }
        worst
    }

    pub fn is_even(&self, tol: f64) -> bool {
        self.xs.iter().all(|&x| (self.eval(x) - self.eval(-x)).abs() <= tol)
    }

    pub fn is_nonincreasing_on_nonneg(&self, tol: f64) -> bool {
        let mut prev = self.eval(0.0);
        for &x in self.xs.iter().filter(|&&x| x > 0.0) {
            let y = self.eval(x);
            if y > prev + tol {
                return false;
            }
            prev = y;
        }
        true
    }
}

/// One trapezoid `v·clamp(min(x−s, e−x), 0, rise)`: the convolution of two
/// constant pieces.
#[derive(Clone, Copy, Debug)]
struct Trapezoid {
    start: f64,
    end: f64,
    rise: f64,
    scale: f64,
}

impl Trapezoid {
    fn eval(&self, x: f64) -> f64 {
        let a = (x - self.start).min(self.end - x).min(self.rise);
        if a > 0.0 {
            self.scale * a
        } else {
            0.0
        }
    }

    fn kinks(&self) -> [f64; 4] {
        [
            self.start,
            self.start + self.rise,
            self.end - self.rise,
            self.end,
        ]
    }
}

/// Sums trapezoids exactly on the union of their kink abscissae.
fn sum_trapezoids(traps: &[Trapezoid]) -> PiecewiseLinear {
    if traps.is_empty() {
        return PiecewiseLinear::zero();
    }
    let mut xs: Vec<f64> = traps.iter().flat_map(|t| t.kinks()).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let span = xs[xs.len() - 1] - xs[0];
    let merge_tol = MERGE_REL_TOL * span.max(f64::MIN_POSITIVE);
    xs.dedup_by(|next, kept| (*next - *kept).abs() <= merge_tol);
    let ys: Vec<f64> = xs
        .iter()
        .map(|&x| traps.iter().map(|t| t.eval(x)).sum())
        .collect();
    PiecewiseLinear::new(xs, ys).expect("trapezoid sum is a valid piecewise-linear function")
}

/// Exact convolution of two step functions.
pub fn conv_steps(a: &StepFunction, b: &StepFunction) -> PiecewiseLinear {
    let mut traps = vec![];
    for (al, ar, av) in a.pieces() {
        if av == 0.0 {
            continue;
        }
        for (bl, br, bv) in b.pieces() {
            if bv == 0.0 {
                continue;
            }
            let wa = ar - al;
            let wb = br - bl;
            traps.push(Trapezoid {
                start: al + bl,
                end: ar + br,
                rise: wa.min(wb),
                scale: av * bv,
            });
        }
    }
    sum_trapezoids(&traps)
}

/// The closed form of `1_(−J₁,J₁) * 1_(−J₂,J₂)` as a trapezoid summand,
/// used by the layer-cake route to the rearranged convolution.
pub(crate) fn centered_indicator_trapezoid(j1: f64, j2: f64, weight: f64) -> Option<Trap> {
    if j1 <= 0.0 || j2 <= 0.0 || weight <= 0.0 {
        return None;
    }
    Some(Trap(Trapezoid {
        start: -(j1 + j2),
        end: j1 + j2,
        rise: 2.0 * j1.min(j2),
        scale: weight,
    }))
}

/// Opaque trapezoid handle for [`sum_trapezoid_handles`].
pub(crate) struct Trap(Trapezoid);

pub(crate) fn sum_trapezoid_handles(traps: &[Trap]) -> PiecewiseLinear {
    let inner: Vec<Trapezoid> = traps.iter().map(|t| t.0).collect();
    sum_trapezoids(&inner)
}

/// `∫ f∘ψ` with the integral value and the achieved error bound.
/// Exact (zero bound) whenever `f` has a closed-form antiderivative;
/// otherwise adaptive Gauss-Legendre per linear piece against `tol`.
pub fn integrate_compose_bounded(
    f: &ConvexFn,
    psi: &PiecewiseLinear,
    tol: f64,
) -> Result<(f64, f64), PiecewiseError> {
    if psi.xs.is_empty() {
        return Ok((0.0, 0.0));
    }
    let mut acc = 0.0;
    let mut bound = 0.0;
    let total_width = psi.xs[psi.xs.len() - 1] - psi.xs[0];
    for i in 1..psi.xs.len() {
        let (x0, x1) = (psi.xs[i - 1], psi.xs[i]);
        let (y0, y1) = (psi.ys[i - 1], psi.ys[i]);
        let dx = x1 - x0;
        if y0 == y1 {
            acc += f.eval(y0) * dx;
            continue;
        }
        match (f.antiderivative(y0), f.antiderivative(y1)) {
            (Some(f0), Some(f1)) => {
                acc += dx / (y1 - y0) * (f1 - f0);
            }
            _ => {
                let piece_tol = tol * (dx / total_width).max(1e-3);
                let r = quad::integrate(
                    &|x: f64| f.eval(y0 + (y1 - y0) * (x - x0) / dx),
                    x0,
                    x1,
                    piece_tol,
                );
                acc += r.value;
                bound += r.error_bound;
            }
        }
    }
    if bound > tol {
        return Err(PiecewiseError::ToleranceNotMet {
            achieved: bound,
            requested: tol,
        });
    }
    Ok((acc, bound))
}

/// Default-tolerance (`1e-10` absolute) composition integral.
pub fn integrate_compose(f: &ConvexFn, psi: &PiecewiseLinear) -> Result<f64, PiecewiseError> {
    integrate_compose_bounded(f, psi, 1e-10).map(|(v, _)| v)
}

/// CSV rows `x_left,x_right,value`, one per piece.
pub fn step_to_csv(f: &StepFunction) -> String {
    let mut out = String::from("x_left,x_right,value\n");
    for (l, r, v) in f.pieces() {
        out.push_str(&format!("{l},{r},{v}\n"));
    }
    out
}

/// CSV node list `x,y`.
pub fn piecewise_linear_to_csv(f: &PiecewiseLinear) -> String {
    let mut out = String::from("x,y\n");
    for (x, y) in f.nodes() {
        out.push_str(&format!("{x},{y}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexity::ConvexFn;
    use approx::assert_abs_diff_eq;

    #[test]
    fn indicator_convolution_is_tent() {
        let a = StepFunction::indicator(-1.0, 1.0);
        let tent = conv_steps(&a, &a);
        for x in [-2.5, -2.0, -1.5, -0.25, 0.0, 1.0, 1.99, 2.0, 3.0] {
            let expect = (2.0 - x.abs()).max(0.0);
            assert_abs_diff_eq!(tent.eval(x), expect, epsilon = 1e-14);
        }
        assert!(tent.is_even(1e-14));
        assert!(tent.is_nonincreasing_on_nonneg(1e-14));
    }

    #[test]
    fn narrow_box_is_approximate_identity() {
        let w = 1e-3;
        let delta = StepFunction::scaled_indicator(-w / 2.0, w / 2.0, 1.0 / w);
        let phi = StepFunction::from_pieces(&[(0.0, 1.0, 2.0), (1.0, 3.0, 0.5)]).unwrap();
        let out = conv_steps(&delta, &phi);
        // exact agreement wherever the window sits inside one piece
        for x in [0.3, 0.7, 1.5, 2.5] {
            assert_abs_diff_eq!(out.eval(x), phi.eval(x), epsilon = 1e-12);
        }
    }

    #[test]
    fn section4_pair_closed_form_values() {
        // λ = 2/3, y₁ = 1, y₂ = 3
        let lam: f64 = 2.0 / 3.0;
        let (y1, y2) = (1.0, 3.0);
        let phi1 = StepFunction::scaled_indicator(-1.0, 1.0, 0.5);
        let phi2 = StepFunction::from_pieces(&[
            (-5.0, -3.0, y1),
            (-3.0, -1.0 - 2.0 * lam, y2),
            (-1.0 - 2.0 * lam, -1.0, y1),
            (-1.0, 1.0, y2),
            (1.0, 1.0 + 2.0 * lam, y1),
            (1.0 + 2.0 * lam, 3.0, y2),
            (3.0, 5.0, y1),
        ])
        .unwrap();
        let conv = conv_steps(&phi1, &phi2);
        assert_abs_diff_eq!(conv.eval(0.0), y2, epsilon = 1e-12);
        let plateau = lam * y1 + (1.0 - lam) * y2;
        for x in [2.0 * lam, 1.8, -2.0, 2.0 * lam + 2.0] {
            assert_abs_diff_eq!(conv.eval(x), plateau, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(conv.mass(), phi1.mass() * phi2.mass(), epsilon = 1e-12);
    }

    #[test]
    fn conv_mass_identity_and_commutativity() {
        let a = StepFunction::from_pieces(&[(-2.0, -0.5, 1.5), (0.5, 1.0, 3.0)]).unwrap();
        let b = StepFunction::from_pieces(&[(0.0, 0.25, 2.0), (0.5, 2.0, 0.7)]).unwrap();
        let ab = conv_steps(&a, &b);
        let ba = conv_steps(&b, &a);
        assert_abs_diff_eq!(ab.mass(), a.mass() * b.mass(), epsilon = 1e-13);
        assert_eq!(ab, ba);
    }

    #[test]
    fn integrate_compose_examples() {
        // identity ∘ tent of mass 4
        let tent = conv_steps(
            &StepFunction::indicator(-1.0, 1.0),
            &StepFunction::indicator(-1.0, 1.0),
        );
        let f0 = ConvexFn::hinge(0.0).unwrap();
        assert_abs_diff_eq!(integrate_compose(&f0, &tent).unwrap(), 4.0, epsilon = 1e-13);

        // f_{1/2} on the trapezoid 1_(−.5,.5) * 1_(−1,1)
        let trap = conv_steps(
            &StepFunction::indicator(-0.5, 0.5),
            &StepFunction::indicator(-1.0, 1.0),
        );
        let fh = ConvexFn::hinge(0.5).unwrap();
        assert_abs_diff_eq!(integrate_compose(&fh, &trap).unwrap(), 0.75, epsilon = 1e-13);

        // y² on the unit triangle
        let tri = conv_steps(
            &StepFunction::indicator(-0.5, 0.5),
            &StepFunction::indicator(-0.5, 0.5),
        );
        let sq = ConvexFn::power(2.0).unwrap();
        assert_abs_diff_eq!(
            integrate_compose(&sq, &tri).unwrap(),
            2.0 / 3.0,
            epsilon = 1e-13
        );
    }

    #[test]
    fn compose_closed_form_matches_quadrature() {
        let psi = conv_steps(
            &StepFunction::from_pieces(&[(-1.0, 0.0, 0.8), (0.0, 2.0, 1.7)]).unwrap(),
            &StepFunction::indicator(-0.7, 1.3),
        );
        for f in [
            ConvexFn::hinge(0.9).unwrap(),
            ConvexFn::power(2.0).unwrap(),
            ConvexFn::power(3.0).unwrap(),
            ConvexFn::neg_power(0.5).unwrap(),
            ConvexFn::piecewise_linear(vec![0.5, 1.1], vec![-1.0, 0.3, 2.0]).unwrap(),
        ] {
            let exact = integrate_compose(&f, &psi).unwrap();
            let via_quad = crate::quad::integrate(&|x| f.eval(psi.eval(x)), -2.0, 3.5, 1e-12);
            assert_abs_diff_eq!(exact, via_quad.value, epsilon = 1e-9);
        }
    }

    #[test]
    fn custom_f_uses_quadrature_and_reports_bound() {
        let psi = conv_steps(
            &StepFunction::indicator(0.0, 1.0),
            &StepFunction::indicator(0.0, 2.0),
        );
        let f = ConvexFn::custom(|y| y * y * y - y, 2.0, 64).unwrap();
        let (v, bound) = integrate_compose_bounded(&f, &psi, 1e-10).unwrap();
        let reference = integrate_compose(&ConvexFn::power(3.0).unwrap(), &psi).unwrap()
            - integrate_compose(&ConvexFn::hinge(0.0).unwrap(), &psi).unwrap();
        assert_abs_diff_eq!(v, reference, epsilon = 1e-9);
        assert!(bound <= 1e-10);
    }

    #[test]
    fn lp_norm_examples() {
        let unit = StepFunction::indicator(0.0, 1.0);
        for p in [0.5, 1.0, 2.0, 3.7] {
            assert_abs_diff_eq!(unit.lp_norm(p), 1.0, epsilon = 1e-14);
        }
        let tent = conv_steps(
            &StepFunction::indicator(-1.0, 1.0),
            &StepFunction::indicator(-1.0, 1.0),
        );
        assert_abs_diff_eq!(tent.lp_norm(1.0), 4.0, epsilon = 1e-13);
        let tall = StepFunction::scaled_indicator(0.0, 2.0, 3.0);
        assert_abs_diff_eq!(tall.lp_norm(2.0), 3.0 * 2.0f64.sqrt(), epsilon = 1e-13);
    }

    #[test]
    fn level_measure_examples() {
        let tent = conv_steps(
            &StepFunction::indicator(-1.0, 1.0),
            &StepFunction::indicator(-1.0, 1.0),
        );
        assert_abs_diff_eq!(tent.level_measure(1.0), 2.0, epsilon = 1e-14);
        let step = StepFunction::indicator(0.0, 3.0);
        assert_eq!(step.level_measure(1.0), 0.0);
        assert_eq!(step.level_measure(0.5), 3.0);
    }

    #[test]
    fn support_with_gap() {
        let a = StepFunction::indicator(0.0, 1.0);
        let b = StepFunction::from_pieces(&[(0.0, 1.0, 1.0), (10.0, 11.0, 1.0)]).unwrap();
        assert_abs_diff_eq!(b.support_measure(), 2.0, epsilon = 1e-14);
        let conv = conv_steps(&a, &b);
        assert_abs_diff_eq!(conv.support_measure(), 4.0, epsilon = 1e-12);
        assert_eq!(conv.eval(5.0), 0.0);
    }

    #[test]
    fn normalization_merges_and_trims() {
        let f = StepFunction::new(vec![0.0, 1.0, 2.0, 3.0, 4.0], vec![0.0, 2.0, 2.0, 0.0]).unwrap();
        assert_eq!(f.breakpoints(), &[1.0, 3.0]);
        assert_eq!(f.values(), &[2.0]);
        let z = StepFunction::new(vec![0.0, 1.0], vec![0.0]).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.support_measure(), 0.0);
    }

    #[test]
    fn antiderivative_matches_mass() {
        let psi = conv_steps(
            &StepFunction::from_pieces(&[(0.0, 0.5, 2.0), (1.0, 1.5, 1.0)]).unwrap(),
            &StepFunction::indicator(-0.25, 0.75),
        );
        let far = psi.xs().last().copied().unwrap() + 1.0;
        assert_abs_diff_eq!(psi.antiderivative_at(far), psi.mass(), epsilon = 1e-13);
        let mid = 0.8;
        let left = crate::quad::integrate(&|x| psi.eval(x), -1.0, mid, 1e-12);
        assert_abs_diff_eq!(psi.antiderivative_at(mid), left.value, epsilon = 1e-10);
    }
}
