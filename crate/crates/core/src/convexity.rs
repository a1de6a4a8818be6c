//! Convex functions `f: ℝ≥0 → ℝ` with `f(0) = 0`: the hinge family
//! `f_t(y) = max(y − t, 0)`, signed powers, piecewise-linear convex
//! functions, the step function `y ↦ -1_{y>0}`, and black-box evaluators.
//!
//! The module also carries the slope-measure decomposition
//! `f(y) = f'₊(0)·y + ∫₀^∞ f_t(y) dν(t)` with `ν((t₁,t₂]) = f'₊(t₂) − f'₊(t₁)`,
//! its inverse [`reconstruct`], and the near-zero linearization
//! `f₍ₙ₎(y) = n f(1/n) y on [0, 1/n]` that makes the decomposition
//! applicable when `f'₊(0) = −∞` or `f` jumps at `0`.

use std::sync::Arc;

use thiserror::Error;

use crate::quad;

#[derive(Debug, Error)]
pub enum ConvexityError {
    #[error("hinge threshold must be nonnegative, got {0}")]
    NegativeThreshold(f64),
    #[error("power exponent {exponent} invalid for sign {sign}: need q >= 1 for +y^q, 0 < q <= 1 for -y^q")]
    InvalidPowerExponent { exponent: f64, sign: i8 },
    #[error("piecewise-linear spec invalid: {0}")]
    InvalidPiecewiseLinear(String),
    #[error("function is not convex: midpoint check failed at ({a}, {b}): f(mid) - (f(a)+f(b))/2 = {excess}")]
    NotConvex { a: f64, b: f64, excess: f64 },
    #[error("f(0) = {0}, expected 0")]
    NonzeroAtOrigin(f64),
    #[error("right derivative at 0 is unbounded below; regularize first")]
    UnboundedRightDerivativeAtZero,
    #[error("quadrature tolerance not met: achieved error bound {achieved}, requested {requested}")]
    ToleranceNotMet { achieved: f64, requested: f64 },
}

/// Convexity slack allowed in midpoint checks (floating-point headroom).
pub const CONVEXITY_SLACK: f64 = 1e-12;

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A convex function on `ℝ≥0` vanishing at the origin.
#[derive(Clone)]
pub enum ConvexFn {
    /// `f_t(y) = max(y − t, 0)`.
    Hinge { t: f64 },
    /// `sign · y^q`; convexity forces `q ≥ 1` for `+` and `0 < q ≤ 1` for `−`.
    Power { exponent: f64, negated: bool },
    /// Slope `slopes[i]` on `(knots[i-1], knots[i])` with `knots[-1] = 0`;
    /// convex iff slopes are nondecreasing.
    PiecewiseLinearConvex { knots: Vec<f64>, slopes: Vec<f64> },
    /// `0` at `0`, `−1` for `y > 0`.
    NegIndicator,
    /// `n f(1/n) y` on `[0, 1/n]`, `f(y)` beyond.
    Regularized { inner: Box<ConvexFn>, n: u32 },
    /// Black-box evaluator validated on a grid over `[0, y_max]`.
    Custom {
        eval: Evaluator,
        y_max: f64,
        grid: usize,
    },
}

impl std::fmt::Debug for ConvexFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ConvexFn({})", self.descriptor())
    }
}

impl ConvexFn {
    pub fn hinge(t: f64) -> Result<Self, ConvexityError> {
        if !(t >= 0.0) {
            return Err(ConvexityError::NegativeThreshold(t));
        }
        Ok(ConvexFn::Hinge { t })
    }

    /// `y^q` with `q ≥ 1`.
    pub fn power(q: f64) -> Result<Self, ConvexityError> {
        if !(q >= 1.0) {
            return Err(ConvexityError::InvalidPowerExponent {
                exponent: q,
                sign: 1,
            });
        }
        Ok(ConvexFn::Power {
            exponent: q,
            negated: false,
        })
    }

    /// `−y^q` with `0 < q ≤ 1`.
    pub fn neg_power(q: f64) -> Result<Self, ConvexityError> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(ConvexityError::InvalidPowerExponent {
                exponent: q,
                sign: -1,
            });
        }
        Ok(ConvexFn::Power {
            exponent: q,
            negated: true,
        })
    }

    /// Piecewise-linear convex function from positive knots and one slope
    /// per segment (`slopes.len() == knots.len() + 1`).
    pub fn piecewise_linear(knots: Vec<f64>, slopes: Vec<f64>) -> Result<Self, ConvexityError> {
        if slopes.len() != knots.len() + 1 {
            return Err(ConvexityError::InvalidPiecewiseLinear(format!(
                "need {} slopes for {} knots, got {}",
                knots.len() + 1,
                knots.len(),
                slopes.len()
            )));
        }
        let mut prev = 0.0;
        for &k in &knots {
            if !(k > prev) {
                return Err(ConvexityError::InvalidPiecewiseLinear(format!(
                    "knots must be strictly increasing and positive, got {k} after {prev}"
                )));
            }
            prev = k;
        }
        for w in slopes.windows(2) {
            if w[1] < w[0] {
                return Err(ConvexityError::InvalidPiecewiseLinear(format!(
                    "slopes must be nondecreasing, got {} after {}",
                    w[1], w[0]
                )));
            }
        }
        Ok(ConvexFn::PiecewiseLinearConvex { knots, slopes })
    }

    pub fn neg_indicator() -> Self {
        ConvexFn::NegIndicator
    }

    /// Black-box convex function; `f(0) = 0` and midpoint convexity are
    /// validated on a `grid`-point mesh over `[0, y_max]`.
    pub fn custom<F>(eval: F, y_max: f64, grid: usize) -> Result<Self, ConvexityError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let f = ConvexFn::Custom {
            eval: Arc::new(eval),
            y_max,
            grid: grid.max(8),
        };
        f.validate_convexity()?;
        Ok(f)
    }

    pub fn eval(&self, y: f64) -> f64 {
        match self {
            ConvexFn::Hinge { t } => (y - t).max(0.0),
            ConvexFn::Power { exponent, negated } => {
                let v = y.powf(*exponent);
                if *negated {
                    -v
                } else {
                    v
                }
            }
            ConvexFn::PiecewiseLinearConvex { knots, slopes } => {
                let mut acc = 0.0;
                let mut left = 0.0;
                for (i, &s) in slopes.iter().enumerate() {
                    let right = knots.get(i).copied().unwrap_or(f64::INFINITY);
                    if y <= left {
                        break;
                    }
                    acc += s * (y.min(right) - left);
                    left = right;
                }
                acc
            }
            ConvexFn::NegIndicator => {
                if y > 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            ConvexFn::Regularized { inner, n } => {
                let cut = 1.0 / *n as f64;
                if y <= cut {
                    *n as f64 * inner.eval(cut) * y
                } else {
                    inner.eval(y)
                }
            }
            ConvexFn::Custom { eval, .. } => eval(y),
        }
    }

    /// Exact antiderivative `F(y) = ∫₀^y f`, when one exists in closed form.
    pub fn antiderivative(&self, y: f64) -> Option<f64> {
        match self {
            ConvexFn::Hinge { t } => Some(if y > *t { 0.5 * (y - t) * (y - t) } else { 0.0 }),
            ConvexFn::Power { exponent, negated } => {
                let v = y.powf(exponent + 1.0) / (exponent + 1.0);
                Some(if *negated { -v } else { v })
            }
            ConvexFn::PiecewiseLinearConvex { knots, slopes } => {
                let mut acc = 0.0;
                let mut f_left = 0.0;
                let mut left = 0.0;
                for (i, &s) in slopes.iter().enumerate() {
                    let right = knots.get(i).copied().unwrap_or(f64::INFINITY);
                    if y <= left {
                        break;
                    }
                    let w = y.min(right) - left;
                    acc += f_left * w + 0.5 * s * w * w;
                    f_left += s * (right - left);
                    left = right;
                }
                Some(acc)
            }
            ConvexFn::NegIndicator => Some(-y),
            ConvexFn::Regularized { inner, n } => {
                let cut = 1.0 / *n as f64;
                let slope = *n as f64 * inner.eval(cut);
                if y <= cut {
                    Some(0.5 * slope * y * y)
                } else {
                    let below = 0.5 * slope * cut * cut;
                    Some(below + inner.antiderivative(y)? - inner.antiderivative(cut)?)
                }
            }
            ConvexFn::Custom { .. } => None,
        }
    }

    /// `f'₊(0)`, with `−∞` for functions whose slope is unbounded below
    /// near the origin (and for the discontinuous step function).
    pub fn right_derivative_at_zero(&self) -> f64 {
        match self {
            ConvexFn::Hinge { t } => {
                if *t > 0.0 {
                    0.0
                } else {
                    1.0
                }
            }
            ConvexFn::Power { exponent, negated } => match (*negated, *exponent) {
                (false, q) if q > 1.0 => 0.0,
                (false, _) => 1.0,
                (true, q) if q < 1.0 => f64::NEG_INFINITY,
                (true, _) => -1.0,
            },
            ConvexFn::PiecewiseLinearConvex { slopes, .. } => slopes[0],
            ConvexFn::NegIndicator => f64::NEG_INFINITY,
            ConvexFn::Regularized { inner, n } => *n as f64 * inner.eval(1.0 / *n as f64),
            ConvexFn::Custom { eval, y_max, grid } => {
                let h = y_max / (*grid as f64) / 64.0;
                (4.0 * eval(h) - eval(2.0 * h)) / (2.0 * h)
            }
        }
    }

    /// Right derivative at an arbitrary `y > 0` (used when decomposing a
    /// regularized function).
    pub fn right_derivative(&self, y: f64) -> f64 {
        match self {
            ConvexFn::Hinge { t } => {
                if y >= *t {
                    1.0
                } else {
                    0.0
                }
            }
            ConvexFn::Power { exponent, negated } => {
                let v = exponent * y.powf(exponent - 1.0);
                if *negated {
                    -v
                } else {
                    v
                }
            }
            ConvexFn::PiecewiseLinearConvex { knots, slopes } => {
                let mut idx = 0;
                for (i, &k) in knots.iter().enumerate() {
                    if y >= k {
                        idx = i + 1;
                    }
                }
                slopes[idx]
            }
            ConvexFn::NegIndicator => 0.0,
            ConvexFn::Regularized { inner, n } => {
                let cut = 1.0 / *n as f64;
                if y < cut {
                    *n as f64 * inner.eval(cut)
                } else {
                    inner.right_derivative(y)
                }
            }
            ConvexFn::Custom { eval, y_max, grid } => {
                let h = y_max / (*grid as f64) / 64.0;
                (eval(y + h) - eval(y)) / h
            }
        }
    }

    /// Midpoint convexity on a dense grid plus the `f(0) = 0` contract.
    /// The step function is validated by its closed form instead.
    pub fn validate_convexity(&self) -> Result<(), ConvexityError> {
        if let ConvexFn::NegIndicator = self {
            return Ok(());
        }
        let f0 = self.eval(0.0);
        if f0.abs() > CONVEXITY_SLACK {
            return Err(ConvexityError::NonzeroAtOrigin(f0));
        }
        let (y_max, grid) = match self {
            ConvexFn::Custom { y_max, grid, .. } => (*y_max, *grid),
            _ => (8.0, 64),
        };
        let scale = f64_scale(self, y_max).max(1.0);
        for i in 0..=grid {
            for j in i..=grid {
                let a = y_max * i as f64 / grid as f64;
                let b = y_max * j as f64 / grid as f64;
                let mid = 0.5 * (a + b);
                let excess = self.eval(mid) - 0.5 * (self.eval(a) + self.eval(b));
                if excess > CONVEXITY_SLACK * scale {
                    return Err(ConvexityError::NotConvex { a, b, excess });
                }
            }
        }
        Ok(())
    }

    /// Compact CLI-style descriptor, e.g. `ft:0.5`, `pow:2`, `step`.
    pub fn descriptor(&self) -> String {
        match self {
            ConvexFn::Hinge { t } => format!("ft:{t}"),
            ConvexFn::Power { exponent, negated } => {
                if *negated {
                    format!("negpow:{exponent}")
                } else {
                    format!("pow:{exponent}")
                }
            }
            ConvexFn::PiecewiseLinearConvex { knots, slopes } => {
                let ks: Vec<String> = knots.iter().map(|k| k.to_string()).collect();
                let ss: Vec<String> = slopes.iter().map(|s| s.to_string()).collect();
                format!("plin:{}:{}", ks.join(","), ss.join(","))
            }
            ConvexFn::NegIndicator => "step".to_string(),
            ConvexFn::Regularized { inner, n } => format!("reg{}({})", n, inner.descriptor()),
            ConvexFn::Custom { .. } => "custom".to_string(),
        }
    }
}

fn f64_scale(f: &ConvexFn, y_max: f64) -> f64 {
    f.eval(y_max).abs()
}

/// The measure `ν` of the slope decomposition: point masses plus an
/// optional density for `f''` on `(0, ∞)`, anchored at `f'₊(0)`.
#[derive(Clone)]
pub struct SlopeMeasure {
    pub base_slope: f64,
    /// `(location t > 0, mass ≥ 0)` pairs, strictly increasing in `t`.
    pub atoms: Vec<(f64, f64)>,
    pub density: Option<Evaluator>,
    /// Present when the density came from finite differences.
    pub density_error_bound: Option<f64>,
}

/// Splits `f` into `f'₊(0)` and the slope measure `ν`. Fails when the
/// right derivative at the origin is unbounded below (or `f` jumps at
/// `0`); those cases route through [`regularize`] first.
pub fn decompose(f: &ConvexFn) -> Result<SlopeMeasure, ConvexityError> {
    let base = f.right_derivative_at_zero();
    if base == f64::NEG_INFINITY {
        return Err(ConvexityError::UnboundedRightDerivativeAtZero);
    }
    match f {
        ConvexFn::Hinge { t } => Ok(SlopeMeasure {
            base_slope: base,
            atoms: if *t > 0.0 { vec![(*t, 1.0)] } else { vec![] },
            density: None,
            density_error_bound: None,
        }),
        ConvexFn::Power { exponent, negated } => {
            let q = *exponent;
            if *negated || q == 1.0 {
                // only -y (q = 1) reaches here with negated = true
                Ok(SlopeMeasure {
                    base_slope: base,
                    atoms: vec![],
                    density: None,
                    density_error_bound: None,
                })
            } else {
                Ok(SlopeMeasure {
                    base_slope: 0.0,
                    atoms: vec![],
                    density: Some(Arc::new(move |t: f64| q * (q - 1.0) * t.powf(q - 2.0))),
                    density_error_bound: None,
                })
            }
        }
        ConvexFn::PiecewiseLinearConvex { knots, slopes } => {
            let atoms = knots
                .iter()
                .zip(slopes.windows(2))
                .map(|(&k, w)| (k, w[1] - w[0]))
                .filter(|&(_, m)| m > 0.0)
                .collect();
            Ok(SlopeMeasure {
                base_slope: slopes[0],
                atoms,
                density: None,
                density_error_bound: None,
            })
        }
        ConvexFn::NegIndicator => Err(ConvexityError::UnboundedRightDerivativeAtZero),
        ConvexFn::Regularized { inner, n } => {
            let cut = 1.0 / *n as f64;
            // slope jumps from n·f(1/n) to f'₊(1/n) at the cut, then ν
            // agrees with the inner measure on (1/n, ∞)
            let jump = inner.right_derivative(cut) - base;
            let mut atoms = vec![];
            if jump > 0.0 {
                atoms.push((cut, jump));
            }
            let mut density = None;
            let mut density_error_bound = None;
            match inner.as_ref() {
                ConvexFn::PiecewiseLinearConvex { knots, slopes } => {
                    for (&k, w) in knots.iter().zip(slopes.windows(2)) {
                        if k > cut && w[1] - w[0] > 0.0 {
                            atoms.push((k, w[1] - w[0]));
                        }
                    }
                }
                ConvexFn::Hinge { t } => {
                    if *t > cut {
                        atoms.push((*t, 1.0));
                    }
                }
                ConvexFn::Power { exponent, negated } => {
                    let q = *exponent;
                    let neg = *negated;
                    if q != 1.0 {
                        density = Some(Arc::new(move |t: f64| {
                            if t <= cut {
                                0.0
                            } else {
                                let v = q * (q - 1.0) * t.powf(q - 2.0);
                                if neg {
                                    -v
                                } else {
                                    v
                                }
                            }
                        }) as Evaluator);
                    }
                }
                ConvexFn::NegIndicator => {}
                inner_other => {
                    let sm = finite_difference_measure(inner_other, cut)?;
                    density = sm.density;
                    density_error_bound = sm.density_error_bound;
                }
            }
            Ok(SlopeMeasure {
                base_slope: base,
                atoms,
                density,
                density_error_bound,
            })
        }
        ConvexFn::Custom { .. } => finite_difference_measure(f, 0.0),
    }
}

/// Finite-difference density `f''` sampled on the validation grid; values
/// below `cutoff` are zeroed.
fn finite_difference_measure(f: &ConvexFn, cutoff: f64) -> Result<SlopeMeasure, ConvexityError> {
    let (y_max, grid) = match f {
        ConvexFn::Custom { y_max, grid, .. } => (*y_max, *grid),
        _ => (8.0, 256),
    };
    let h = y_max / grid as f64;
    let mut samples = Vec::with_capacity(grid + 1);
    for i in 0..=grid {
        let t = i as f64 * h;
        let d2 = if t < h {
            (f.eval(t + 2.0 * h) - 2.0 * f.eval(t + h) + f.eval(t)) / (h * h)
        } else {
            (f.eval(t + h) - 2.0 * f.eval(t) + f.eval(t - h)) / (h * h)
        };
        samples.push(d2.max(0.0));
    }
    let cut = cutoff;
    let density = move |t: f64| {
        if t <= cut || t < 0.0 {
            return 0.0;
        }
        let pos = (t / h).min((samples.len() - 1) as f64);
        let i = pos.floor() as usize;
        let frac = pos - i as f64;
        if i + 1 < samples.len() {
            samples[i] * (1.0 - frac) + samples[i + 1] * frac
        } else {
            samples[i]
        }
    };
    Ok(SlopeMeasure {
        base_slope: f.right_derivative_at_zero(),
        atoms: vec![],
        density: Some(Arc::new(density)),
        density_error_bound: Some(h * h),
    })
}

/// Evaluates `f'₊(0)·y + Σ m·f_t(y) + ∫₀^y (y−t)ρ(t) dt`, the inverse of
/// [`decompose`].
pub fn reconstruct(sm: &SlopeMeasure, y: f64, tol: f64) -> Result<f64, ConvexityError> {
    assert!(y >= 0.0, "reconstruct needs y >= 0");
    let mut acc = sm.base_slope * y;
    for &(t, m) in &sm.atoms {
        if y > t {
            acc += m * (y - t);
        }
    }
    if let Some(rho) = &sm.density {
        if y > 0.0 {
            let r = quad::integrate(&|t: f64| (y - t) * rho(t), 0.0, y, tol);
            if r.error_bound > tol {
                return Err(ConvexityError::ToleranceNotMet {
                    achieved: r.error_bound,
                    requested: tol,
                });
            }
            acc += r.value;
        }
    }
    Ok(acc)
}

/// `f₍ₙ₎`: linear with slope `n f(1/n)` on `[0, 1/n]`, equal to `f`
/// beyond. Returns `f` itself when it is already linear on `[0, 1/n]`.
pub fn regularize(f: &ConvexFn, n: u32) -> ConvexFn {
    assert!(n >= 1, "regularization index must be positive");
    let cut = 1.0 / n as f64;
    let already_linear = match f {
        ConvexFn::Hinge { t } => *t == 0.0 || *t >= cut,
        ConvexFn::Power { exponent, .. } => *exponent == 1.0,
        ConvexFn::PiecewiseLinearConvex { knots, .. } => knots[0] >= cut,
        _ => false,
    };
    if already_linear {
        f.clone()
    } else {
        ConvexFn::Regularized {
            inner: Box::new(f.clone()),
            n,
        }
    }
}

/// Discrete form of the hinge-integral inequality: with `t = Σ wᵢTᵢ`,
/// returns `(f_t(Σ wᵢαᵢ), Σ wᵢ f_{Tᵢ}(αᵢ))`; the first component never
/// exceeds the second, with equality when `Tᵢ ≤ αᵢ` for all `i`.
pub fn ft_integral_bound(thresholds: &[f64], alpha: &[f64], weights: &[f64]) -> (f64, f64) {
    assert_eq!(thresholds.len(), alpha.len(), "length mismatch");
    assert_eq!(thresholds.len(), weights.len(), "length mismatch");
    assert!(
        thresholds
            .iter()
            .chain(alpha.iter())
            .all(|&v| v >= 0.0)
            && weights.iter().all(|&w| w > 0.0),
        "thresholds and alpha must be nonnegative, weights positive"
    );
    let t: f64 = thresholds
        .iter()
        .zip(weights.iter())
        .map(|(ti, wi)| ti * wi)
        .sum();
    let total_alpha: f64 = alpha.iter().zip(weights.iter()).map(|(a, w)| a * w).sum();
    let lhs = (total_alpha - t).max(0.0);
    let rhs = thresholds
        .iter()
        .zip(alpha.iter())
        .zip(weights.iter())
        .map(|((ti, ai), wi)| wi * (ai - ti).max(0.0))
        .sum();
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hinge_matches_definition() {
        let f0 = ConvexFn::hinge(0.0).unwrap();
        for y in [0.0, 0.3, 2.5] {
            assert_eq!(f0.eval(y), y);
        }
        let f2 = ConvexFn::hinge(2.0).unwrap();
        assert_eq!(f2.eval(3.0), 1.0);
        assert_eq!(f2.eval(1.5), 0.0);
        assert!(ConvexFn::hinge(-0.1).is_err());
    }

    #[test]
    fn power_sign_rules() {
        assert!(ConvexFn::power(1.0).is_ok());
        assert!(ConvexFn::power(0.5).is_err());
        assert!(ConvexFn::neg_power(0.5).is_ok());
        assert!(ConvexFn::neg_power(2.0).is_err());
        assert!(ConvexFn::neg_power(0.0).is_err());
    }

    #[test]
    fn piecewise_linear_eval_and_antiderivative() {
        // slopes (-1, 0, 2) with knots (1, 3)
        let f = ConvexFn::piecewise_linear(vec![1.0, 3.0], vec![-1.0, 0.0, 2.0]).unwrap();
        assert_eq!(f.eval(0.0), 0.0);
        assert_eq!(f.eval(1.0), -1.0);
        assert_eq!(f.eval(3.0), -1.0);
        assert_eq!(f.eval(4.0), 1.0);
        // F(4) = ∫: triangle part -(1/2) + flat -1*2 + last segment -1 + 1... do numerically
        let direct = quad::integrate(&|y| f.eval(y), 0.0, 4.0, 1e-12);
        assert_abs_diff_eq!(f.antiderivative(4.0).unwrap(), direct.value, epsilon = 1e-10);
    }

    #[test]
    fn decompose_examples() {
        // f_t: single atom of mass 1 at t
        let sm = decompose(&ConvexFn::hinge(0.7).unwrap()).unwrap();
        assert_eq!(sm.base_slope, 0.0);
        assert_eq!(sm.atoms, vec![(0.7, 1.0)]);

        // y^2: base slope 0, density constant 2
        let sm = decompose(&ConvexFn::power(2.0).unwrap()).unwrap();
        assert_eq!(sm.base_slope, 0.0);
        let rho = sm.density.as_ref().unwrap();
        for t in [0.1, 1.0, 5.0] {
            assert_abs_diff_eq!(rho(t), 2.0, epsilon = 1e-13);
        }

        // piecewise-linear with slopes (-1, 0, 2) at knots (1, 3)
        let f = ConvexFn::piecewise_linear(vec![1.0, 3.0], vec![-1.0, 0.0, 2.0]).unwrap();
        let sm = decompose(&f).unwrap();
        assert_eq!(sm.base_slope, -1.0);
        assert_eq!(sm.atoms, vec![(1.0, 1.0), (3.0, 2.0)]);

        // -sqrt(y) must be regularized first
        assert!(matches!(
            decompose(&ConvexFn::neg_power(0.5).unwrap()),
            Err(ConvexityError::UnboundedRightDerivativeAtZero)
        ));
    }

    #[test]
    fn reconstruct_round_trips() {
        let square = ConvexFn::power(2.0).unwrap();
        let sm = decompose(&square).unwrap();
        let v = reconstruct(&sm, 1.7, 1e-12).unwrap();
        assert_abs_diff_eq!(v, 2.89, epsilon = 1e-10);

        let hinge = ConvexFn::hinge(0.4).unwrap();
        let sm = decompose(&hinge).unwrap();
        for y in [0.0, 0.2, 0.4, 1.0, 3.0] {
            assert_abs_diff_eq!(reconstruct(&sm, y, 1e-12).unwrap(), hinge.eval(y), epsilon = 1e-14);
        }

        let plc = ConvexFn::piecewise_linear(vec![1.0, 3.0], vec![-1.0, 0.0, 2.0]).unwrap();
        let sm = decompose(&plc).unwrap();
        for y in [0.0, 0.5, 1.0, 2.0, 3.0, 3.5, 6.0] {
            assert_abs_diff_eq!(reconstruct(&sm, y, 1e-12).unwrap(), plc.eval(y), epsilon = 1e-13);
        }
    }

    #[test]
    fn regularize_examples() {
        // f(y) = -sqrt(y): n f(1/n) = -sqrt(n), so slope -2 at n = 4
        let f = ConvexFn::neg_power(0.5).unwrap();
        let f4 = regularize(&f, 4);
        assert_abs_diff_eq!(f4.right_derivative_at_zero(), -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f4.eval(0.125), -2.0 * 0.125, epsilon = 1e-14);
        assert_abs_diff_eq!(f4.eval(0.5), -(0.5f64.sqrt()), epsilon = 1e-14);

        // already linear near 0: unchanged
        let plc = ConvexFn::piecewise_linear(vec![1.0], vec![-1.0, 1.0]).unwrap();
        let r = regularize(&plc, 8);
        for y in [0.0, 0.05, 0.5, 2.0] {
            assert_eq!(r.eval(y), plc.eval(y));
        }

        // pointwise decrease toward f as n doubles
        let mut n = 1u32;
        let ys: Vec<f64> = (1..50).map(|i| i as f64 * 0.02).collect();
        let mut prev: Vec<f64> = ys.iter().map(|&y| regularize(&f, 1).eval(y)).collect();
        while n <= 256 {
            let cur: Vec<f64> = ys.iter().map(|&y| regularize(&f, n).eval(y)).collect();
            for ((&c, &p), &y) in cur.iter().zip(prev.iter()).zip(ys.iter()) {
                assert!(
                    c <= p + 1e-12 && c >= f.eval(y) - 1e-12,
                    "monotone squeeze failed at n={n}, y={y}"
                );
            }
            prev = cur;
            n *= 2;
        }
    }

    #[test]
    fn regularized_decompose_round_trip() {
        let f = ConvexFn::neg_power(0.5).unwrap();
        let f16 = regularize(&f, 16);
        let sm = decompose(&f16).unwrap();
        for y in [0.01, 0.0625, 0.2, 1.0, 4.0] {
            let v = reconstruct(&sm, y, 1e-11).unwrap();
            assert_abs_diff_eq!(v, f16.eval(y), epsilon = 1e-8);
        }
    }

    #[test]
    fn ft_bound_examples() {
        // componentwise equality clause
        let (l, r) = ft_integral_bound(&[0.3, 1.2], &[0.3, 1.2], &[0.5, 2.0]);
        assert_abs_diff_eq!(l, r, epsilon = 1e-14);

        let (l, r) = ft_integral_bound(&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]);
        assert_eq!(l, 0.0);
        assert_eq!(r, 1.0);

        let (l, r) = ft_integral_bound(&[0.0, 0.0], &[0.0, 0.0], &[1.0, 1.0]);
        assert_eq!((l, r), (0.0, 0.0));
    }

    #[test]
    fn custom_convexity_gate() {
        assert!(ConvexFn::custom(|y| y * y - y, 4.0, 64).is_ok());
        assert!(matches!(
            ConvexFn::custom(|y| y.sqrt(), 4.0, 64),
            Err(ConvexityError::NotConvex { .. })
        ));
        assert!(matches!(
            ConvexFn::custom(|y| y + 1.0, 4.0, 64),
            Err(ConvexityError::NonzeroAtOrigin(_))
        ));
    }

    #[test]
    fn custom_decompose_round_trip() {
        let f = ConvexFn::custom(|y| (y + 1.0) * (y + 1.0).ln() - y, 4.0, 512).unwrap();
        let sm = decompose(&f).unwrap();
        assert!(sm.density_error_bound.is_some());
        for y in [0.5, 1.0, 2.0, 3.5] {
            let v = reconstruct(&sm, y, 1e-9).unwrap();
            assert_abs_diff_eq!(v, f.eval(y), epsilon = 1e-3);
        }
    }
}
