//! The rearrangement operator `φ*(x) = inf { t ≥ 0 | μ(φ⁻¹(ℝ_{>t})) ≤ 2|x| }`
//! from any measured carrier to a symmetric decreasing step function on
//! `ℝ`, plus layer-cake utilities.
//!
//! A finitely supported function rearranges by sorting its distinct values
//! descending, accumulating level-set measures `c₁ < c₂ < …`, and placing
//! value `vⱼ` on `±[c_{j−1}/2, cⱼ/2)`. The rearranged convolution
//! `φ₁* * φ₂*` is computed twice — directly, and through the layer-cake
//! double sum over indicator trapezoids — and the two routes must agree.

use thiserror::Error;

use crate::groups::MeasuredFunction;
use crate::piecewise::{
    centered_indicator_trapezoid, conv_steps, sum_trapezoid_handles, PiecewiseLinear, StepFunction,
};

#[derive(Debug, Error)]
pub enum RearrangeError {
    #[error("layer-route and direct-route rearranged convolutions differ by {deviation} (tolerance {tolerance})")]
    InternalCrossCheckFailed { deviation: f64, tolerance: f64 },
}

/// Tolerance for the two-route agreement check inside
/// [`rearranged_convolution`].
pub const CROSS_CHECK_TOL: f64 = 1e-9;

/// Superlevel-set bookkeeping of a finitely supported function:
/// thresholds `t₁ > t₂ > … > t_r > 0` and the strictly increasing
/// measures `μⱼ = μ({φ ≥ tⱼ})` (the level-set measure just below `tⱼ`).
#[derive(Clone, Debug, PartialEq)]
pub struct LayerCake {
    pub thresholds: Vec<f64>,
    pub level_measures: Vec<f64>,
    pub provenance: String,
}

impl LayerCake {
    /// `Σⱼ (tⱼ − tⱼ₊₁)·μⱼ`, which reproduces `‖φ‖₁` exactly.
    pub fn mass(&self) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.thresholds.len() {
            let next = self.thresholds.get(j + 1).copied().unwrap_or(0.0);
            acc += (self.thresholds[j] - next) * self.level_measures[j];
        }
        acc
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }
}

/// `(value, measure)` pairs with positive value and measure, distinct
/// values merged, sorted descending by value.
fn collect_layers(pairs: impl Iterator<Item = (f64, f64)>) -> Vec<(f64, f64)> {
    let mut items: Vec<(f64, f64)> = pairs.filter(|&(v, m)| v > 0.0 && m > 0.0).collect();
    items.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut merged: Vec<(f64, f64)> = vec![];
    for (v, m) in items {
        match merged.last_mut() {
            Some(last) if last.0 == v => last.1 += m,
            _ => merged.push((v, m)),
        }
    }
    merged
}

fn layers_of_step(phi: &StepFunction) -> Vec<(f64, f64)> {
    collect_layers(phi.pieces().map(|(l, r, v)| (v, r - l)))
}

fn layers_of_measured(phi: &MeasuredFunction) -> Vec<(f64, f64)> {
    let cell = phi.carrier().cell_measure();
    collect_layers(phi.values().iter().map(|&v| (v, cell)))
}

/// Symmetric decreasing placement of merged layers.
fn place_layers(layers: &[(f64, f64)]) -> StepFunction {
    if layers.is_empty() {
        return StepFunction::zero();
    }
    let r = layers.len();
    let mut cumulative = Vec::with_capacity(r);
    let mut acc = 0.0;
    for &(_, m) in layers {
        acc += m;
        cumulative.push(acc);
    }
    // breakpoints -c_r/2 < … < -c_1/2 < c_1/2 < … < c_r/2
    let mut breakpoints = Vec::with_capacity(2 * r);
    for j in (0..r).rev() {
        breakpoints.push(-cumulative[j] / 2.0);
    }
    for j in 0..r {
        breakpoints.push(cumulative[j] / 2.0);
    }
    let mut values = Vec::with_capacity(2 * r - 1);
    for j in (1..r).rev() {
        values.push(layers[j].0);
    }
    values.push(layers[0].0);
    for j in 1..r {
        values.push(layers[j].0);
    }
    StepFunction::new(breakpoints, values).expect("layer placement yields valid breakpoints")
}

/// Rearrangement of a step function on `ℝ`.
pub fn rearrange_step(phi: &StepFunction) -> StepFunction {
    place_layers(&layers_of_step(phi))
}

/// Rearrangement of a measured function on any carrier.
pub fn rearrange_measured(phi: &MeasuredFunction) -> StepFunction {
    place_layers(&layers_of_measured(phi))
}

fn cake_from_layers(layers: &[(f64, f64)], provenance: String) -> LayerCake {
    let mut thresholds = Vec::with_capacity(layers.len());
    let mut level_measures = Vec::with_capacity(layers.len());
    let mut acc = 0.0;
    for &(v, m) in layers {
        acc += m;
        thresholds.push(v);
        level_measures.push(acc);
    }
    LayerCake {
        thresholds,
        level_measures,
        provenance,
    }
}

pub fn layer_cake_step(phi: &StepFunction) -> LayerCake {
    cake_from_layers(&layers_of_step(phi), "step-function on R".into())
}

pub fn layer_cake_measured(phi: &MeasuredFunction) -> LayerCake {
    cake_from_layers(&layers_of_measured(phi), phi.carrier().descriptor())
}

/// `μ({φ > t})`, right-continuous in `t`.
pub fn distribution_function_step(phi: &StepFunction, t: f64) -> f64 {
    phi.level_measure(t)
}

/// `μ({φ > t})` for a measured function.
pub fn distribution_function_measured(phi: &MeasuredFunction, t: f64) -> f64 {
    assert!(t >= 0.0, "threshold must be nonnegative");
    phi.values().iter().filter(|&&v| v > t).count() as f64 * phi.carrier().cell_measure()
}

/// `φ₁* * φ₂*`, computed (a) by rearranging and convolving directly and
/// (b) as the layer-cake double sum
/// `Σᵢⱼ Δt₁ᵢ Δt₂ⱼ · 1_(−J₁ᵢ,J₁ᵢ) * 1_(−J₂ⱼ,J₂ⱼ)`; returns (a) after
/// asserting the two agree within [`CROSS_CHECK_TOL`].
pub fn rearranged_convolution(
    phi1: &StepFunction,
    phi2: &StepFunction,
) -> Result<PiecewiseLinear, RearrangeError> {
    let layers1 = layers_of_step(phi1);
    let layers2 = layers_of_step(phi2);
    if layers1.is_empty() || layers2.is_empty() {
        return Ok(PiecewiseLinear::zero());
    }
    let direct = conv_steps(&place_layers(&layers1), &place_layers(&layers2));

    let cake1 = cake_from_layers(&layers1, String::new());
    let cake2 = cake_from_layers(&layers2, String::new());
    let mut traps = vec![];
    for i in 0..cake1.thresholds.len() {
        let gap1 = cake1.thresholds[i] - cake1.thresholds.get(i + 1).copied().unwrap_or(0.0);
        let j1 = cake1.level_measures[i] / 2.0;
        for j in 0..cake2.thresholds.len() {
            let gap2 = cake2.thresholds[j] - cake2.thresholds.get(j + 1).copied().unwrap_or(0.0);
            let j2 = cake2.level_measures[j] / 2.0;
            if let Some(t) = centered_indicator_trapezoid(j1, j2, gap1 * gap2) {
                traps.push(t);
            }
        }
    }
    let layered = sum_trapezoid_handles(&traps);

    let scale = direct.eval(0.0).max(1.0);
    let deviation = direct.sup_diff(&layered);
    if deviation > CROSS_CHECK_TOL * scale {
        return Err(RearrangeError::InternalCrossCheckFailed {
            deviation,
            tolerance: CROSS_CHECK_TOL * scale,
        });
    }
    Ok(direct)
}

/// Rearranged convolution of measured functions (rearrangement lands on
/// `ℝ` regardless of the carrier).
pub fn rearranged_convolution_measured(
    phi1: &MeasuredFunction,
    phi2: &MeasuredFunction,
) -> Result<PiecewiseLinear, RearrangeError> {
    let s1 = place_layers(&layers_of_measured(phi1));
    let s2 = place_layers(&layers_of_measured(phi2));
    rearranged_convolution(&s1, &s2)
}
