//! The verification engine: checks the main convolution-rearrangement
//! inequality `∫_G f∘(φ₁*φ₂) ≤ ∫_ℝ f∘(φ₁**φ₂*)`, its Young and reverse
//! Young corollaries, the closed-form family showing convexity of `f` is
//! necessary, the indicator identity `(‖φ₁‖−t)(‖φ₂‖−t)`, and searches for
//! violations when the support hypothesis fails.
//!
//! Both sides are computed exactly wherever the function classes allow:
//! the `ℝ` side through the step/piecewise-linear algebra, the group side
//! as a finite Haar sum, and the circle side by exact integration of the
//! piecewise-linear interpolant whose node values are exactly the
//! group-algebra convolution. Quadrature only enters for black-box `f`,
//! and its achieved error bound is carried in every report.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

use crate::constants::{ConstantsError, ExponentData};
use crate::convexity::{ConvexFn, ConvexityError};
use crate::groups::{
    convolve, hypothesis_holds, CarrierKind, GroupCarrier, GroupError, MeasuredFunction,
};
use crate::piecewise::{
    conv_steps, integrate_compose_bounded, PiecewiseError, PiecewiseLinear, StepFunction,
};
use crate::rearrange::{rearranged_convolution, rearranged_convolution_measured, RearrangeError};

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Piecewise(#[from] PiecewiseError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Rearrange(#[from] RearrangeError),
    #[error(transparent)]
    Constants(#[from] ConstantsError),
    #[error(transparent)]
    Convexity(#[from] ConvexityError),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
}

/// One inequality trial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub lhs: f64,
    pub rhs: f64,
    pub hypothesis_ok: bool,
    /// `rhs − lhs`; nonnegative (within `error_bound`) whenever the
    /// hypothesis holds — that is the theorem.
    pub margin: f64,
    pub error_bound: f64,
    pub seed: u64,
    pub carrier: String,
    pub f: String,
}

impl VerificationReport {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn is_violation(&self, tol: f64) -> bool {
        self.hypothesis_ok && self.margin < -(self.error_bound + tol)
    }
}

fn report(
    lhs: (f64, f64),
    rhs: (f64, f64),
    hypothesis_ok: bool,
    carrier: String,
    f: &ConvexFn,
) -> VerificationReport {
    VerificationReport {
        lhs: lhs.0,
        rhs: rhs.0,
        hypothesis_ok,
        margin: rhs.0 - lhs.0,
        error_bound: lhs.1 + rhs.1,
        seed: 0,
        carrier,
        f: f.descriptor(),
    }
}

/// Main inequality for step functions on `ℝ` (where the hypothesis is
/// vacuous): both sides exact through the piecewise pipeline.
pub fn check_main_steps(
    phi1: &StepFunction,
    phi2: &StepFunction,
    f: &ConvexFn,
    tol: f64,
) -> Result<VerificationReport, LabError> {
    let lhs = integrate_compose_bounded(f, &conv_steps(phi1, phi2), tol)?;
    let rhs = integrate_compose_bounded(f, &rearranged_convolution(phi1, phi2)?, tol)?;
    Ok(report(lhs, rhs, true, "realline (modeled m(G)=inf)".into(), f))
}

/// The group-side integral `∫_G f∘(φ₁*φ₂)`, exact per carrier kind.
fn group_side(
    phi1: &MeasuredFunction,
    phi2: &MeasuredFunction,
    f: &ConvexFn,
    tol: f64,
) -> Result<(f64, f64), LabError> {
    let carrier = phi1.carrier();
    match carrier.kind() {
        CarrierKind::RealLineGrid { .. } => {
            let s1 = phi1.to_step_function()?;
            let s2 = phi2.to_step_function()?;
            Ok(integrate_compose_bounded(f, &conv_steps(&s1, &s2), tol)?)
        }
        CarrierKind::CircleGrid { n, total } => {
            // The continuum convolution of cell-step functions on the
            // circle is piecewise linear with kinks on the cell grid and
            // node values equal to the cyclic group-algebra convolution,
            // so integrating the interpolant is exact.
            let psi = convolve(phi1, phi2)?;
            let c = total / *n as f64;
            let mut xs = Vec::with_capacity(n + 1);
            let mut ys = Vec::with_capacity(n + 1);
            for k in 0..=*n {
                xs.push(k as f64 * c);
                ys.push(psi.values()[k % n]);
            }
            let pl = PiecewiseLinear::new(xs, ys)?;
            // the interpolant starts and ends at the same positive value
            // in general; integrate_compose handles nonzero hull ends
            // because composition happens piece by piece
            Ok(integrate_compose_bounded(f, &pl, tol)?)
        }
        _ => {
            let psi = convolve(phi1, phi2)?;
            let cell = carrier.cell_measure();
            let sum: f64 = psi.values().iter().map(|&v| f.eval(v)).sum();
            Ok((sum * cell, 0.0))
        }
    }
}

/// Main inequality on a measured carrier.
pub fn check_main_measured(
    phi1: &MeasuredFunction,
    phi2: &MeasuredFunction,
    f: &ConvexFn,
    tol: f64,
) -> Result<VerificationReport, LabError> {
    let lhs = group_side(phi1, phi2, f, tol)?;
    let rhs = integrate_compose_bounded(f, &rearranged_convolution_measured(phi1, phi2)?, tol)?;
    let hyp = hypothesis_holds(phi1, phi2)?;
    Ok(report(lhs, rhs, hyp, phi1.carrier().descriptor(), f))
}

/// Indicator identity: for masses `0 < a ≤ b` and `t ≤ a`, the exact
/// pipeline value of `‖f_t∘(φ₁**φ₂*)‖` equals `(a−t)(b−t)`; zero when
/// `t ≥ a`. Returns `(closed_form, pipeline_value)`.
pub fn check_ft_indicator(a: f64, b: f64, t: f64) -> Result<(f64, f64), LabError> {
    if !(0.0 < a && a <= b && t >= 0.0) {
        return Err(LabError::ParameterOutOfRange(format!(
            "need 0 < a <= b and t >= 0, got a={a}, b={b}, t={t}"
        )));
    }
    let closed = if t >= a { 0.0 } else { (a - t) * (b - t) };
    let phi1 = StepFunction::indicator(0.0, a);
    let phi2 = StepFunction::indicator(-b / 2.0, b / 2.0);
    let rearr = rearranged_convolution(&phi1, &phi2)?;
    let f = ConvexFn::hinge(t)?;
    let (pipeline, _) = integrate_compose_bounded(&f, &rearr, 1e-12)?;
    debug_assert!(
        (closed - pipeline).abs() <= 1e-12 * closed.max(1.0),
        "pipeline {pipeline} deviates from closed form {closed}"
    );
    Ok((closed, pipeline))
}

/// Young / reverse-Young trial data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct YoungReport {
    pub q: f64,
    pub c: f64,
    /// `‖φ₁*φ₂‖_q`
    pub conv_norm: f64,
    /// `‖φ₁**φ₂*‖_q` (the sandwich middle), when computed
    pub rearranged_norm: Option<f64>,
    /// `C(P)·‖φ₁‖_{p₁}·‖φ₂‖_{p₂}`
    pub c_bound: f64,
    /// `‖φ₁*φ₂‖_q / (‖φ₁‖_{p₁}‖φ₂‖_{p₂})`
    pub ratio: f64,
    pub hypothesis_ok: bool,
    pub ok: bool,
}

/// Young's inequality with the sharp constant on `ℝ`:
/// `‖φ₁*φ₂‖_q ≤ ‖φ₁**φ₂*‖_q ≤ C(P)·‖φ₁‖_{p₁}‖φ₂‖_{p₂}` for `p₁,p₂ > 1`.
pub fn check_young_steps(
    phi1: &StepFunction,
    phi2: &StepFunction,
    p1: f64,
    p2: f64,
    tol: f64,
) -> Result<YoungReport, LabError> {
    if !(p1 > 1.0 && p2 > 1.0) {
        return Err(LabError::ParameterOutOfRange(format!(
            "Young regime needs p1, p2 > 1, got ({p1}, {p2})"
        )));
    }
    let data = ExponentData::pair(p1, p2)?;
    let conv_norm = conv_steps(phi1, phi2).lp_norm(data.q);
    let rearranged_norm = rearranged_convolution(phi1, phi2)?.lp_norm(data.q);
    let norms = phi1.lp_norm(p1) * phi2.lp_norm(p2);
    let c_bound = data.c * norms;
    let ok = conv_norm <= rearranged_norm + tol && rearranged_norm <= c_bound + tol;
    Ok(YoungReport {
        q: data.q,
        c: data.c,
        conv_norm,
        rearranged_norm: Some(rearranged_norm),
        c_bound,
        ratio: conv_norm / norms,
        hypothesis_ok: true,
        ok,
    })
}

/// Reverse Young on `ℝ`:
/// `‖φ₁*φ₂‖_q ≥ ‖φ₁**φ₂*‖_q ≥ C(P)·‖φ₁‖_{p₁}‖φ₂‖_{p₂}` for `0 < p₁,p₂ < 1`.
pub fn check_reverse_young_steps(
    phi1: &StepFunction,
    phi2: &StepFunction,
    p1: f64,
    p2: f64,
    tol: f64,
) -> Result<YoungReport, LabError> {
    if !(0.0 < p1 && p1 < 1.0 && 0.0 < p2 && p2 < 1.0) {
        return Err(LabError::ParameterOutOfRange(format!(
            "reverse regime needs 0 < p1, p2 < 1, got ({p1}, {p2})"
        )));
    }
    let data = ExponentData::pair(p1, p2)?;
    let conv_norm = conv_steps(phi1, phi2).lp_norm(data.q);
    let rearranged_norm = rearranged_convolution(phi1, phi2)?.lp_norm(data.q);
    let norms = phi1.lp_norm(p1) * phi2.lp_norm(p2);
    let c_bound = data.c * norms;
    let ok = conv_norm >= rearranged_norm - tol && rearranged_norm >= c_bound - tol;
    Ok(YoungReport {
        q: data.q,
        c: data.c,
        conv_norm,
        rearranged_norm: Some(rearranged_norm),
        c_bound,
        ratio: conv_norm / norms,
        hypothesis_ok: true,
        ok,
    })
}

/// Exact `‖φ₁*φ₂‖_q` on a discrete carrier: a Haar sum on native discrete
/// groups, the piecewise-linear interpolant norm on the circle model.
fn measured_conv_qnorm(
    phi1: &MeasuredFunction,
    phi2: &MeasuredFunction,
    q: f64,
) -> Result<f64, LabError> {
    let carrier = phi1.carrier();
    let psi = convolve(phi1, phi2)?;
    match carrier.kind() {
        CarrierKind::CircleGrid { n, total } => {
            let c = total / *n as f64;
            let mut xs = Vec::with_capacity(n + 1);
            let mut ys = Vec::with_capacity(n + 1);
            for k in 0..=*n {
                xs.push(k as f64 * c);
                ys.push(psi.values()[k % n]);
            }
            Ok(PiecewiseLinear::new(xs, ys)?.lp_norm(q))
        }
        _ => Ok(psi.lp_norm(q)),
    }
}

/// Reverse Young on a measured carrier. The unit bound
/// `‖φ₁*φ₂‖_q ≥ ‖φ₁‖_{p₁}‖φ₂‖_{p₂}` needs no support hypothesis; the
/// `C(P)` bound is asserted only when the hypothesis holds.
pub fn check_reverse_young_measured(
    phi1: &MeasuredFunction,
    phi2: &MeasuredFunction,
    p1: f64,
    p2: f64,
    tol: f64,
) -> Result<YoungReport, LabError> {
    if !(0.0 < p1 && p1 <= 1.0 && 0.0 < p2 && p2 <= 1.0) {
        return Err(LabError::ParameterOutOfRange(format!(
            "reverse regime needs 0 < p1, p2 <= 1, got ({p1}, {p2})"
        )));
    }
    let data = ExponentData::pair(p1, p2)?;
    let conv_norm = measured_conv_qnorm(phi1, phi2, data.q)?;
    let norms = phi1.lp_norm(p1) * phi2.lp_norm(p2);
    let hyp = hypothesis_holds(phi1, phi2)?;
    let ratio = conv_norm / norms;
    let mut ok = ratio >= 1.0 - tol;
    if hyp {
        ok = ok && conv_norm >= data.c * norms - tol;
    }
    Ok(YoungReport {
        q: data.q,
        c: data.c,
        conv_norm,
        rearranged_norm: None,
        c_bound: data.c * norms,
        ratio,
        hypothesis_ok: hyp,
        ok,
    })
}

/// Output of the closed-form family showing convexity is necessary.
#[derive(Clone, Debug)]
pub struct Section4Output {
    pub conv: PiecewiseLinear,
    pub rearranged: PiecewiseLinear,
    /// `∫f∘rearranged − ∫f∘conv`
    pub gap: f64,
    /// `4(λf(y₁) + (1−λ)f(y₂) − f(λy₁ + (1−λ)y₂))`
    pub predicted_gap: f64,
}

/// `φ₁ = 1_(−1,1)/2` paired with the two-level comb `φ₂`.
pub fn counterexample_pair(lambda: f64, y1: f64, y2: f64) -> Result<(StepFunction, StepFunction), LabError> {
    if !(0.0..=1.0).contains(&lambda) || !(0.0 <= y1 && y1 <= y2) {
        return Err(LabError::ParameterOutOfRange(format!(
            "need 0 <= lambda <= 1 and 0 <= y1 <= y2, got lambda={lambda}, y1={y1}, y2={y2}"
        )));
    }
    let phi1 = StepFunction::scaled_indicator(-1.0, 1.0, 0.5);
    let phi2 = StepFunction::from_pieces(&[
        (-5.0, -3.0, y1),
        (-3.0, -1.0 - 2.0 * lambda, y2),
        (-1.0 - 2.0 * lambda, -1.0, y1),
        (-1.0, 1.0, y2),
        (1.0, 1.0 + 2.0 * lambda, y1),
        (1.0 + 2.0 * lambda, 3.0, y2),
        (3.0, 5.0, y1),
    ])?;
    Ok((phi1, phi2))
}

fn dedup_nodes(xs: Vec<f64>, ys: Vec<f64>) -> Result<PiecewiseLinear, LabError> {
    let mut out_x: Vec<f64> = vec![];
    let mut out_y: Vec<f64> = vec![];
    for (x, y) in xs.into_iter().zip(ys) {
        if let (Some(&lx), Some(&ly)) = (out_x.last(), out_y.last()) {
            if x == lx {
                assert!(
                    (y - ly).abs() <= 1e-12,
                    "closed form produced a jump at x={x}: {ly} vs {y}"
                );
                continue;
            }
        }
        out_x.push(x);
        out_y.push(y);
    }
    Ok(PiecewiseLinear::new(out_x, out_y)?)
}

/// The closed-form displays for `φ₁*φ₂` and `φ₁**φ₂*` of the family.
pub fn section4_closed_forms(
    lambda: f64,
    y1: f64,
    y2: f64,
) -> Result<(PiecewiseLinear, PiecewiseLinear), LabError> {
    if !(0.0..=1.0).contains(&lambda) || !(0.0 <= y1 && y1 <= y2) {
        return Err(LabError::ParameterOutOfRange(format!(
            "need 0 <= lambda <= 1 and 0 <= y1 <= y2, got lambda={lambda}, y1={y1}, y2={y2}"
        )));
    }
    let plateau = lambda * y1 + (1.0 - lambda) * y2;
    let conv = dedup_nodes(
        vec![
            -6.0,
            -4.0,
            -(2.0 * lambda + 2.0),
            -(2.0 * lambda),
            0.0,
            2.0 * lambda,
            2.0 * lambda + 2.0,
            4.0,
            6.0,
        ],
        vec![0.0, y1, plateau, plateau, y2, plateau, plateau, y1, 0.0],
    )?;
    let rearr = dedup_nodes(
        vec![
            -6.0,
            -4.0,
            -(4.0 - 2.0 * lambda),
            -(2.0 - 2.0 * lambda),
            2.0 - 2.0 * lambda,
            4.0 - 2.0 * lambda,
            4.0,
            6.0,
        ],
        vec![0.0, y1, y1, y2, y2, y1, y1, 0.0],
    )?;
    Ok((conv, rearr))
}

/// Agreement tolerance between the closed forms and the generic pipeline.
pub const SECTION4_PIPELINE_TOL: f64 = 1e-12;

/// Emits both closed-form functions, recomputes them through the generic
/// pipeline asserting agreement, and evaluates the gap identity.
pub fn section4_family(
    lambda: f64,
    y1: f64,
    y2: f64,
    f: &ConvexFn,
) -> Result<Section4Output, LabError> {
    let (phi1, phi2) = counterexample_pair(lambda, y1, y2)?;
    let (conv_closed, rearr_closed) = section4_closed_forms(lambda, y1, y2)?;
    let conv_pipeline = conv_steps(&phi1, &phi2);
    let rearr_pipeline = rearranged_convolution(&phi1, &phi2)?;
    let scale = y2.max(1.0);
    let dc = conv_closed.sup_diff(&conv_pipeline);
    let dr = rearr_closed.sup_diff(&rearr_pipeline);
    if dc > SECTION4_PIPELINE_TOL * scale || dr > SECTION4_PIPELINE_TOL * scale {
        return Err(LabError::ParameterOutOfRange(format!(
            "closed form and pipeline disagree: conv {dc}, rearranged {dr}"
        )));
    }
    let (int_conv, _) = integrate_compose_bounded(f, &conv_closed, 1e-12)?;
    let (int_rearr, _) = integrate_compose_bounded(f, &rearr_closed, 1e-12)?;
    let mid = lambda * y1 + (1.0 - lambda) * y2;
    let predicted = 4.0 * (lambda * f.eval(y1) + (1.0 - lambda) * f.eval(y2) - f.eval(mid));
    Ok(Section4Output {
        conv: conv_closed,
        rearranged: rearr_closed,
        gap: int_rearr - int_conv,
        predicted_gap: predicted,
    })
}

/// Gap of the family under `f(y) = y^p` for arbitrary `p > 0` (exact via
/// the power antiderivative). With `0 < p < 1` the gap goes negative,
/// which is the demonstration that convexity of `f` cannot be dropped.
pub fn section4_power_gap(lambda: f64, y1: f64, y2: f64, p: f64) -> Result<f64, LabError> {
    let (conv, rearr) = section4_closed_forms(lambda, y1, y2)?;
    Ok(rearr.power_integral(p) - conv.power_integral(p))
}

/// Reproducible generator parameters for random step-function pairs.
#[derive(Clone, Debug)]
pub struct StepPairParams {
    /// Inclusive range of piece counts per function.
    pub pieces: (usize, usize),
    /// Values are drawn uniformly from this range (zeros allowed).
    pub value_range: (f64, f64),
    /// Breakpoints live in this window.
    pub window: (f64, f64),
}

impl Default for StepPairParams {
    fn default() -> Self {
        StepPairParams {
            pieces: (1, 5),
            value_range: (0.0, 3.0),
            window: (-4.0, 4.0),
        }
    }
}

fn random_step(rng: &mut ChaCha8Rng, params: &StepPairParams) -> StepFunction {
    let k = rng.random_range(params.pieces.0..=params.pieces.1);
    let mut points: Vec<f64> = (0..=k)
        .map(|_| rng.random_range(params.window.0..params.window.1))
        .collect();
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup();
    while points.len() < 2 {
        points.push(points[0] + 0.5);
    }
    let values: Vec<f64> = (0..points.len() - 1)
        .map(|_| rng.random_range(params.value_range.0..params.value_range.1))
        .collect();
    StepFunction::new(points, values).expect("sorted deduped points are valid")
}

/// Deterministic pair generator: a fixed seed yields an identical pair
/// across runs.
pub fn random_step_pair(seed: u64, params: &StepPairParams) -> (StepFunction, StepFunction) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (random_step(&mut rng, params), random_step(&mut rng, params))
}

/// Support-budget mode for measured pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BudgetMode {
    /// `μ(supp φ₁) + μ(supp φ₂) ≤ m(G)` by construction.
    SatisfyHypothesis,
    /// Support sum forced past `m(G)`.
    ViolateHypothesis,
}

/// Random measured pair on a discrete carrier; values come from a small
/// alphabet so the layer-cake cross-check stays cheap.
pub fn random_measured_pair(
    carrier: &Arc<GroupCarrier>,
    seed: u64,
    mode: BudgetMode,
) -> Result<(MeasuredFunction, MeasuredFunction), LabError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = carrier.n_cells();
    let m_cells = (carrier.declared_m() / carrier.cell_measure()).floor() as usize;
    let (s1, s2) = match mode {
        BudgetMode::SatisfyHypothesis => {
            if m_cells < 2 {
                return Err(LabError::ParameterOutOfRange(format!(
                    "carrier admits no nonempty hypothesis-satisfying pairs (m covers {m_cells} cells)"
                )));
            }
            let s1 = rng.random_range(1..m_cells);
            let s2 = rng.random_range(1..=(m_cells - s1));
            (s1, s2)
        }
        BudgetMode::ViolateHypothesis => {
            if m_cells >= 2 * n {
                return Err(LabError::ParameterOutOfRange(
                    "carrier hypothesis cannot be violated: m exceeds total".into(),
                ));
            }
            loop {
                let s1 = rng.random_range(1..=n);
                let s2 = rng.random_range(1..=n);
                if s1 + s2 > m_cells {
                    break (s1, s2);
                }
            }
        }
    };
    const ALPHABET: [f64; 4] = [0.25, 0.5, 1.0, 2.0];
    let mut build = |size: usize| {
        let mut cells: Vec<usize> = (0..n).collect();
        for i in 0..size {
            let j = rng.random_range(i..n);
            cells.swap(i, j);
        }
        let mut values = vec![0.0; n];
        for &c in &cells[..size] {
            values[c] = ALPHABET[rng.random_range(0..ALPHABET.len())];
        }
        MeasuredFunction::from_values(carrier, values)
    };
    Ok((build(s1)?, build(s2)?))
}

/// The six-function suite used by the main campaign: a random hinge, the
/// powers `y²` and `y³`, `−√y`, the step function, and a random
/// non-monotone piecewise-linear convex function.
pub fn f_suite(rng: &mut ChaCha8Rng, y_scale: f64) -> Vec<ConvexFn> {
    let t = rng.random_range(0.0..y_scale.max(0.5));
    let k1 = rng.random_range(0.2..1.0);
    let k2 = k1 + rng.random_range(0.2..1.5);
    let mut slopes = [
        rng.random_range(-2.0..0.0),
        rng.random_range(-1.0..2.0),
        rng.random_range(0.0..3.0),
    ];
    slopes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vec![
        ConvexFn::hinge(t).expect("t >= 0"),
        ConvexFn::power(2.0).expect("valid"),
        ConvexFn::power(3.0).expect("valid"),
        ConvexFn::neg_power(0.5).expect("valid"),
        ConvexFn::neg_indicator(),
        ConvexFn::piecewise_linear(vec![k1, k2], slopes.to_vec()).expect("sorted slopes"),
    ]
}

fn mix_seed(base: u64, index: u64) -> u64 {
    // splitmix64 step
    let mut z = base ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Aggregate of a campaign run.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CampaignOutcome {
    pub trials: usize,
    pub checks: usize,
    pub violations: usize,
    pub worst_margin: f64,
    #[serde(skip)]
    pub reports: Vec<VerificationReport>,
}

/// Seeded main-theorem campaign on `ℝ`: `trials` random step pairs, each
/// checked against the whole six-function suite.
pub fn main_line_campaign(
    trials: usize,
    seed: u64,
    tol: f64,
    collect: bool,
) -> Result<CampaignOutcome, LabError> {
    let params = StepPairParams::default();
    let mut outcome = CampaignOutcome {
        worst_margin: f64::INFINITY,
        ..Default::default()
    };
    for i in 0..trials {
        let trial_seed = mix_seed(seed, i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        let phi1 = random_step(&mut rng, &params);
        let phi2 = random_step(&mut rng, &params);
        for f in f_suite(&mut rng, params.value_range.1) {
            let rep = check_main_steps(&phi1, &phi2, &f, tol)?.with_seed(trial_seed);
            outcome.checks += 1;
            outcome.worst_margin = outcome.worst_margin.min(rep.margin);
            if rep.is_violation(tol) {
                outcome.violations += 1;
            }
            if collect {
                outcome.reports.push(rep);
            }
        }
        outcome.trials += 1;
    }
    Ok(outcome)
}

/// Seeded campaign on a discrete carrier with the support budget forced
/// to satisfy or violate the hypothesis.
pub fn measured_campaign(
    carrier: &Arc<GroupCarrier>,
    f: &ConvexFn,
    trials: usize,
    seed: u64,
    mode: BudgetMode,
    tol: f64,
    collect: bool,
) -> Result<CampaignOutcome, LabError> {
    let mut outcome = CampaignOutcome {
        worst_margin: f64::INFINITY,
        ..Default::default()
    };
    for i in 0..trials {
        let trial_seed = mix_seed(seed, i as u64);
        let (phi1, phi2) = random_measured_pair(carrier, trial_seed, mode)?;
        let rep = check_main_measured(&phi1, &phi2, f, tol)?.with_seed(trial_seed);
        outcome.trials += 1;
        outcome.checks += 1;
        outcome.worst_margin = outcome.worst_margin.min(rep.margin);
        if rep.is_violation(tol) {
            outcome.violations += 1;
        }
        if collect {
            outcome.reports.push(rep);
        }
    }
    Ok(outcome)
}

/// Random hypothesis-violating pairs on a compact/finite modeled carrier;
/// returns every trial whose margin went negative — the demonstration
/// that the support hypothesis is needed. Deterministic under `seed`.
pub fn violation_search(
    carrier: &Arc<GroupCarrier>,
    f: &ConvexFn,
    trials: usize,
    seed: u64,
) -> Result<Vec<VerificationReport>, LabError> {
    if !carrier.declared_m().is_finite() {
        return Err(LabError::ParameterOutOfRange(
            "violation search needs a carrier with finite modeled m(G)".into(),
        ));
    }
    let mut found = vec![];
    for i in 0..trials {
        let trial_seed = mix_seed(seed, i as u64);
        let (phi1, phi2) = random_measured_pair(carrier, trial_seed, BudgetMode::ViolateHypothesis)?;
        let rep = check_main_measured(&phi1, &phi2, f, 1e-10)?.with_seed(trial_seed);
        if rep.margin < 0.0 {
            found.push(rep);
        }
    }
    Ok(found)
}

/// Structural continuity data for a rearranged convolution.
#[derive(Clone, Debug, Serialize)]
pub struct ContinuityReport {
    /// Worst two-sided evaluation mismatch at interior nodes.
    pub max_node_mismatch: f64,
    pub continuous_at_zero: bool,
    pub even: bool,
}

/// Checks that `φ₁**φ₂*` evaluates consistently from both sides of every
/// interior breakpoint, is even, and is finite (hence continuous) at 0.
pub fn check_continuity(
    phi1: &StepFunction,
    phi2: &StepFunction,
) -> Result<ContinuityReport, LabError> {
    let psi = rearranged_convolution(phi1, phi2)?;
    let xs = psi.xs();
    let mut worst = 0.0f64;
    let eps = 1e-9;
    let slope_scale: f64 = xs
        .windows(2)
        .zip(psi.ys().windows(2))
        .map(|(x, y)| ((y[1] - y[0]) / (x[1] - x[0])).abs())
        .fold(1.0, f64::max);
    for (i, &x) in xs.iter().enumerate() {
        if i == 0 || i + 1 == xs.len() {
            continue;
        }
        let here = psi.ys()[i];
        let left = psi.eval(x - eps);
        let right = psi.eval(x + eps);
        worst = worst
            .max((left - here).abs() - eps * slope_scale)
            .max((right - here).abs() - eps * slope_scale);
    }
    let at_zero = psi.eval(0.0);
    Ok(ContinuityReport {
        max_node_mismatch: worst.max(0.0),
        continuous_at_zero: at_zero.is_finite(),
        even: psi.is_even(1e-9 * at_zero.max(1.0)),
    })
}

/// `‖φ₁*φ₂*φ₃‖_q` via the exact antiderivative of the first convolution
/// and adaptive integration between kinks (the threefold convolution is
/// piecewise quadratic).
pub fn threefold_conv_qnorm(
    phi1: &StepFunction,
    phi2: &StepFunction,
    phi3: &StepFunction,
    q: f64,
    tol: f64,
) -> Result<f64, LabError> {
    let psi12 = conv_steps(phi1, phi2);
    if psi12.is_zero() || phi3.is_zero() {
        return Ok(0.0);
    }
    let g = |x: f64| -> f64 {
        phi3.pieces()
            .map(|(l, r, v)| v * (psi12.antiderivative_at(x - l) - psi12.antiderivative_at(x - r)))
            .sum()
    };
    let mut kinks: Vec<f64> = vec![];
    for &x in psi12.xs() {
        for &b in phi3.breakpoints() {
            kinks.push(x + b);
        }
    }
    kinks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    kinks.dedup_by(|a, b| (*a - *b).abs() <= 1e-13);
    let mut acc = 0.0;
    let mut bound = 0.0;
    for w in kinks.windows(2) {
        let r = crate::quad::integrate(&|x| g(x).max(0.0).powf(q), w[0], w[1], tol / kinks.len() as f64);
        acc += r.value;
        bound += r.error_bound;
    }
    if bound > tol {
        return Err(LabError::Piecewise(PiecewiseError::ToleranceNotMet {
            achieved: bound,
            requested: tol,
        }));
    }
    Ok(acc.powf(1.0 / q))
}

/// First zero of a non-monotone convex `f` past a point `t` where
/// `f(t) < 0`, by bisection to `1e-12`; `None` classifies `f` as
/// monotonically decreasing on `[0, y_max]`.
pub fn convex_zero_crossing(f: &ConvexFn, t: f64, y_max: f64) -> Option<f64> {
    assert!(f.eval(t) < 0.0, "need f(t) < 0 at the probe point");
    if f.eval(y_max) < 0.0 {
        return None;
    }
    let (mut lo, mut hi) = (t, y_max);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f.eval(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// The pointwise bound `y ≤ t·max(−f(y),0)/(−f(t)) + t'·f_t(y)/(t'−t)`.
pub fn lemma_zero_bound_holds(f: &ConvexFn, t: f64, t_prime: f64, ys: &[f64]) -> bool {
    let ft = f.eval(t);
    assert!(ft < 0.0 && t_prime > t);
    ys.iter().all(|&y| {
        let bound = t * (-f.eval(y)).max(0.0) / (-ft) + t_prime * (y - t).max(0.0) / (t_prime - t);
        y <= bound + 1e-9 * y.max(1.0)
    })
}
