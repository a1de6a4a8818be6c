//! Projected gradient search for empirical Young-ratio extremizers
//! `‖φ₁*φ₂‖_q / (‖φ₁‖_{p₁}‖φ₂‖_{p₂})` on line grids (target: the sharp
//! constant `C(P)`, attained by Gaussian pairs) and on cyclic carriers
//! (target: 1, attained near constant functions).
//!
//! The objective is worked in log space; positivity is maintained by
//! clipping at `ε = 1e-12`, which also tames the singular derivatives of
//! the `p < 1` quasi-norms at zero. A monotone backtracking line search
//! keeps the reported ratio sequence sorted, and an analytic gradient is
//! validated against central finite differences before every run.

use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rustfft::{num_complex::Complex64, FftPlanner};
use thiserror::Error;

use crate::constants::{ConstantsError, ExponentData};
use crate::groups::{CarrierKind, GroupCarrier, GroupError};
use crate::piecewise::StepFunction;

#[derive(Debug, Error)]
pub enum ExtremizeError {
    #[error(transparent)]
    Constants(#[from] ConstantsError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("carrier not supported for ratio search: {0}")]
    UnsupportedCarrier(String),
    #[error("exponent regime mismatch: {0}")]
    WrongRegime(String),
    #[error("analytic gradient failed the finite-difference check: max relative error {max_rel_err}")]
    GradientCheckFailed { max_rel_err: f64 },
    #[error("init has wrong length or nonpositive entries: {0}")]
    BadInit(String),
}

/// Positivity clip for the projection step.
pub const VALUE_FLOOR: f64 = 1e-12;

/// Required agreement between analytic and finite-difference gradients.
pub const GRADIENT_CHECK_TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum AscentStatus {
    /// Projected gradient dropped below tolerance.
    Converged,
    /// Iteration budget exhausted while still improving.
    MaxIters,
    /// Line search found no improving step; best state returned.
    Stalled,
}

/// State of one ratio search.
#[derive(Clone, Debug)]
pub struct AscentState {
    pub phi1: Vec<f64>,
    pub phi2: Vec<f64>,
    pub ratio: f64,
    pub iterations: usize,
    pub step_size: f64,
    pub status: AscentStatus,
    /// `(iteration, ratio)` pairs, monotone by the line-search contract.
    pub trace: Vec<(usize, f64)>,
}

#[derive(Clone, Copy, Debug)]
pub struct AscentOptions {
    pub max_iters: usize,
    /// Sup-norm tolerance on the projected gradient.
    pub grad_tol: f64,
    pub initial_step: f64,
    /// Scale-invariance self-check cadence (iterations).
    pub scale_check_every: usize,
}

impl Default for AscentOptions {
    fn default() -> Self {
        AscentOptions {
            max_iters: 2000,
            grad_tol: 1e-7,
            initial_step: 0.5,
            scale_check_every: 100,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ConvMode {
    Line,
    Cyclic,
}

/// Shared objective/gradient engine for one carrier and exponent tuple.
struct RatioEngine {
    mode: ConvMode,
    n: usize,
    cell: f64,
    q: f64,
    p1: f64,
    p2: f64,
}

impl RatioEngine {
    fn new(carrier: &Arc<GroupCarrier>, data: &ExponentData) -> Result<Self, ExtremizeError> {
        let mode = match carrier.kind() {
            CarrierKind::RealLineGrid { .. } => ConvMode::Line,
            CarrierKind::Cyclic { .. } | CarrierKind::CircleGrid { .. } => ConvMode::Cyclic,
            other => {
                return Err(ExtremizeError::UnsupportedCarrier(format!("{other:?}")));
            }
        };
        Ok(RatioEngine {
            mode,
            n: carrier.n_cells(),
            cell: carrier.cell_measure(),
            q: data.q,
            p1: data.exponents[0],
            p2: data.exponents[1],
        })
    }

    fn fft_pair(&self, size: usize) -> (Vec<Complex64>, FftPlanner<f64>) {
        let planner = FftPlanner::new();
        (vec![Complex64::new(0.0, 0.0); size], planner)
    }

    fn fft_size(&self) -> usize {
        match self.mode {
            // correlation of ψ^{q−1} (length 2n−1) against φ needs room
            // for 3n−2 coefficients before wraparound
            ConvMode::Line => (3 * self.n).next_power_of_two(),
            ConvMode::Cyclic => self.n,
        }
    }

    /// `ψ = φ₁ * φ₂ · cell` (length `2n−1` on the line, `n` cyclic).
    fn convolve(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let size = self.fft_size();
        let (_, mut planner) = self.fft_pair(size);
        let fft = planner.plan_fft_forward(size);
        let ifft = planner.plan_fft_inverse(size);
        let mut fa = embed(a, size);
        let mut fb = embed(b, size);
        fft.process(&mut fa);
        fft.process(&mut fb);
        for (x, y) in fa.iter_mut().zip(fb.iter()) {
            *x *= y;
        }
        ifft.process(&mut fa);
        let out_len = match self.mode {
            ConvMode::Line => 2 * self.n - 1,
            ConvMode::Cyclic => self.n,
        };
        let scale = self.cell / size as f64;
        (0..out_len).map(|k| (fa[k].re * scale).max(0.0)).collect()
    }

    /// `out[i] = Σ_k a[k]·b[k−i]` (indices linear or mod n).
    fn correlate(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let size = self.fft_size();
        let (_, mut planner) = self.fft_pair(size);
        let fft = planner.plan_fft_forward(size);
        let ifft = planner.plan_fft_inverse(size);
        let mut fa = embed(a, size);
        let mut fb = embed(b, size);
        fft.process(&mut fa);
        fft.process(&mut fb);
        for (x, y) in fa.iter_mut().zip(fb.iter()) {
            *x *= y.conj();
        }
        ifft.process(&mut fa);
        let scale = 1.0 / size as f64;
        match self.mode {
            // linear correlation wraps negatively; index i lives at i mod size
            ConvMode::Line => (0..self.n).map(|i| fa[i].re * scale).collect(),
            ConvMode::Cyclic => (0..self.n).map(|i| fa[i].re * scale).collect(),
        }
    }

    fn log_ratio(&self, phi1: &[f64], phi2: &[f64]) -> f64 {
        let psi = self.convolve(phi1, phi2);
        let sq: f64 = psi.iter().map(|&v| v.powf(self.q)).sum();
        let s1: f64 = phi1.iter().map(|&v| v.powf(self.p1)).sum();
        let s2: f64 = phi2.iter().map(|&v| v.powf(self.p2)).sum();
        (sq * self.cell).ln() / self.q
            - (s1 * self.cell).ln() / self.p1
            - (s2 * self.cell).ln() / self.p2
    }

    /// `(lnR, ∂lnR/∂φ₁, ∂lnR/∂φ₂)`.
    fn grad(&self, phi1: &[f64], phi2: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
        let psi = self.convolve(phi1, phi2);
        let sq: f64 = psi.iter().map(|&v| v.powf(self.q)).sum();
        let s1: f64 = phi1.iter().map(|&v| v.powf(self.p1)).sum();
        let s2: f64 = phi2.iter().map(|&v| v.powf(self.p2)).sum();
        let psi_pow: Vec<f64> = psi.iter().map(|&v| v.powf(self.q - 1.0)).collect();
        let corr1 = self.correlate(&psi_pow, phi2);
        let corr2 = self.correlate(&psi_pow, phi1);
        let g1: Vec<f64> = phi1
            .iter()
            .zip(corr1.iter())
            .map(|(&v, &c)| self.cell * c / sq - v.powf(self.p1 - 1.0) / s1)
            .collect();
        let g2: Vec<f64> = phi2
            .iter()
            .zip(corr2.iter())
            .map(|(&v, &c)| self.cell * c / sq - v.powf(self.p2 - 1.0) / s2)
            .collect();
        let ln_r = (sq * self.cell).ln() / self.q
            - (s1 * self.cell).ln() / self.p1
            - (s2 * self.cell).ln() / self.p2;
        (ln_r, g1, g2)
    }
}

fn embed(values: &[f64], size: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); size];
    for (slot, &v) in out.iter_mut().zip(values.iter()) {
        *slot = Complex64::new(v, 0.0);
    }
    out
}

/// Central finite-difference check of the analytic gradient at probe
/// coordinates with non-negligible values; returns the worst relative
/// error against the gradient sup norm.
fn gradient_fd_error(
    engine: &RatioEngine,
    phi1: &[f64],
    phi2: &[f64],
    rng: &mut ChaCha8Rng,
) -> f64 {
    let (_, g1, g2) = engine.grad(phi1, phi2);
    let gmax = g1
        .iter()
        .chain(g2.iter())
        .fold(0.0f64, |m, &g| m.max(g.abs()))
        .max(1e-8);
    let h = 1e-6;
    let peak1 = phi1.iter().cloned().fold(0.0f64, f64::max);
    let peak2 = phi2.iter().cloned().fold(0.0f64, f64::max);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let on_first = rng.random_bool(0.5);
        let (phi, peak, grad) = if on_first {
            (phi1, peak1, &g1)
        } else {
            (phi2, peak2, &g2)
        };
        let candidates: Vec<usize> = (0..phi.len())
            .filter(|&i| phi[i] >= 1e-3 * peak)
            .collect();
        let i = candidates[rng.random_range(0..candidates.len())];
        let mut plus = phi.to_vec();
        let mut minus = phi.to_vec();
        plus[i] += h;
        minus[i] -= h;
        let (lp, lm) = if on_first {
            (engine.log_ratio(&plus, phi2), engine.log_ratio(&minus, phi2))
        } else {
            (engine.log_ratio(phi1, &plus), engine.log_ratio(phi1, &minus))
        };
        let fd = (lp - lm) / (2.0 * h);
        worst = worst.max((fd - grad[i]).abs() / gmax);
    }
    worst
}

fn clip(values: &mut [f64]) {
    for v in values.iter_mut() {
        if *v < VALUE_FLOOR {
            *v = VALUE_FLOOR;
        }
    }
}

fn projected_grad_norm(phi: &[f64], grad: &[f64], sign: f64) -> f64 {
    phi.iter()
        .zip(grad.iter())
        .map(|(&v, &g)| {
            // at the clip boundary, directions pointing further out are
            // projected away
            if v <= VALUE_FLOOR && sign * g < 0.0 {
                0.0
            } else {
                g.abs()
            }
        })
        .fold(0.0, f64::max)
}

fn run_search(
    carrier: &Arc<GroupCarrier>,
    data: &ExponentData,
    init: (Vec<f64>, Vec<f64>),
    opts: &AscentOptions,
    maximize: bool,
) -> Result<AscentState, ExtremizeError> {
    let engine = RatioEngine::new(carrier, data)?;
    let (mut phi1, mut phi2) = init;
    if phi1.len() != engine.n || phi2.len() != engine.n {
        return Err(ExtremizeError::BadInit(format!(
            "expected {} cells, got {} and {}",
            engine.n,
            phi1.len(),
            phi2.len()
        )));
    }
    if phi1.iter().chain(phi2.iter()).any(|&v| !(v > 0.0)) {
        return Err(ExtremizeError::BadInit("entries must be positive".into()));
    }
    clip(&mut phi1);
    clip(&mut phi2);

    let mut check_rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
    let fd_err = gradient_fd_error(&engine, &phi1, &phi2, &mut check_rng);
    if fd_err > GRADIENT_CHECK_TOL {
        return Err(ExtremizeError::GradientCheckFailed { max_rel_err: fd_err });
    }

    let sign = if maximize { 1.0 } else { -1.0 };
    let mut step = opts.initial_step;
    let mut trace = vec![];
    let mut status = AscentStatus::MaxIters;
    let mut ln_r = engine.log_ratio(&phi1, &phi2);
    let mut iterations = 0;

    for iter in 0..opts.max_iters {
        iterations = iter;
        let (ln_now, g1, g2) = engine.grad(&phi1, &phi2);
        ln_r = ln_now;
        trace.push((iter, ln_now.exp()));

        if opts.scale_check_every > 0 && iter % opts.scale_check_every == 0 {
            let scaled: Vec<f64> = phi1.iter().map(|&v| 3.0 * v).collect();
            let drift = (engine.log_ratio(&scaled, &phi2) - ln_now).abs();
            assert!(
                drift <= 1e-10 * (1.0 + ln_now.abs()),
                "ratio lost scale invariance: drift {drift}"
            );
        }

        let pg = projected_grad_norm(&phi1, &g1, sign).max(projected_grad_norm(&phi2, &g2, sign));
        if pg <= opts.grad_tol {
            status = AscentStatus::Converged;
            break;
        }

        let mut improved = false;
        for _ in 0..60 {
            let mut t1: Vec<f64> = phi1
                .iter()
                .zip(g1.iter())
                .map(|(&v, &g)| v + sign * step * g)
                .collect();
            let mut t2: Vec<f64> = phi2
                .iter()
                .zip(g2.iter())
                .map(|(&v, &g)| v + sign * step * g)
                .collect();
            clip(&mut t1);
            clip(&mut t2);
            let ln_trial = engine.log_ratio(&t1, &t2);
            if sign * (ln_trial - ln_now) > 0.0 {
                phi1 = t1;
                phi2 = t2;
                ln_r = ln_trial;
                step *= 1.5;
                improved = true;
                break;
            }
            step *= 0.5;
            if step < 1e-16 {
                break;
            }
        }
        if !improved {
            status = AscentStatus::Stalled;
            break;
        }
    }

    trace.push((iterations + 1, ln_r.exp()));
    Ok(AscentState {
        phi1,
        phi2,
        ratio: ln_r.exp(),
        iterations: iterations + 1,
        step_size: step,
        status,
        trace,
    })
}

/// Young-ratio maximization (`p₁, p₂ > 1`; the sharp bound is `C(P)` on
/// line grids and 1 on compact models).
pub fn maximize_ratio(
    carrier: &Arc<GroupCarrier>,
    p1: f64,
    p2: f64,
    init: (Vec<f64>, Vec<f64>),
    opts: &AscentOptions,
) -> Result<AscentState, ExtremizeError> {
    let data = ExponentData::pair(p1, p2)?;
    if !data.all_above_one() {
        return Err(ExtremizeError::WrongRegime(format!(
            "maximize needs p1, p2 > 1, got ({p1}, {p2})"
        )));
    }
    run_search(carrier, &data, init, opts, true)
}

/// Reverse-regime minimization (`0 < p₁, p₂ < 1`; the sharp bound is
/// `C(P) > 1` on line grids).
pub fn minimize_ratio(
    carrier: &Arc<GroupCarrier>,
    p1: f64,
    p2: f64,
    init: (Vec<f64>, Vec<f64>),
    opts: &AscentOptions,
) -> Result<AscentState, ExtremizeError> {
    let data = ExponentData::pair(p1, p2)?;
    if !data.all_below_one() {
        return Err(ExtremizeError::WrongRegime(format!(
            "minimize needs 0 < p1, p2 < 1, got ({p1}, {p2})"
        )));
    }
    run_search(carrier, &data, init, opts, false)
}

/// Cell centers of a line-grid carrier.
pub fn grid_centers(carrier: &GroupCarrier) -> Option<Vec<f64>> {
    if let CarrierKind::RealLineGrid { halfwidth, step } = carrier.kind() {
        let m = (halfwidth / step).round() as i64;
        Some((-m..=m).map(|k| k as f64 * step).collect())
    } else {
        None
    }
}

/// `e^{−πx²}` sampled at cell centers: the known extremal profile shape.
pub fn gaussian_init(carrier: &GroupCarrier) -> Option<Vec<f64>> {
    grid_centers(carrier).map(|xs| {
        xs.iter()
            .map(|&x| (-std::f64::consts::PI * x * x).exp().max(VALUE_FLOOR))
            .collect()
    })
}

/// Random positive multi-scale profile: a bump of random width and
/// center times uniform noise (line grids), or plain uniform noise
/// (cyclic carriers).
pub fn random_init(carrier: &GroupCarrier, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match grid_centers(carrier) {
        Some(xs) => {
            let a = rng.random_range(0.3..3.0);
            let c = rng.random_range(-1.0..1.0);
            xs.iter()
                .map(|&x| {
                    let bump = (-a * (x - c) * (x - c)).exp();
                    (bump * rng.random_range(0.5..1.5)).max(1e-4)
                })
                .collect()
        }
        None => (0..carrier.n_cells())
            .map(|_| rng.random_range(0.5..1.5))
            .collect(),
    }
}

/// Best of `starts` independent random starts.
pub fn multi_start(
    carrier: &Arc<GroupCarrier>,
    p1: f64,
    p2: f64,
    starts: usize,
    opts: &AscentOptions,
    seed: u64,
    maximize: bool,
) -> Result<AscentState, ExtremizeError> {
    let mut best: Option<AscentState> = None;
    for k in 0..starts {
        let init = (
            random_init(carrier, seed.wrapping_add(2 * k as u64)),
            random_init(carrier, seed.wrapping_add(2 * k as u64 + 1)),
        );
        let state = if maximize {
            maximize_ratio(carrier, p1, p2, init, opts)?
        } else {
            minimize_ratio(carrier, p1, p2, init, opts)?
        };
        let better = match &best {
            None => true,
            Some(b) => {
                if maximize {
                    state.ratio > b.ratio
                } else {
                    state.ratio < b.ratio
                }
            }
        };
        if better {
            best = Some(state);
        }
    }
    Ok(best.expect("starts >= 1"))
}

/// Step-function view of an ascent profile on a line grid (for the exact
/// rearrangement cross-checks and for CSV emission).
pub fn profile_to_step(carrier: &GroupCarrier, values: &[f64]) -> Option<StepFunction> {
    let xs = grid_centers(carrier)?;
    let CarrierKind::RealLineGrid { step, .. } = carrier.kind() else {
        return None;
    };
    let pieces: Vec<(f64, f64, f64)> = xs
        .iter()
        .zip(values.iter())
        .map(|(&x, &v)| (x - step / 2.0, x + step / 2.0, v))
        .collect();
    StepFunction::from_pieces(&pieces).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::c_of;
    use crate::rearrange::rearrange_step;
    use approx::assert_abs_diff_eq;

    fn line_carrier() -> Arc<GroupCarrier> {
        GroupCarrier::real_line(8.0, 1.0 / 64.0).unwrap()
    }

    #[test]
    fn gaussian_pair_sits_at_the_sharp_constant() {
        let carrier = line_carrier();
        let g = gaussian_init(&carrier).unwrap();
        let data = ExponentData::pair(4.0 / 3.0, 4.0 / 3.0).unwrap();
        let engine = RatioEngine::new(&carrier, &data).unwrap();
        let ratio = engine.log_ratio(&g, &g).exp();
        let c = c_of(&[4.0 / 3.0, 4.0 / 3.0]).unwrap();
        assert!(
            (ratio - c).abs() <= 0.01 * c,
            "iteration-0 Gaussian ratio {ratio} not within 1% of {c}"
        );
    }

    #[test]
    fn fd_gradient_agrees_both_regimes() {
        let carrier = GroupCarrier::real_line(4.0, 1.0 / 16.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (p1, p2) in [(4.0 / 3.0, 4.0 / 3.0), (0.5, 0.5), (1.5, 1.25)] {
            let data = ExponentData::pair(p1, p2).unwrap();
            let engine = RatioEngine::new(&carrier, &data).unwrap();
            let a = random_init(&carrier, 3);
            let b = random_init(&carrier, 4);
            let err = gradient_fd_error(&engine, &a, &b, &mut rng);
            assert!(err <= GRADIENT_CHECK_TOL, "fd mismatch {err} at ({p1},{p2})");
        }
    }

    #[test]
    fn line_convolution_matches_direct_sum() {
        let carrier = GroupCarrier::real_line(1.0, 0.25).unwrap();
        let data = ExponentData::pair(4.0 / 3.0, 4.0 / 3.0).unwrap();
        let engine = RatioEngine::new(&carrier, &data).unwrap();
        let a: Vec<f64> = (0..9).map(|i| (i + 1) as f64).collect();
        let b: Vec<f64> = (0..9).map(|i| (9 - i) as f64).collect();
        let psi = engine.convolve(&a, &b);
        assert_eq!(psi.len(), 17);
        for k in 0..17 {
            let direct: f64 = (0..9)
                .filter(|&i| k >= i && k - i < 9)
                .map(|i| a[i] * b[k - i])
                .sum::<f64>()
                * 0.25;
            assert_abs_diff_eq!(psi[k], direct, epsilon = 1e-9);
        }
    }

    #[test]
    fn ascent_trace_is_monotone() {
        let carrier = GroupCarrier::real_line(4.0, 1.0 / 16.0).unwrap();
        let opts = AscentOptions {
            max_iters: 150,
            ..Default::default()
        };
        let init = (random_init(&carrier, 5), random_init(&carrier, 6));
        let state = maximize_ratio(&carrier, 4.0 / 3.0, 4.0 / 3.0, init, &opts).unwrap();
        for w in state.trace.windows(2) {
            assert!(w[1].1 >= w[0].1 - 1e-12, "ratio decreased: {w:?}");
        }
    }

    #[test]
    fn cyclic_maximum_is_one_near_constants() {
        let carrier = GroupCarrier::cyclic(32, 1.0).unwrap();
        let opts = AscentOptions {
            max_iters: 4000,
            grad_tol: 1e-10,
            ..Default::default()
        };
        let init = (random_init(&carrier, 1), random_init(&carrier, 2));
        let state = maximize_ratio(&carrier, 4.0 / 3.0, 4.0 / 3.0, init, &opts).unwrap();
        assert!(
            (state.ratio - 1.0).abs() <= 1e-6,
            "cyclic ratio {} (status {:?})",
            state.ratio,
            state.status
        );
        // near-constant extremizer
        let mean: f64 = state.phi1.iter().sum::<f64>() / 32.0;
        let spread = state
            .phi1
            .iter()
            .map(|v| (v - mean).abs())
            .fold(0.0f64, f64::max);
        assert!(spread <= 1e-2 * mean, "profile far from constant");
    }

    #[test]
    fn symmetrization_never_decreases_the_objective() {
        // exact step-function norms: rearranging both factors cannot
        // shrink ‖φ₁*φ₂‖_q / (‖φ₁‖‖φ₂‖) in the q > 1 regime
        let carrier = GroupCarrier::real_line(4.0, 1.0 / 8.0).unwrap();
        let q = 2.0;
        let p = 4.0 / 3.0;
        for seed in 0..20 {
            let a = random_init(&carrier, seed);
            let b = random_init(&carrier, seed + 1000);
            let sa = profile_to_step(&carrier, &a).unwrap();
            let sb = profile_to_step(&carrier, &b).unwrap();
            let ratio = |x: &StepFunction, y: &StepFunction| {
                crate::piecewise::conv_steps(x, y).lp_norm(q) / (x.lp_norm(p) * y.lp_norm(p))
            };
            let plain = ratio(&sa, &sb);
            let symmetrized = ratio(&rearrange_step(&sa), &rearrange_step(&sb));
            assert!(
                symmetrized >= plain - 1e-9,
                "symmetrization lost ratio at seed {seed}: {plain} -> {symmetrized}"
            );
        }
    }

    #[test]
    fn stalled_or_converged_reports_best_state() {
        let carrier = GroupCarrier::real_line(2.0, 0.25).unwrap();
        let opts = AscentOptions {
            max_iters: 5000,
            grad_tol: 1e-12,
            ..Default::default()
        };
        let init = (random_init(&carrier, 9), random_init(&carrier, 10));
        let state = maximize_ratio(&carrier, 4.0 / 3.0, 4.0 / 3.0, init, &opts).unwrap();
        assert!(state.ratio > 0.0);
        assert!(matches!(
            state.status,
            AscentStatus::Converged | AscentStatus::Stalled | AscentStatus::MaxIters
        ));
    }

    #[test]
    fn regime_gates() {
        let carrier = line_carrier();
        let init = (random_init(&carrier, 1), random_init(&carrier, 2));
        assert!(matches!(
            maximize_ratio(&carrier, 0.5, 0.5, init.clone(), &AscentOptions::default()),
            Err(ExtremizeError::WrongRegime(_))
        ));
        assert!(matches!(
            minimize_ratio(&carrier, 1.5, 1.5, init, &AscentOptions::default()),
            Err(ExtremizeError::WrongRegime(_))
        ));
    }
}
