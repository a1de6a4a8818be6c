//! Exact rational data for the closed-form counterexample family:
//! the inputs `φ₁ = 1_(−1,1)/2` and the two-level comb `φ₂`, the
//! rearrangement `φ₂*`, and the two convolutions `φ₁*φ₂` and `φ₁**φ₂*`.
//!
//! All five graphs are piecewise with breakpoints and values that are
//! rational in `(λ, y₁, y₂)`, so they are computed in exact rational
//! arithmetic and rendered to CSV (and minimal SVG polylines) without
//! rounding. A float cross-check against the generic pipeline guards the
//! closed forms.

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::lab::{counterexample_pair, LabError};
use crate::piecewise::conv_steps;
use crate::rearrange::{rearrange_step, rearranged_convolution};

pub type Rat = Rational64;

/// Step graph with exact rational pieces `(left, right, value)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalStep {
    pub pieces: Vec<(Rat, Rat, Rat)>,
}

/// Piecewise-linear graph with exact rational nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalPolyline {
    pub nodes: Vec<(Rat, Rat)>,
}

/// The five figure datasets of the family at one parameter triple.
#[derive(Clone, Debug)]
pub struct FigureSet {
    /// `φ₁ = φ₁*`
    pub phi1: RationalStep,
    /// the two-level comb `φ₂`
    pub phi2: RationalStep,
    /// `φ₂*`
    pub phi2_star: RationalStep,
    /// `φ₁ * φ₂`
    pub conv: RationalPolyline,
    /// `φ₁* * φ₂*`
    pub rearranged: RationalPolyline,
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn push_piece(pieces: &mut Vec<(Rat, Rat, Rat)>, l: Rat, r: Rat, v: Rat) {
    if r > l {
        if let Some(last) = pieces.last_mut() {
            if last.1 == l && last.2 == v {
                last.1 = r;
                return;
            }
        }
        pieces.push((l, r, v));
    }
}

fn push_node(nodes: &mut Vec<(Rat, Rat)>, x: Rat, y: Rat) {
    if let Some(&(lx, ly)) = nodes.last() {
        if lx == x {
            assert_eq!(ly, y, "closed form produced a jump at {x}");
            return;
        }
    }
    nodes.push((x, y));
}

/// Exact figure data; requires `0 ≤ λ ≤ 1` and `0 ≤ y₁ ≤ y₂`.
pub fn figure_set(lambda: Rat, y1: Rat, y2: Rat) -> Result<FigureSet, LabError> {
    let zero = Rat::zero();
    let one = rat(1, 1);
    if lambda < zero || lambda > one || y1 < zero || y2 < y1 {
        return Err(LabError::ParameterOutOfRange(format!(
            "need 0 <= lambda <= 1 and 0 <= y1 <= y2, got lambda={lambda}, y1={y1}, y2={y2}"
        )));
    }
    let two = rat(2, 1);
    let half = rat(1, 2);
    let l2 = two * lambda;

    let phi1 = RationalStep {
        pieces: vec![(-one, one, half)],
    };

    let mut phi2_pieces = vec![];
    push_piece(&mut phi2_pieces, rat(-5, 1), rat(-3, 1), y1);
    push_piece(&mut phi2_pieces, rat(-3, 1), -one - l2, y2);
    push_piece(&mut phi2_pieces, -one - l2, -one, y1);
    push_piece(&mut phi2_pieces, -one, one, y2);
    push_piece(&mut phi2_pieces, one, one + l2, y1);
    push_piece(&mut phi2_pieces, one + l2, rat(3, 1), y2);
    push_piece(&mut phi2_pieces, rat(3, 1), rat(5, 1), y1);
    let phi2 = RationalStep {
        pieces: phi2_pieces,
    };

    let inner = rat(3, 1) - l2;
    let mut star_pieces = vec![];
    push_piece(&mut star_pieces, rat(-5, 1), -inner, y1);
    push_piece(&mut star_pieces, -inner, inner, y2);
    push_piece(&mut star_pieces, inner, rat(5, 1), y1);
    let phi2_star = RationalStep {
        pieces: star_pieces,
    };

    let plateau = lambda * y1 + (one - lambda) * y2;
    let mut conv_nodes = vec![];
    push_node(&mut conv_nodes, rat(-6, 1), zero);
    push_node(&mut conv_nodes, rat(-4, 1), y1);
    push_node(&mut conv_nodes, -(l2 + two), plateau);
    push_node(&mut conv_nodes, -l2, plateau);
    push_node(&mut conv_nodes, zero, y2);
    push_node(&mut conv_nodes, l2, plateau);
    push_node(&mut conv_nodes, l2 + two, plateau);
    push_node(&mut conv_nodes, rat(4, 1), y1);
    push_node(&mut conv_nodes, rat(6, 1), zero);
    let conv = RationalPolyline { nodes: conv_nodes };

    let mut re_nodes = vec![];
    push_node(&mut re_nodes, rat(-6, 1), zero);
    push_node(&mut re_nodes, rat(-4, 1), y1);
    push_node(&mut re_nodes, -(rat(4, 1) - l2), y1);
    push_node(&mut re_nodes, -(two - l2), y2);
    push_node(&mut re_nodes, two - l2, y2);
    push_node(&mut re_nodes, rat(4, 1) - l2, y1);
    push_node(&mut re_nodes, rat(4, 1), y1);
    push_node(&mut re_nodes, rat(6, 1), zero);
    let rearranged = RationalPolyline { nodes: re_nodes };

    Ok(FigureSet {
        phi1,
        phi2,
        phi2_star,
        conv,
        rearranged,
    })
}

/// Verifies the rational closed forms against the float pipeline at all
/// rational nodes; returns the worst absolute deviation.
pub fn cross_check_against_pipeline(
    lambda: Rat,
    y1: Rat,
    y2: Rat,
) -> Result<f64, LabError> {
    let set = figure_set(lambda, y1, y2)?;
    let lf = rat_f64(lambda);
    let (p1, p2) = counterexample_pair(lf, rat_f64(y1), rat_f64(y2))?;
    let conv = conv_steps(&p1, &p2);
    let rearr = rearranged_convolution(&p1, &p2)?;
    let star = rearrange_step(&p2);
    let mut worst = 0.0f64;
    for &(x, y) in &set.conv.nodes {
        worst = worst.max((conv.eval(rat_f64(x)) - rat_f64(y)).abs());
    }
    for &(x, y) in &set.rearranged.nodes {
        worst = worst.max((rearr.eval(rat_f64(x)) - rat_f64(y)).abs());
    }
    for &(l, r, v) in &set.phi2_star.pieces {
        let mid = rat_f64(l + r) / 2.0;
        worst = worst.max((star.eval(mid) - rat_f64(v)).abs());
    }
    Ok(worst)
}

pub fn rat_f64(r: Rat) -> f64 {
    r.to_f64().expect("rational fits in f64")
}

/// Renders `7/3` style exact values; integers drop the denominator.
pub fn rat_string(r: Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn step_csv(step: &RationalStep) -> String {
    let mut out = String::from("x_left,x_right,value\n");
    for &(l, r, v) in &step.pieces {
        out.push_str(&format!(
            "{},{},{}\n",
            rat_string(l),
            rat_string(r),
            rat_string(v)
        ));
    }
    out
}

pub fn polyline_csv(poly: &RationalPolyline) -> String {
    let mut out = String::from("x,y\n");
    for &(x, y) in &poly.nodes {
        out.push_str(&format!("{},{}\n", rat_string(x), rat_string(y)));
    }
    out
}

/// The five CSV bodies in figure order (inputs as step rows, convolutions
/// as node lists).
pub fn figure_csvs(set: &FigureSet) -> [String; 5] {
    [
        step_csv(&set.phi1),
        step_csv(&set.phi2),
        step_csv(&set.phi2_star),
        polyline_csv(&set.conv),
        polyline_csv(&set.rearranged),
    ]
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 360.0;
const SVG_PAD: f64 = 24.0;

struct SvgFrame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl SvgFrame {
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let sx = SVG_PAD + (x - self.x_min) / (self.x_max - self.x_min) * (SVG_W - 2.0 * SVG_PAD);
        let sy =
            SVG_H - SVG_PAD - (y - self.y_min) / (self.y_max - self.y_min) * (SVG_H - 2.0 * SVG_PAD);
        (sx, sy)
    }
}

fn svg_document(polyline_points: &[(f64, f64)]) -> String {
    let xs: Vec<f64> = polyline_points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = polyline_points.iter().map(|p| p.1).collect();
    let frame = SvgFrame {
        x_min: xs.iter().cloned().fold(f64::INFINITY, f64::min) - 0.5,
        x_max: xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 0.5,
        y_min: 0.0f64.min(ys.iter().cloned().fold(f64::INFINITY, f64::min)) - 0.5,
        y_max: ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 0.5,
    };
    let pts: Vec<String> = polyline_points
        .iter()
        .map(|&(x, y)| {
            let (sx, sy) = frame.map(x, y);
            format!("{sx:.2},{sy:.2}")
        })
        .collect();
    let (ax0, ay) = frame.map(frame.x_min, 0.0);
    let (ax1, _) = frame.map(frame.x_max, 0.0);
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" viewBox=\"0 0 {SVG_W} {SVG_H}\">\n\
         <line x1=\"{ax0:.2}\" y1=\"{ay:.2}\" x2=\"{ax1:.2}\" y2=\"{ay:.2}\" stroke=\"#999\" stroke-width=\"1\"/>\n\
         <polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\" points=\"{}\"/>\n</svg>\n",
        pts.join(" ")
    )
}

/// Minimal static SVG rendering of a polyline dataset.
pub fn polyline_svg(poly: &RationalPolyline) -> String {
    let pts: Vec<(f64, f64)> = poly
        .nodes
        .iter()
        .map(|&(x, y)| (rat_f64(x), rat_f64(y)))
        .collect();
    svg_document(&pts)
}

/// SVG rendering of a step graph: horizontal strokes joined by verticals
/// at the jumps (the conventional way to draw a step function).
pub fn step_svg(step: &RationalStep) -> String {
    let mut pts = vec![];
    for &(l, r, v) in &step.pieces {
        pts.push((rat_f64(l), 0.0));
        pts.push((rat_f64(l), rat_f64(v)));
        pts.push((rat_f64(r), rat_f64(v)));
        pts.push((rat_f64(r), 0.0));
    }
    svg_document(&pts)
}

/// The five SVG bodies in figure order.
pub fn figure_svgs(set: &FigureSet) -> [String; 5] {
    [
        step_svg(&set.phi1),
        step_svg(&set.phi2),
        step_svg(&set.phi2_star),
        polyline_svg(&set.conv),
        polyline_svg(&set.rearranged),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_instance() -> FigureSet {
        figure_set(rat(2, 3), rat(1, 1), rat(3, 1)).unwrap()
    }

    #[test]
    fn phi2_breakpoints_match_axis_labels() {
        let set = paper_instance();
        let mut xs: Vec<Rat> = vec![];
        for &(l, r, _) in &set.phi2.pieces {
            xs.push(l);
            xs.push(r);
        }
        for expected in [
            rat(-5, 1),
            rat(-3, 1),
            rat(-7, 3), // −1 − 2λ
            rat(-1, 1),
            rat(1, 1),
            rat(7, 3), // 1 + 2λ
            rat(3, 1),
            rat(5, 1),
        ] {
            assert!(xs.contains(&expected), "missing breakpoint {expected}");
        }
    }

    #[test]
    fn plateau_values_match_axis_labels() {
        let set = paper_instance();
        let conv_ys: Vec<Rat> = set.conv.nodes.iter().map(|&(_, y)| y).collect();
        let re_ys: Vec<Rat> = set.rearranged.nodes.iter().map(|&(_, y)| y).collect();
        assert!(conv_ys.contains(&rat(3, 1)));
        assert!(conv_ys.contains(&rat(5, 3))); // λy₁ + (1−λ)y₂
        assert!(re_ys.contains(&rat(3, 1)));
        assert!(re_ys.contains(&rat(1, 1)));
    }

    #[test]
    fn csv_renders_exact_rationals() {
        let set = paper_instance();
        let csvs = figure_csvs(&set);
        assert!(csvs[1].contains("-7/3"), "{}", csvs[1]);
        assert!(csvs[3].contains("5/3"), "{}", csvs[3]);
        assert!(csvs[0].starts_with("x_left,x_right,value\n"));
        assert!(csvs[3].starts_with("x,y\n"));
        // φ₁ is the half-height indicator
        assert!(csvs[0].contains("-1,1,1/2"));
    }

    #[test]
    fn closed_forms_agree_with_pipeline() {
        for (l, a, b) in [
            (rat(2, 3), rat(1, 1), rat(3, 1)),
            (rat(0, 1), rat(1, 2), rat(2, 1)),
            (rat(1, 1), rat(1, 4), rat(5, 4)),
            (rat(1, 2), rat(0, 1), rat(1, 1)),
            (rat(3, 7), rat(2, 5), rat(2, 5)),
        ] {
            let worst = cross_check_against_pipeline(l, a, b).unwrap();
            assert!(worst <= 1e-12, "deviation {worst} at λ={l}, y1={a}, y2={b}");
        }
    }

    #[test]
    fn degenerate_lambda_merges_pieces() {
        // λ = 0 removes the inner y₁ bands
        let set = figure_set(rat(0, 1), rat(1, 1), rat(2, 1)).unwrap();
        for &(l, r, _) in &set.phi2.pieces {
            assert!(r > l);
        }
        let xs: Vec<Rat> = set.conv.nodes.iter().map(|&(x, _)| x).collect();
        assert!(xs.windows(2).all(|w| w[0] < w[1]), "{xs:?}");
    }

    #[test]
    fn svg_emission_is_wellformed() {
        let set = paper_instance();
        for svg in figure_svgs(&set) {
            assert!(svg.starts_with("<svg"));
            assert!(svg.contains("<polyline"));
            assert!(svg.ends_with("</svg>\n"));
        }
    }
}
