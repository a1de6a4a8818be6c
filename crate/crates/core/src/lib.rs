//! Exact rearrangement and convolution-inequality toolkit on models of
//! unimodular locally compact groups.
//!
//! The library computes, at desk scale and mostly in closed form:
//!
//! * symmetric decreasing rearrangements `φ*` of finitely supported
//!   functions on group carriers ([`rearrange`]),
//! * exact convolutions of step functions on `ℝ` and group-algebra
//!   convolutions on finite carriers ([`piecewise`], [`groups`]),
//! * integrals `∫ f∘ψ` for convex `f` with `f(0) = 0` ([`convexity`],
//!   [`piecewise::integrate_compose`]),
//! * the sharp Young / Hausdorff-Young constant chain `B(p)`, `q(P)`,
//!   `C(P)` ([`constants`]),
//! * verification campaigns for the inequality
//!   `∫_G f∘(φ₁*φ₂) ≤ ∫_ℝ f∘(φ₁**φ₂*)` together with its corollaries and
//!   the closed-form family showing convexity of `f` is necessary
//!   ([`lab`], [`figures`]),
//! * projected gradient search for empirical Young-ratio extremizers
//!   ([`extremize`]).

pub mod constants;
pub mod convexity;
pub mod extremize;
pub mod figures;
pub mod groups;
pub mod lab;
pub mod piecewise;
pub mod quad;
pub mod rearrange;
