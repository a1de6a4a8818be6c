//! Sharp-constant arithmetic: conjugate exponents, the Babenko-Beckner
//! constant `B(p) = p^{1/2p} / |p'|^{1/2p'}`, the Young exponent `q(P)`
//! with `1/q(P) = 1 − N + Σ 1/pₖ`, the sharp Young constant
//! `C(P) = ∏ B(pₖ) / B(q(P))`, and the Hausdorff-Young bound `B(p)`
//! obtained through the `C(P)^{2/p'}` chain for `p' ∈ 2ℤ`.
//!
//! Exponent bookkeeping is done in exact rational arithmetic whenever the
//! inputs are rational; floating point enters only at `B`.

use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConstantsError {
    #[error("conjugate exponent of p = 1 is not finite")]
    PEqualsOne,
    #[error("exponents inadmissible: need sum of 1/p_k > N - 1, got {sum} for N = {n}")]
    InadmissibleExponents { sum: f64, n: usize },
    #[error("exponent must be positive, got {0}")]
    NonPositiveExponent(f64),
    #[error("p' = {0} is not an even integer")]
    ConjugateNotEvenInteger(f64),
    #[error("cannot parse '{0}' as a rational number")]
    BadRational(String),
}

/// `p' = p/(p−1)`; negative for `p < 1`.
pub fn conjugate(p: f64) -> Result<f64, ConstantsError> {
    if !(p > 0.0) {
        return Err(ConstantsError::NonPositiveExponent(p));
    }
    if p == 1.0 {
        return Err(ConstantsError::PEqualsOne);
    }
    Ok(p / (p - 1.0))
}

/// Exact rational conjugate.
pub fn conjugate_rational(p: Rational64) -> Result<Rational64, ConstantsError> {
    if !p.is_positive() {
        return Err(ConstantsError::NonPositiveExponent(rat_to_f64(p)));
    }
    let one = Rational64::from_integer(1);
    if p == one {
        return Err(ConstantsError::PEqualsOne);
    }
    Ok(p / (p - one))
}

/// `B(p) = p^{1/2p} / |p'|^{1/2p'}` with `B(1) := 1` by continuity.
pub fn babenko_beckner(p: f64) -> f64 {
    assert!(p > 0.0, "B(p) needs p > 0");
    if p == 1.0 {
        return 1.0;
    }
    let pc = p / (p - 1.0);
    p.powf(0.5 / p) / pc.abs().powf(0.5 / pc)
}

/// Young exponent: `1/q(P) = 1 − N + Σ 1/pₖ`, requiring `Σ 1/pₖ > N − 1`.
pub fn q_of(exponents: &[f64]) -> Result<f64, ConstantsError> {
    for &p in exponents {
        if !(p > 0.0) {
            return Err(ConstantsError::NonPositiveExponent(p));
        }
    }
    let n = exponents.len();
    let sum: f64 = exponents.iter().map(|p| 1.0 / p).sum();
    let recip = 1.0 - n as f64 + sum;
    if recip <= 0.0 {
        return Err(ConstantsError::InadmissibleExponents { sum, n });
    }
    Ok(1.0 / recip)
}

/// Exact rational Young exponent.
pub fn q_of_rational(exponents: &[Rational64]) -> Result<Rational64, ConstantsError> {
    let one = Rational64::from_integer(1);
    for &p in exponents {
        if !p.is_positive() {
            return Err(ConstantsError::NonPositiveExponent(rat_to_f64(p)));
        }
    }
    let n = Rational64::from_integer(exponents.len() as i64);
    let sum: Rational64 = exponents.iter().map(|p| one / p).sum();
    let recip = one - n + sum;
    if recip <= Rational64::zero() {
        return Err(ConstantsError::InadmissibleExponents {
            sum: rat_to_f64(sum),
            n: exponents.len(),
        });
    }
    Ok(one / recip)
}

/// Sharp Young constant `C(P) = ∏ B(pₖ) / B(q(P))`.
pub fn c_of(exponents: &[f64]) -> Result<f64, ConstantsError> {
    let q = q_of(exponents)?;
    let prod: f64 = exponents.iter().map(|&p| babenko_beckner(p)).product();
    Ok(prod / babenko_beckner(q))
}

/// The constants bundle for an exponent tuple `P`.
#[derive(Clone, Debug)]
pub struct ExponentData {
    pub exponents: Vec<f64>,
    /// `p'ₖ`; `±∞` never occurs since construction rejects `pₖ = 1` only
    /// for the conjugate list, where it is recorded as `f64::INFINITY`.
    pub conjugates: Vec<f64>,
    pub q: f64,
    pub b_values: Vec<f64>,
    pub c: f64,
}

impl ExponentData {
    pub fn new(exponents: &[f64]) -> Result<Self, ConstantsError> {
        let q = q_of(exponents)?;
        let conjugates = exponents
            .iter()
            .map(|&p| if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) })
            .collect();
        let b_values: Vec<f64> = exponents.iter().map(|&p| babenko_beckner(p)).collect();
        let c = b_values.iter().product::<f64>() / babenko_beckner(q);
        Ok(ExponentData {
            exponents: exponents.to_vec(),
            conjugates,
            q,
            b_values,
            c,
        })
    }

    pub fn pair(p1: f64, p2: f64) -> Result<Self, ConstantsError> {
        Self::new(&[p1, p2])
    }

    pub fn all_above_one(&self) -> bool {
        self.exponents.iter().all(|&p| p > 1.0)
    }

    pub fn all_below_one(&self) -> bool {
        self.exponents.iter().all(|&p| p < 1.0)
    }
}

/// Hausdorff-Young bound for `1 < p ≤ 2` with even integer conjugate:
/// evaluates the full chain `C(p,…,p)^{2/p'}` with `N = p'/2` copies,
/// checks `q(P) = 2` and that the chain reproduces `B(p)` to `1e-12`,
/// then returns `B(p)`.
pub fn hausdorff_young_bound(p: Rational64) -> Result<f64, ConstantsError> {
    let one = Rational64::from_integer(1);
    let two = Rational64::from_integer(2);
    if !p.is_positive() || p <= one || p > two {
        return Err(ConstantsError::NonPositiveExponent(rat_to_f64(p)));
    }
    let pc = conjugate_rational(p)?;
    if !pc.is_integer() || pc.to_integer() % 2 != 0 {
        return Err(ConstantsError::ConjugateNotEvenInteger(rat_to_f64(pc)));
    }
    let copies = (pc.to_integer() / 2) as usize;
    let p_f = rat_to_f64(p);
    let tuple = vec![p; copies];
    let q_exact = q_of_rational(&tuple)?;
    assert_eq!(
        q_exact,
        Rational64::from_integer(2),
        "q(p,...,p) with p'/2 factors must be exactly 2"
    );
    let tuple_f: Vec<f64> = vec![p_f; copies];
    let c = c_of(&tuple_f)?;
    let chain = c.powf(2.0 / (copies as f64 * 2.0));
    let direct = babenko_beckner(p_f);
    assert!(
        (chain - direct).abs() <= 1e-12,
        "constant chain C(P)^(2/p') = {chain} disagrees with B(p) = {direct}"
    );
    Ok(direct)
}

/// Parses `"4/3"`, `"2"`, or a decimal such as `"0.5"` into an exact
/// rational.
pub fn parse_rational(text: &str) -> Result<Rational64, ConstantsError> {
    let s = text.trim();
    let bad = || ConstantsError::BadRational(text.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| bad())?;
        let d: i64 = den.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || frac_part.len() > 12 || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.starts_with('-');
        let i: i64 = if int_part == "-" || int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let scale = 10i64.pow(frac_part.len() as u32);
        let f: i64 = frac_part.parse().map_err(|_| bad())?;
        let num = i.abs() * scale + f;
        let signed = if negative || i < 0 { -num } else { num };
        return Ok(Rational64::new(signed, scale));
    }
    let n: i64 = s.parse().map_err(|_| bad())?;
    Ok(Rational64::from_integer(n))
}

pub fn rat_to_f64(r: Rational64) -> f64 {
    r.to_f64().expect("rational fits in f64")
}
