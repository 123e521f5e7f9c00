//! Cyclic windows carrying many elements of `A`, and the concentration
//! guarantee `|A ∩ I| ≥ M(β, η)·|A|` with `η = |1̂_A(1)|/|A|`.
//!
//! An interval "of length βp" is the closed arc `{s, s+1, …, s+⌊βp⌋}`, i.e.
//! `⌊βp⌋ + 1` consecutive residues: the length is measured as the distance
//! between its end points.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::bounds::{concentration_m, cosine_term, sinc_g, sinc_g_inverse};
use crate::error::{domain, Error, Result};
use crate::fourier::coefficient_magnitude;
use crate::residue::ResidueSet;

/// Slack for comparing an integer count against a real-valued bound.
pub const COUNT_TOL: f64 = 1e-9;

const DICHOTOMY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntervalWindow {
    pub modulus: u64,
    pub start: u64,
    /// Number of consecutive residues.
    pub length: u64,
    /// `|A ∩ I|`.
    pub count: u64,
}

impl IntervalWindow {
    pub fn contains(&self, a: u64) -> bool {
        (a + self.modulus - self.start) % self.modulus < self.length
    }

    /// Offset of `a` from the window start, if inside.
    pub fn offset(&self, a: u64) -> Option<u64> {
        let d = (a + self.modulus - self.start % self.modulus) % self.modulus;
        (d < self.length).then_some(d)
    }

    pub fn residues(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.length).map(|i| (self.start + i) % self.modulus)
    }
}

/// Number of residues in the closed arc of length `βp`: `min(⌊βp⌋ + 1, p)`.
pub fn window_length(beta: f64, p: u64) -> u64 {
    // nudge so that exact products such as (1/4)·8 are not floored to 1 less
    let diameter = (beta * p as f64 * (1.0 + 1e-12)).floor() as u64;
    (diameter + 1).min(p)
}

/// The window of `length` consecutive residues holding the most elements of
/// `A`; ties go to the smallest start.
pub fn best_interval(a: &ResidueSet, length: u64) -> Result<IntervalWindow> {
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    let p = a.modulus();
    if length < 1 || length > p {
        return domain(format!("window length must lie in [1, {p}], got {length}"));
    }
    let bits = a.bits();
    let at = |i: u64| bits.get((i % p) as usize) as u64;
    let mut count: u64 = (0..length).map(at).sum();
    let (mut best_start, mut best_count) = (0, count);
    for s in 1..p {
        count = count + at(s + length - 1) - at(s - 1);
        if count > best_count {
            best_count = count;
            best_start = s;
        }
    }
    Ok(IntervalWindow {
        modulus: p,
        start: best_start,
        length,
        count: best_count,
    })
}

/// Report of one concentration check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationCheck {
    pub p: u64,
    #[serde(rename = "sizeA")]
    pub size_a: u64,
    pub beta: f64,
    #[serde(rename = "L")]
    pub length: u64,
    pub start: u64,
    pub count: u64,
    pub eta: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub holds: bool,
    pub margin: f64,
}

/// Checks `max_I |A ∩ I| ≥ M(β, η)·|A|` over windows of `window_length(β, p)`
/// residues, with `η` taken at frequency 1.
pub fn concentration_check(a: &ResidueSet, beta: f64) -> Result<ConcentrationCheck> {
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    let p = a.modulus();
    let size = a.len() as f64;
    let eta = (coefficient_magnitude(a, 1) / size).min(1.0);
    let m = concentration_m(beta, eta)?.m;
    let window = best_interval(a, window_length(beta, p))?;
    let margin = window.count as f64 - m * size;
    Ok(ConcentrationCheck {
        p,
        size_a: a.len() as u64,
        beta,
        length: window.length,
        start: window.start,
        count: window.count,
        eta,
        m,
        holds: margin >= -COUNT_TOL * size,
        margin,
    })
}

/// Which hypothesis of the `β`-vs-`1/4` dichotomy is met.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DichotomyBranch {
    /// `β⁻¹·cosine term ≥ 2`, which forces `β ≥ 1/4`.
    CosineBranchImpliesBetaGeQuarter,
    /// `π / g⁻¹(η·g(πβ)) ≥ 2`, which forces `β ≤ 1/4`.
    SincBranchImpliesBetaLeQuarter,
    /// Both hypotheses hold; only possible at `β = 1/4`.
    BothAtQuarter,
    NeitherTriggered,
}

/// Evaluates both hypotheses for `0 ≤ η ≤ 1/√2`, `0 < β ≤ 1/3` and checks the
/// matching conclusion, returning `DichotomyViolated` if it fails.
pub fn quarter_dichotomy(eta: f64, beta: f64) -> Result<DichotomyBranch> {
    if !(0.0..=FRAC_1_SQRT_2 + DICHOTOMY_TOL).contains(&eta) {
        return domain(format!("eta must lie in [0, 1/sqrt 2], got {eta}"));
    }
    if !(beta > 0.0 && beta <= 1.0 / 3.0 + DICHOTOMY_TOL) {
        return domain(format!("beta must lie in (0, 1/3], got {beta}"));
    }
    let cosine_fires = cosine_term(beta, eta) / beta >= 2.0;
    let sinc_fires = PI / sinc_g_inverse(eta * sinc_g(PI * beta)?)? >= 2.0;
    if cosine_fires && beta < 0.25 - DICHOTOMY_TOL {
        return Err(Error::DichotomyViolated("beta >= 1/4"));
    }
    if sinc_fires && beta > 0.25 + DICHOTOMY_TOL {
        return Err(Error::DichotomyViolated("beta <= 1/4"));
    }
    Ok(match (cosine_fires, sinc_fires) {
        (true, true) => DichotomyBranch::BothAtQuarter,
        (true, false) => DichotomyBranch::CosineBranchImpliesBetaGeQuarter,
        (false, true) => DichotomyBranch::SincBranchImpliesBetaLeQuarter,
        (false, false) => DichotomyBranch::NeitherTriggered,
    })
}
