//! Bound functions for `|A + t·A|` in `Z/pZ` and their integer counterparts.
//!
//! For `|t| = 2` the function `f_2(c)` is the root `x ≥ 2` of
//! `3(1 − cx) = x^{3/2}`; for `|t| ≥ 3` it is the root of
//! `(|t|+1)·sin(π/(|t|+1))·(1 − cx) = x^{3/2}·sin(π/x)`. Both are written here
//! as `K_t·(1 − cx) = R_t(x)` with `K_t` the leading constant and `R_t`
//! strictly increasing on `[2, ∞)`. Above the critical density `c_t^(0)` the
//! function is the constant 2.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::residue::is_prime;
use crate::roots::{bisect, ABS_TOL};

/// Tolerance for accepting inputs that sit on a closed boundary up to rounding.
const EDGE_TOL: f64 = 1e-12;

fn check_t(t: i64) -> Result<u64> {
    let n = t.unsigned_abs();
    if n < 2 {
        return domain(format!("|t| must be at least 2, got t = {t}"));
    }
    Ok(n)
}

/// `g(u) = sin(u)/u` on `(0, π]`, with `g(π) = 0`.
pub fn sinc_g(u: f64) -> Result<f64> {
    if !(u > 0.0 && u <= PI) {
        return domain(format!("g is defined on (0, π], got {u}"));
    }
    if u == PI {
        return Ok(0.0);
    }
    Ok(u.sin() / u)
}

/// The inverse of `g` on `[0, 1)`, valued in `(0, π]`.
pub fn sinc_g_inverse(y: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&y) {
        return domain(format!("g^-1 is defined on [0, 1), got {y}"));
    }
    if y == 0.0 {
        return Ok(PI);
    }
    // g extended by continuity to g(0) = 1
    let g = |u: f64| if u == 0.0 { 1.0 } else { u.sin() / u };
    if y <= g(PI) {
        return Ok(PI);
    }
    bisect(|u| g(u) - y, 0.0, PI, ABS_TOL)
}

/// `K_t`: 3 for `|t| = 2`, `(|t|+1)·sin(π/(|t|+1))` otherwise.
fn leading_constant(n: u64) -> f64 {
    if n == 2 {
        3.0
    } else {
        let m = (n + 1) as f64;
        m * (PI / m).sin()
    }
}

/// `R_t(x)`: `x^{3/2}` for `|t| = 2`, `x^{3/2}·sin(π/x)` otherwise.
fn growth_term(n: u64, x: f64) -> f64 {
    if n == 2 {
        x.powf(1.5)
    } else {
        x.powf(1.5) * (PI / x).sin()
    }
}

/// Residual `K_t(1 − cx) − R_t(x)` of the equation defining `f_t(c)`.
pub fn defining_residual(t: i64, c: f64, x: f64) -> Result<f64> {
    let n = check_t(t)?;
    Ok(leading_constant(n) * (1.0 - c * x) - growth_term(n, x))
}

/// The two sides `(K_t(1 − cx), R_t(x))` of the defining equation.
pub fn defining_sides(t: i64, c: f64, x: f64) -> Result<(f64, f64)> {
    let n = check_t(t)?;
    Ok((leading_constant(n) * (1.0 - c * x), growth_term(n, x)))
}

/// The critical density `c_t^(0) = ½(1 − R_t(2)/K_t)`; exactly 0 for `|t| = 3`.
pub fn critical_density(t: i64) -> Result<f64> {
    let n = check_t(t)?;
    if n == 3 {
        return Ok(0.0);
    }
    Ok(0.5 * (1.0 - growth_term(n, 2.0) / leading_constant(n)))
}

/// `f_t(0)`, the largest value of `f_t`.
fn f_at_zero(n: u64) -> Result<f64> {
    match n {
        2 => Ok(3f64.powf(2.0 / 3.0)),
        3 => Ok(2.0),
        _ => {
            let k = leading_constant(n);
            // R_t(4) = 8 sin(π/4) > π > K_t, so the root lies in [2, 4].
            bisect(|x| k - growth_term(n, x), 2.0, 4.0, ABS_TOL)
        }
    }
}

/// `f_|t|(c)` for `0 ≤ c ≤ 1`.
pub fn f_t(t: i64, c: f64) -> Result<f64> {
    let n = check_t(t)?;
    if !(0.0..=1.0).contains(&c) {
        return domain(format!("density must lie in [0, 1], got {c}"));
    }
    let c0 = critical_density(t)?;
    if n == 3 || c > c0 {
        return Ok(2.0);
    }
    let hi = f_at_zero(n)?;
    if c == 0.0 {
        return Ok(hi);
    }
    let k = leading_constant(n);
    let residual = |x: f64| k * (1.0 - c * x) - growth_term(n, x);
    let (r_lo, r_hi) = (residual(2.0), residual(hi));
    if r_lo < -EDGE_TOL || r_hi > EDGE_TOL {
        return Err(Error::BracketFailure { lo: 2.0, hi });
    }
    if r_lo <= 0.0 {
        return Ok(2.0);
    }
    bisect(residual, 2.0, hi, ABS_TOL)
}

/// The density `c` with `f_t(c) = x`, for `2 ≤ x ≤ f_t(0)`.
///
/// The defining equation is linear in `c`, so `c = (1 − R_t(x)/K_t)/x`.
pub fn f_t_inverse_density(t: i64, x: f64) -> Result<f64> {
    let n = check_t(t)?;
    let top = f_at_zero(n)?;
    if !(x >= 2.0 - EDGE_TOL && x <= top + EDGE_TOL) {
        return domain(format!("target must lie in [2, {top}], got {x}"));
    }
    let c = (1.0 - growth_term(n, x) / leading_constant(n)) / x;
    Ok(c.max(0.0))
}

/// The two terms of `M(β, η)` and their maximum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationBound {
    pub beta: f64,
    pub eta: f64,
    pub term_cosine: f64,
    pub term_sinc: f64,
    #[serde(rename = "M")]
    pub m: f64,
}

impl ConcentrationBound {
    pub fn value(&self) -> f64 {
        self.m
    }
}

/// `(η + 1 − 2cos πβ) / (2(1 − cos πβ))`.
pub fn cosine_term(beta: f64, eta: f64) -> f64 {
    let cb = (PI * beta).cos();
    (eta + 1.0 - 2.0 * cb) / (2.0 * (1.0 - cb))
}

/// `πβ / g^{-1}(η·g(πβ))`.
pub fn sinc_term(beta: f64, eta: f64) -> Result<f64> {
    let pb = PI * beta;
    Ok(pb / sinc_g_inverse(eta * sinc_g(pb)?)?)
}

/// `M(β, η) = max(cosine term, sinc term)` for `β ∈ (0, 1/2]`, `η ∈ [0, 1]`.
pub fn concentration_m(beta: f64, eta: f64) -> Result<ConcentrationBound> {
    if !(beta > 0.0 && beta <= 0.5) {
        return domain(format!("beta must lie in (0, 1/2], got {beta}"));
    }
    if !(0.0..=1.0).contains(&eta) {
        return domain(format!("eta must lie in [0, 1], got {eta}"));
    }
    let (term_cosine, term_sinc) = if eta == 1.0 {
        (1.0, 1.0)
    } else {
        (cosine_term(beta, eta), sinc_term(beta, eta)?)
    };
    Ok(ConcentrationBound {
        beta,
        eta,
        term_cosine,
        term_sinc,
        m: term_cosine.max(term_sinc),
    })
}

/// Constants `w(t)` in the universal integer bound `|A + t·A| ≥ (1+|t|)|A| − w(t)`.
///
/// Keyed by `|t|`. The built-in entries are `w(2) = 2`, `w(3) = 4`, `w(4) = 10`;
/// further values must be supplied explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WTable {
    entries: BTreeMap<u64, i64>,
}

impl Default for WTable {
    fn default() -> Self {
        WTable {
            entries: BTreeMap::from([(2, 2), (3, 4), (4, 10)]),
        }
    }
}

impl WTable {
    pub fn with(mut self, t_abs: u64, w: i64) -> Self {
        self.entries.insert(t_abs, w);
        self
    }

    pub fn get(&self, t: i64) -> Result<i64> {
        let n = t.unsigned_abs();
        self.entries.get(&n).copied().ok_or(Error::UnknownConstant(n))
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }
}

/// `w(t)` from the built-in table; negative `t` uses `w(|t|)`.
pub fn w_constant(t: i64) -> Result<i64> {
    WTable::default().get(t)
}

/// `min(f_|t|(c)·|A| − w(t), p)` with `c = |A|/p`.
pub fn lower_bound(p: u64, size_a: u64, t: i64) -> Result<f64> {
    lower_bound_with(p, size_a, t, &WTable::default())
}

pub fn lower_bound_with(p: u64, size_a: u64, t: i64, table: &WTable) -> Result<f64> {
    if size_a == 0 {
        return Err(Error::EmptyInput);
    }
    let w = table.get(t)?;
    let c = size_a as f64 / p as f64;
    let f = f_t(t, c)?;
    Ok((f * size_a as f64 - w as f64).min(p as f64))
}

/// `min((f_|t|(c) − ε)·|A|, p)`: the large-`p` variant without `w(t)`.
/// No threshold on `p` is implied.
pub fn epsilon_bound(p: u64, size_a: u64, t: i64, epsilon: f64) -> Result<f64> {
    if size_a == 0 {
        return Err(Error::EmptyInput);
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return domain("epsilon must be positive");
    }
    let c = size_a as f64 / p as f64;
    Ok(((f_t(t, c)? - epsilon) * size_a as f64).min(p as f64))
}

/// Lower bounds for `|A + t·A|` over the integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceRule {
    /// `3|A| − 2`, any `|t| ≥ 2`.
    Trivial3,
    /// `⌈7|A|/2 − 5/2⌉`, `|t| ≥ 3`.
    SevenHalves,
    /// `4|A| − 4`, `|t| = 3`.
    ExactT3,
    /// `(1+t)|A| − ⌈t(t+2)/4⌉`, `t` prime.
    PrimeT,
    /// `(1+|t|)|A| − w(t)`.
    Universal,
}

impl ReferenceRule {
    pub const ALL: [ReferenceRule; 5] = [
        ReferenceRule::Trivial3,
        ReferenceRule::SevenHalves,
        ReferenceRule::ExactT3,
        ReferenceRule::PrimeT,
        ReferenceRule::Universal,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ReferenceRule::Trivial3 => "trivial3",
            ReferenceRule::SevenHalves => "seven_halves",
            ReferenceRule::ExactT3 => "exact_t3",
            ReferenceRule::PrimeT => "prime_t",
            ReferenceRule::Universal => "universal",
        }
    }
}

impl std::str::FromStr for ReferenceRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReferenceRule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown rule {s:?}")))
    }
}

pub fn integer_reference_bound(t: i64, k: i64, rule: ReferenceRule) -> Result<i64> {
    integer_reference_bound_with(t, k, rule, &WTable::default())
}

pub fn integer_reference_bound_with(t: i64, k: i64, rule: ReferenceRule, table: &WTable) -> Result<i64> {
    let not_applicable = |reason: String| {
        Err(Error::RuleNotApplicable {
            rule: rule.name().to_string(),
            reason,
        })
    };
    if k < 1 {
        return domain(format!("|A| must be at least 1, got {k}"));
    }
    let n = t.unsigned_abs() as i64;
    if n < 2 {
        return not_applicable(format!("t = {t} is one of -1, 0, 1"));
    }
    match rule {
        ReferenceRule::Trivial3 => Ok(3 * k - 2),
        ReferenceRule::SevenHalves => {
            if n < 3 {
                return not_applicable("needs |t| >= 3".into());
            }
            // ⌈(7k − 5)/2⌉ with 7k − 5 ≥ 2
            Ok((7 * k - 5 + 1) / 2)
        }
        ReferenceRule::ExactT3 => {
            if n != 3 {
                return not_applicable("needs |t| = 3".into());
            }
            Ok(4 * k - 4)
        }
        ReferenceRule::PrimeT => {
            if t < 2 || !is_prime(t as u64) {
                return not_applicable(format!("t = {t} is not a positive prime"));
            }
            let correction = (t * (t + 2) + 3) / 4;
            Ok((1 + t) * k - correction)
        }
        ReferenceRule::Universal => Ok((1 + n) * k - table.get(t)?),
    }
}

/// All bound quantities for one `(t, c)` pair, optionally tied to `(p, |A|)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundProfile {
    pub t: i64,
    pub c: f64,
    pub c0: f64,
    pub f: f64,
    pub w: Option<i64>,
    pub p: Option<u64>,
    pub size_a: Option<u64>,
    pub bound: Option<f64>,
    /// `|t| = 3`: the bound never beats Cauchy-Davenport.
    pub no_improvement: bool,
}

impl BoundProfile {
    pub fn new(t: i64, c: f64, table: &WTable) -> Result<Self> {
        Ok(BoundProfile {
            t,
            c,
            c0: critical_density(t)?,
            f: f_t(t, c)?,
            w: table.get(t).ok(),
            p: None,
            size_a: None,
            bound: None,
            no_improvement: t.unsigned_abs() == 3,
        })
    }

    pub fn for_set(p: u64, size_a: u64, t: i64, table: &WTable) -> Result<Self> {
        if size_a == 0 {
            return Err(Error::EmptyInput);
        }
        let mut prof = Self::new(t, size_a as f64 / p as f64, table)?;
        prof.p = Some(p);
        prof.size_a = Some(size_a);
        prof.bound = Some(prof.lower_bound(size_a, p)?);
        Ok(prof)
    }

    /// `ϑ_t = f_t(c) − 2`.
    pub fn theta(&self) -> f64 {
        self.f - 2.0
    }

    pub fn lower_bound(&self, size_a: u64, p: u64) -> Result<f64> {
        let w = self.w.ok_or(Error::UnknownConstant(self.t.unsigned_abs()))?;
        Ok((self.f * size_a as f64 - w as f64).min(p as f64))
    }
}
