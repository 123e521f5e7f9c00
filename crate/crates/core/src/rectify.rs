//! Rectification of short windows and the end-to-end lower-bound pipeline.
//!
//! A subset `A0` of a window of `L` consecutive residues has all its sums
//! `a + t·a'` inside an integer interval of `(1+|t|)(L−1) + 1` values, so as
//! long as `(1+|t|)(L−1) < p` two sums agree in `Z` exactly when they agree
//! mod `p`. The pipeline replays, on one concrete set, the chain
//!
//! ```text
//! x|A| − w(t) = |S| ≥ |A0 + t·A0| ≥ (|t|+1)|A0| − w(t) ≥ (|t|+1)·B_t(x,c)·|A| − w(t)
//! ```
//!
//! and records a verdict for every link.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bounds::{concentration_m, critical_density, f_t, lower_bound_with, WTable};
use crate::error::{domain, Error, Result};
use crate::fourier::{eta_lower_bound, indicator_dft, normalize_with, sumset_ratio};
use crate::localize::{best_interval, window_length, IntervalWindow, COUNT_TOL};
use crate::residue::{IntegerSet, ResidueSet};

/// Maps each residue of `A0` to its integer representative in
/// `[start, start + L − 1]`.
pub fn lift_to_integers(a0: &ResidueSet, window: &IntervalWindow) -> Result<IntegerSet> {
    a0.elements()
        .iter()
        .map(|&a| {
            window
                .offset(a)
                .map(|d| window.start as i64 + d as i64)
                .ok_or(Error::ElementOutsideWindow {
                    element: a,
                    start: window.start,
                    length: window.length,
                })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectificationCheck {
    pub isomorphic: bool,
    pub residue_size: u64,
    pub integer_size: u64,
    /// `(1+|t|)(L−1) < p`, under which the sizes must agree.
    pub guaranteed: bool,
}

/// Compares `|A0 + t·A0|` mod `p` with the size of the same sumset of the lift.
pub fn rectification_check(a0: &ResidueSet, t: i64, window: &IntervalWindow) -> Result<RectificationCheck> {
    if a0.is_empty() {
        return Err(Error::EmptyInput);
    }
    let lift = lift_to_integers(a0, window)?;
    let residue_size = a0.sum_of_dilates(t)?.len() as u64;
    let integer_size = lift.sum_of_dilates(t)?.len() as u64;
    let spread = (1 + t.unsigned_abs() as u128) * (window.length as u128 - 1);
    Ok(RectificationCheck {
        isomorphic: residue_size == integer_size,
        residue_size,
        integer_size,
        guaranteed: spread < window.modulus as u128,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    /// The bound is not binding for this instance (e.g. a non-positive bias bound).
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub name: String,
    pub inputs: BTreeMap<String, f64>,
    pub value: f64,
    pub bound: f64,
    pub verdict: Verdict,
}

impl StepRecord {
    fn new(name: &str, inputs: &[(&str, f64)], value: f64, bound: f64, verdict: Verdict) -> Self {
        StepRecord {
            name: name.to_string(),
            inputs: inputs.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            value,
            bound,
            verdict,
        }
    }

    /// `value ≥ bound` up to `tol`.
    fn at_least(name: &str, inputs: &[(&str, f64)], value: f64, bound: f64, tol: f64) -> Self {
        let verdict = if value >= bound - tol {
            Verdict::Holds
        } else {
            Verdict::Fails
        };
        Self::new(name, inputs, value, bound, verdict)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineTrace {
    pub input: ResidueSet,
    pub t: i64,
    pub w: i64,
    pub s_size: u64,
    /// `(|S| + w(t)) / |A|`.
    pub x: f64,
    pub c: f64,
    pub critical_density: f64,
    pub lower_bound: f64,
    /// `c > c_t^(0)`: only the Cauchy-Davenport step applies.
    pub short_circuit: bool,
    pub beta: f64,
    /// `(1 − xc)/√x`.
    pub eta_bound: f64,
    pub normalizing_unit: Option<u64>,
    pub eta_at_1: Option<f64>,
    pub window: Option<IntervalWindow>,
    pub a0: Option<ResidueSet>,
    pub a0_lift: Option<IntegerSet>,
    /// `B_t(x,c) = M(β, (1 − xc)/√x)`, absent when `η` bound is non-positive.
    pub b_value: Option<f64>,
    pub ratio_bound_holds: Option<bool>,
    pub steps: Vec<StepRecord>,
    pub notes: Vec<String>,
}

impl PipelineTrace {
    pub fn failures(&self) -> impl Iterator<Item = &StepRecord> {
        self.steps.iter().filter(|s| s.verdict == Verdict::Fails)
    }

    pub fn all_hold(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn step(&self, name: &str) -> Option<&StepRecord> {
        self.steps.iter().find(|s| s.name == name)
    }
}

/// Runs the pipeline with `β = 1/(|t|+1)` and windows of `⌊p/(|t|+1)⌋ + 1` residues.
pub fn run_proof_pipeline(a: &ResidueSet, t: i64) -> Result<PipelineTrace> {
    run_proof_pipeline_with(a, t, &WTable::default())
}

pub fn run_proof_pipeline_with(a: &ResidueSet, t: i64, table: &WTable) -> Result<PipelineTrace> {
    let n = t.unsigned_abs();
    let length = (a.modulus() / (n + 1) + 1).min(a.modulus());
    run(a, t, 1.0 / (n + 1) as f64, length, table)
}

/// Same chain with an arbitrary `β ∈ (0, 1/2]`; the window has
/// `⌊βp⌋ + 1` residues and rectification may legitimately fail for large `β`.
pub fn run_pipeline_with_beta(a: &ResidueSet, t: i64, beta: f64, table: &WTable) -> Result<PipelineTrace> {
    if !(beta > 0.0 && beta <= 0.5) {
        return domain(format!("beta must lie in (0, 1/2], got {beta}"));
    }
    run(a, t, beta, window_length(beta, a.modulus()), table)
}

fn run(a: &ResidueSet, t: i64, beta: f64, length: u64, table: &WTable) -> Result<PipelineTrace> {
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = t.unsigned_abs();
    let w = table.get(t)?;
    let p = a.modulus();
    let size = a.len() as f64;
    let s = a.sum_of_dilates(t)?;
    let s_size = s.len() as u64;
    let x = sumset_ratio(s_size, a.len() as u64, w);
    let c = a.density();
    let c0 = critical_density(t)?;
    let lower_bound = lower_bound_with(p, a.len() as u64, t, table)?;
    let eta_bound = eta_lower_bound(x, c);

    let mut trace = PipelineTrace {
        input: a.clone(),
        t,
        w,
        s_size,
        x,
        c,
        critical_density: c0,
        lower_bound,
        short_circuit: c > c0,
        beta,
        eta_bound,
        normalizing_unit: None,
        eta_at_1: None,
        window: None,
        a0: None,
        a0_lift: None,
        b_value: None,
        ratio_bound_holds: None,
        steps: Vec::new(),
        notes: Vec::new(),
    };

    if trace.short_circuit {
        let cd = (2 * a.len() as u64 - 1).min(p) as f64;
        trace.notes.push(format!(
            "density {c:.6} exceeds c_t^(0) = {c0:.6}: Cauchy-Davenport branch, f_t(c) = {}",
            f_t(t, c)?
        ));
        trace.steps.push(StepRecord::at_least(
            "cauchy_davenport",
            &[("sizeA", size), ("p", p as f64)],
            s_size as f64,
            cd,
            0.0,
        ));
        trace.steps.push(StepRecord::at_least(
            "lower_bound",
            &[("c", c), ("w", w as f64)],
            s_size as f64,
            lower_bound,
            COUNT_TOL,
        ));
        return Ok(trace);
    }

    // bias lower bound
    let spectrum = indicator_dft(a)?;
    let bias_bound = eta_bound * size;
    let verdict = if bias_bound <= 0.0 {
        trace
            .notes
            .push("bias lower bound is non-positive: chain not binding for this instance".into());
        Verdict::Vacuous
    } else if spectrum.bias >= bias_bound - COUNT_TOL * size {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    trace.steps.push(StepRecord::new(
        "fourier_bias",
        &[("x", x), ("c", c), ("argmax", spectrum.bias_argmax as f64)],
        spectrum.bias,
        bias_bound,
        verdict,
    ));

    // move the bias to frequency 1
    let (normalized, unit) = normalize_with(a, &spectrum);
    let eta_at_1 = (crate::fourier::coefficient_magnitude(&normalized, 1) / size).min(1.0);
    trace.normalizing_unit = Some(unit);
    trace.eta_at_1 = Some(eta_at_1);
    trace.steps.push(StepRecord::at_least(
        "normalization",
        &[("unit", unit as f64)],
        eta_at_1 * size,
        spectrum.bias,
        1e-9 * size.max(1.0),
    ));

    // concentration on a window
    let window = best_interval(&normalized, length)?;
    let a0 = ResidueSet::new(p, normalized.elements().iter().copied().filter(|&e| window.contains(e)))?;
    let window_m = concentration_m(beta, eta_at_1)?.m;
    trace.steps.push(StepRecord::at_least(
        "window_concentration",
        &[("beta", beta), ("eta", eta_at_1), ("L", length as f64)],
        window.count as f64,
        window_m * size,
        COUNT_TOL * size,
    ));

    let b_value = if eta_bound > 0.0 {
        Some(concentration_m(beta, eta_bound.min(1.0))?.m)
    } else {
        None
    };
    trace.b_value = b_value;
    trace.steps.push(match b_value {
        Some(b) => StepRecord::at_least(
            "concentration",
            &[("beta", beta), ("eta_bound", eta_bound)],
            a0.len() as f64,
            b * size,
            COUNT_TOL * size,
        ),
        None => StepRecord::new(
            "concentration",
            &[("beta", beta), ("eta_bound", eta_bound)],
            a0.len() as f64,
            0.0,
            Verdict::Vacuous,
        ),
    });

    // rectification and the integer bound
    let rect = rectification_check(&a0, t, &window)?;
    let lift = lift_to_integers(&a0, &window)?;
    if !rect.guaranteed {
        trace.notes.push(format!(
            "window of {length} residues is too long for guaranteed rectification at p = {p}"
        ));
    }
    let rect_verdict = match (rect.isomorphic, rect.guaranteed) {
        (true, _) => Verdict::Holds,
        (false, true) => Verdict::Fails,
        (false, false) => Verdict::Vacuous,
    };
    trace.steps.push(StepRecord::new(
        "rectification",
        &[("L", length as f64), ("guaranteed", rect.guaranteed as u8 as f64)],
        rect.integer_size as f64,
        rect.residue_size as f64,
        rect_verdict,
    ));
    trace.steps.push(StepRecord::at_least(
        "integer_bound",
        &[("sizeA0", a0.len() as f64), ("w", w as f64)],
        rect.integer_size as f64,
        (n as f64 + 1.0) * a0.len() as f64 - w as f64,
        0.0,
    ));
    trace.steps.push(StepRecord::at_least(
        "sumset_monotone",
        &[],
        s_size as f64,
        rect.residue_size as f64,
        0.0,
    ));

    let ratio_step = match b_value {
        Some(b) => {
            let holds = x >= (n as f64 + 1.0) * b - COUNT_TOL;
            trace.ratio_bound_holds = Some(holds);
            StepRecord::new(
                "ratio_bound",
                &[("B", b)],
                x,
                (n as f64 + 1.0) * b,
                if holds { Verdict::Holds } else { Verdict::Fails },
            )
        }
        None => StepRecord::new("ratio_bound", &[], x, 0.0, Verdict::Vacuous),
    };
    trace.steps.push(ratio_step);
    trace.steps.push(StepRecord::at_least(
        "lower_bound",
        &[("c", c), ("w", w as f64)],
        s_size as f64,
        lower_bound,
        COUNT_TOL,
    ));

    trace.window = Some(window);
    trace.a0 = Some(a0);
    trace.a0_lift = Some(lift);
    Ok(trace)
}
