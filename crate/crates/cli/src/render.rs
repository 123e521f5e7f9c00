//! Rendering of command results as JSON, CSV or text.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sumdil::bounds::BoundProfile;
use sumdil::fourier::{BiasSummary, FourierSpectrum};
use sumdil::localize::ConcentrationCheck;
use sumdil::rectify::{PipelineTrace, RectificationCheck};
use sumdil::search::{DeficiencyTable, LowerBoundReport, SearchReport};

use crate::Format;

/// Result of `bounds --solve-f`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolvedDensity {
    pub t: i64,
    pub f: f64,
    pub c: f64,
    /// `1/c`.
    pub inverse: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumsetOutput {
    pub input: String,
    pub t: i64,
    pub size: usize,
    pub elements: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierOutput {
    #[serde(flatten)]
    pub summary: BiasSummary,
    /// Lower bound on the bias implied by `|A + t·A|`, when `-t` was given.
    pub bias_bound: Option<f64>,
}

pub enum Output {
    SolvedDensity {
        t: i64,
        f: f64,
        c: f64,
        inverse: f64,
    },
    Profile(BoundProfile),
    Sumset {
        input: String,
        t: i64,
        size: usize,
        elements: Vec<i64>,
        text: String,
    },
    Fourier {
        spectrum: FourierSpectrum,
        bias_bound: Option<f64>,
    },
    Concentration(ConcentrationCheck),
    Rectify(RectificationCheck),
    Pipeline(Box<PipelineTrace>),
    Search(SearchReport),
    Deficiency(DeficiencyTable),
    Verify(LowerBoundReport),
}

pub struct Rendered {
    pub output: Output,
    pub code: u8,
}

impl From<Output> for Rendered {
    fn from(output: Output) -> Self {
        Rendered { output, code: 0 }
    }
}

impl Rendered {
    pub fn with_code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }
}

/// Six significant digits, `%g` style.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&exp) {
        let s = format!("{x:.5e}");
        let (mant, e) = s.split_once('e').unwrap();
        let mant = trim_zeros(mant);
        return format!("{mant}e{e}");
    }
    trim_zeros(&format!("{:.*}", (5 - exp) as usize, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn opt6(v: Option<f64>) -> String {
    v.map(sig6).unwrap_or_else(|| "-".into())
}

fn json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| e.to_string())
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| e.to_string())?;
    for row in rows {
        w.write_record(&row).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn search_row(r: &SearchReport) -> Vec<String> {
    vec![
        r.p.map_or("integers".into(), |p| p.to_string()),
        r.t.to_string(),
        r.k.to_string(),
        r.min_sumset_size.to_string(),
        opt(r.deficiency()),
        r.witnesses_truncated.to_string(),
        r.sets_examined.to_string(),
        r.wall_time_secs.to_string(),
    ]
}

const SEARCH_HEADER: [&str; 8] = [
    "p",
    "t",
    "k",
    "min",
    "deficiency",
    "witnesses_truncated",
    "sets_examined",
    "seconds",
];

impl Output {
    pub fn render(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Json => self.json(),
            Format::Csv => self.csv(),
            Format::Text => Ok(self.text()),
        }
    }

    fn json(&self) -> Result<String, String> {
        match self {
            Output::SolvedDensity { t, f, c, inverse } => json(&SolvedDensity {
                t: *t,
                f: *f,
                c: *c,
                inverse: *inverse,
            }),
            Output::Profile(p) => json(p),
            Output::Sumset {
                input,
                t,
                size,
                elements,
                ..
            } => json(&SumsetOutput {
                input: input.clone(),
                t: *t,
                size: *size,
                elements: elements.clone(),
            }),
            Output::Fourier { spectrum, bias_bound } => json(&FourierOutput {
                summary: spectrum.summary(),
                bias_bound: *bias_bound,
            }),
            Output::Concentration(c) => json(c),
            Output::Rectify(c) => json(c),
            Output::Pipeline(tr) => json(tr),
            Output::Search(r) => json(r),
            Output::Deficiency(tab) => json(tab),
            Output::Verify(r) => json(r),
        }
    }

    fn csv(&self) -> Result<String, String> {
        match self {
            Output::SolvedDensity { t, f, c, inverse } => csv_rows(
                &["t", "f", "c", "inverse"],
                [vec![t.to_string(), f.to_string(), c.to_string(), inverse.to_string()]],
            ),
            Output::Profile(p) => csv_rows(
                &["t", "c", "c0", "f", "w", "bound"],
                [vec![
                    p.t.to_string(),
                    p.c.to_string(),
                    p.c0.to_string(),
                    p.f.to_string(),
                    opt(p.w),
                    opt(p.bound),
                ]],
            ),
            Output::Sumset {
                input,
                t,
                size,
                elements,
                ..
            } => csv_rows(
                &["input", "t", "size", "elements"],
                [vec![input.clone(), t.to_string(), size.to_string(), join(elements)]],
            ),
            Output::Fourier { spectrum, .. } => csv_rows(
                &["r", "magnitude"],
                spectrum
                    .magnitudes
                    .iter()
                    .enumerate()
                    .map(|(r, m)| vec![r.to_string(), m.to_string()]),
            ),
            Output::Concentration(c) => csv_rows(
                &[
                    "p", "sizeA", "beta", "L", "start", "count", "eta", "M", "holds", "margin",
                ],
                [vec![
                    c.p.to_string(),
                    c.size_a.to_string(),
                    c.beta.to_string(),
                    c.length.to_string(),
                    c.start.to_string(),
                    c.count.to_string(),
                    c.eta.to_string(),
                    c.m.to_string(),
                    c.holds.to_string(),
                    c.margin.to_string(),
                ]],
            ),
            Output::Rectify(c) => csv_rows(
                &["isomorphic", "residue_size", "integer_size", "guaranteed"],
                [vec![
                    c.isomorphic.to_string(),
                    c.residue_size.to_string(),
                    c.integer_size.to_string(),
                    c.guaranteed.to_string(),
                ]],
            ),
            Output::Pipeline(tr) => csv_rows(
                &["step", "value", "bound", "verdict"],
                tr.steps.iter().map(|s| {
                    vec![
                        s.name.clone(),
                        s.value.to_string(),
                        s.bound.to_string(),
                        verdict_name(s.verdict).to_string(),
                    ]
                }),
            ),
            Output::Search(r) => csv_rows(&SEARCH_HEADER, [search_row(r)]),
            Output::Deficiency(tab) => csv_rows(
                &["p", "t", "k", "min", "deficiency", "degenerate", "witness"],
                tab.rows.iter().map(|row| {
                    vec![
                        tab.p.to_string(),
                        tab.t.to_string(),
                        row.k.to_string(),
                        row.min_size.to_string(),
                        opt(row.deficiency),
                        row.degenerate.to_string(),
                        join(&row.witness),
                    ]
                }),
            ),
            Output::Verify(r) => csv_rows(
                &["p", "t", "sets_checked", "violations", "min_slack", "seconds"],
                [vec![
                    r.p.to_string(),
                    r.t.to_string(),
                    r.sets_checked.to_string(),
                    r.violations.len().to_string(),
                    r.min_slack.to_string(),
                    r.wall_time_secs.to_string(),
                ]],
            ),
        }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        match self {
            Output::SolvedDensity { t, f, c, inverse } => {
                let _ = writeln!(s, "t = {t}, f = {}", sig6(*f));
                let _ = writeln!(s, "c = {} (1/c = {})", sig6(*c), sig6(*inverse));
            }
            Output::Profile(p) => {
                let _ = writeln!(s, "t = {}, c = {}", p.t, sig6(p.c));
                let _ = writeln!(s, "c0 = {}", sig6(p.c0));
                let _ = writeln!(s, "f = {}", sig6(p.f));
                let _ = writeln!(s, "w = {}", p.w.map_or("unknown".into(), |w| w.to_string()));
                if let (Some(p_), Some(size), Some(b)) = (p.p, p.size_a, p.bound) {
                    let _ = writeln!(s, "bound (p = {p_}, |A| = {size}) = {}", sig6(b));
                }
                if p.no_improvement {
                    let _ = writeln!(s, "no improvement for |t| = 3 over Cauchy-Davenport");
                }
            }
            Output::Sumset {
                input, t, size, text, ..
            } => {
                let _ = writeln!(s, "A = {input}, t = {t}");
                let _ = writeln!(s, "A + t*A = {text}");
                let _ = writeln!(s, "size = {size}");
            }
            Output::Fourier { spectrum, bias_bound } => {
                let sum = spectrum.summary();
                let _ = writeln!(s, "p = {}, |A| = {}", sum.p, sum.size_a);
                let _ = writeln!(s, "bias = {} at r = {}", sig6(sum.bias), sum.argmax);
                let _ = writeln!(s, "eta = {}", sig6(sum.eta));
                if let Some(b) = bias_bound {
                    let _ = writeln!(s, "bias lower bound = {}", sig6(*b));
                }
            }
            Output::Concentration(c) => {
                let _ = writeln!(s, "p = {}, |A| = {}, beta = {}", c.p, c.size_a, sig6(c.beta));
                let _ = writeln!(s, "window: start {} length {} holds {}", c.start, c.length, c.count);
                let _ = writeln!(s, "eta = {}, M = {}", sig6(c.eta), sig6(c.m));
                let _ = writeln!(s, "guarantee {} (margin {})", holds(c.holds), sig6(c.margin));
            }
            Output::Rectify(c) => {
                let _ = writeln!(s, "|A0 + t*A0| mod p = {}", c.residue_size);
                let _ = writeln!(s, "|lift + t*lift| = {}", c.integer_size);
                let _ = writeln!(s, "isomorphic: {}, guaranteed: {}", c.isomorphic, c.guaranteed);
            }
            Output::Pipeline(tr) => {
                let _ = writeln!(s, "A = {}, t = {}, |S| = {}", tr.input, tr.t, tr.s_size);
                let _ = writeln!(
                    s,
                    "c = {}, c0 = {}, x = {}",
                    sig6(tr.c),
                    sig6(tr.critical_density),
                    sig6(tr.x)
                );
                for step in &tr.steps {
                    let _ = writeln!(
                        s,
                        "  {:<16} {:<8} value {} bound {}",
                        step.name,
                        verdict_name(step.verdict),
                        sig6(step.value),
                        sig6(step.bound)
                    );
                }
                for note in &tr.notes {
                    let _ = writeln!(s, "note: {note}");
                }
            }
            Output::Search(r) => {
                let domain = r.p.map_or("Z".to_string(), |p| format!("Z/{p}Z"));
                let _ = writeln!(s, "{domain}, t = {}, k = {}", r.t, r.k);
                let _ = writeln!(s, "min |A + t*A| = {}", r.min_sumset_size);
                if let Some(d) = r.deficiency() {
                    let _ = writeln!(s, "deficiency = {d}");
                }
                let _ = writeln!(s, "sets examined = {}", r.sets_examined);
                for b in &r.bound_comparisons {
                    let tag = if b.attained {
                        "attained"
                    } else if b.satisfied {
                        "ok"
                    } else {
                        "not satisfied"
                    };
                    let _ = writeln!(s, "  {:<14} {:>10} {tag}", b.name, sig6(b.value));
                }
                let more = if r.witnesses_truncated { " (truncated)" } else { "" };
                let _ = writeln!(s, "witnesses{more}:");
                for w in &r.witnesses {
                    let _ = writeln!(
                        s,
                        "  {{{}}}",
                        w.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
                    );
                }
            }
            Output::Deficiency(tab) => {
                let _ = writeln!(s, "p = {}, t = {}", tab.p, tab.t);
                for row in &tab.rows {
                    let flag = if row.degenerate { " (degenerate)" } else { "" };
                    let _ = writeln!(
                        s,
                        "  k = {:<4} min = {:<6} deficiency = {}{flag}",
                        row.k,
                        row.min_size,
                        opt(row.deficiency)
                    );
                }
                let _ = writeln!(s, "empirical c = {}", tab.empirical_c);
            }
            Output::Verify(r) => {
                let _ = writeln!(s, "p = {}, t = {}, sets checked = {}", r.p, r.t, r.sets_checked);
                let _ = writeln!(s, "violations = {}", r.violations.len());
                for v in r.violations.iter().take(10) {
                    let _ = writeln!(s, "  {:?}: |S| = {} < {}", v.set, v.sumset_size, sig6(v.bound));
                }
                let _ = writeln!(s, "min slack = {} at {:?}", opt6(Some(r.min_slack)), r.min_slack_set);
            }
        }
        s
    }
}

fn holds(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

fn verdict_name(v: sumdil::Verdict) -> &'static str {
    match v {
        sumdil::Verdict::Holds => "holds",
        sumdil::Verdict::Fails => "fails",
        sumdil::Verdict::Vacuous => "vacuous",
    }
}
