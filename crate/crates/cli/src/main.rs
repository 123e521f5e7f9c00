//! `sumdil`: command-line front end for the sums-of-dilates toolkit.
//!
//! Exit codes: 0 success, 1 a verification found a violation, 2 usage error,
//! 3 infeasible enumeration.

mod render;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sumdil::bounds::{f_t_inverse_density, BoundProfile, WTable};
use sumdil::fourier::{bias_lower_bound_with, indicator_dft};
use sumdil::literal::{parse_residue_set, SetLiteral};
use sumdil::localize::concentration_check;
use sumdil::rectify::{rectification_check, run_pipeline_with_beta, run_proof_pipeline_with};
use sumdil::search::{
    deficiency_explorer, exhaustive_min_sumset_integers_with, exhaustive_min_sumset_modp_with, verify_lower_bound_with,
    SampleMode, SearchOptions,
};
use sumdil::{Error, IntervalWindow};

use crate::render::{Output, Rendered};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "sumdil", version, about = "Sums of dilates A + t*A over Z/pZ and Z")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Worker threads for searches (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Extra w(t) constants as |t|=w, e.g. --w 5=9.
    #[arg(long = "w", global = true, value_parser = parse_w_entry)]
    w_entries: Vec<(u64, i64)>,
    #[command(subcommand)]
    command: Command,
}

fn parse_w_entry(s: &str) -> Result<(u64, i64), String> {
    let (k, v) = s.split_once('=').ok_or("expected |t|=w")?;
    Ok((
        k.trim().parse().map_err(|_| format!("bad |t| in {s:?}"))?,
        v.trim().parse().map_err(|_| format!("bad w in {s:?}"))?,
    ))
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Critical density, f_t(c), w(t) and the lower bound.
    Bounds(BoundsArgs),
    /// Sum of dilates A + t*A of a set literal.
    Sumset {
        set: String,
        #[arg(short, allow_negative_numbers = true)]
        t: i64,
    },
    /// Fourier spectrum and bias of a residue set.
    Fourier {
        set: String,
        /// Also report the bias lower bound for this t.
        #[arg(short, allow_negative_numbers = true)]
        t: Option<i64>,
    },
    /// Best window and the concentration guarantee.
    Localize {
        set: String,
        #[arg(long)]
        beta: f64,
    },
    /// Compare a residue sumset with its lift inside a window.
    Rectify {
        set: String,
        #[arg(short, allow_negative_numbers = true)]
        t: i64,
        #[arg(long)]
        start: u64,
        #[arg(long)]
        length: u64,
    },
    /// Replay the lower-bound chain on one set.
    Pipeline {
        set: String,
        #[arg(short, allow_negative_numbers = true)]
        t: i64,
        /// Use this beta instead of 1/(|t|+1).
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Exhaustive minimum of |A + t*A|.
    Search(SearchArgs),
    /// Check the lower bound on every (or sampled) subset of Z/pZ.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(short, allow_negative_numbers = true)]
    t: i64,
    /// Density c = |A|/p.
    #[arg(short, conflicts_with_all = ["p", "size", "solve_f"])]
    c: Option<f64>,
    #[arg(short, requires = "size")]
    p: Option<u64>,
    /// |A|, together with -p.
    #[arg(long = "size", requires = "p")]
    size: Option<u64>,
    /// Solve f_t(c) = X for the density c.
    #[arg(long = "solve-f")]
    solve_f: Option<f64>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(short, allow_negative_numbers = true)]
    t: i64,
    /// Search Z/pZ; omit to search the integers.
    #[arg(short)]
    p: Option<u64>,
    #[arg(short, conflicts_with = "k_range")]
    k: Option<u64>,
    /// Range lo..hi (inclusive) for the deficiency table.
    #[arg(long = "k-range")]
    k_range: Option<String>,
    /// Largest element for integer searches (default 3k).
    #[arg(long = "cap")]
    cap: Option<i64>,
    #[arg(long = "witnesses", default_value_t = 16)]
    witness_cap: usize,
    #[arg(long = "limit", default_value_t = sumdil::search::DEFAULT_ENUMERATION_LIMIT)]
    limit: f64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(short)]
    p: u64,
    #[arg(short, allow_negative_numbers = true)]
    t: i64,
    /// Number of random sets; omit for an exhaustive check.
    #[arg(long)]
    sample: Option<u64>,
    #[arg(long = "max-size")]
    max_size: Option<u64>,
}

enum Failure {
    Usage(String),
    Infeasible(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InfeasibleEnumeration { .. } => Failure::Infeasible(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<u64>, Failure> {
    let bad = || Failure::Usage(format!("bad range {s:?}, expected lo..hi"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    Ok(lo..=hi)
}

fn run(cli: &Cli) -> Result<Rendered, Failure> {
    let table = cli
        .w_entries
        .iter()
        .fold(WTable::default(), |tab, &(k, w)| tab.with(k, w));
    Ok(match &cli.command {
        Command::Bounds(args) => {
            if let Some(x) = args.solve_f {
                let c = f_t_inverse_density(args.t, x)?;
                Rendered::from(Output::SolvedDensity {
                    t: args.t,
                    f: x,
                    c,
                    inverse: 1.0 / c,
                })
            } else if let (Some(p), Some(size)) = (args.p, args.size) {
                Rendered::from(Output::Profile(BoundProfile::for_set(p, size, args.t, &table)?))
            } else {
                let c = args.c.unwrap_or(0.0);
                Rendered::from(Output::Profile(BoundProfile::new(args.t, c, &table)?))
            }
        }
        Command::Sumset { set, t } => match set.parse::<SetLiteral>()? {
            SetLiteral::Residue(a) => {
                let s = a.sum_of_dilates(*t)?;
                Rendered::from(Output::Sumset {
                    input: a.to_string(),
                    t: *t,
                    size: s.len(),
                    elements: s.elements().iter().map(|&e| e as i64).collect(),
                    text: s.to_string(),
                })
            }
            SetLiteral::Integer(a) => {
                let s = a.sum_of_dilates(*t)?;
                Rendered::from(Output::Sumset {
                    input: a.to_string(),
                    t: *t,
                    size: s.len(),
                    elements: s.elements().to_vec(),
                    text: s.to_string(),
                })
            }
        },
        Command::Fourier { set, t } => {
            let a = parse_residue_set(set)?;
            let spectrum = indicator_dft(&a)?;
            let bias_bound = t.map(|t| bias_lower_bound_with(&a, t, &table)).transpose()?;
            Rendered::from(Output::Fourier { spectrum, bias_bound })
        }
        Command::Localize { set, beta } => {
            let a = parse_residue_set(set)?;
            Rendered::from(Output::Concentration(concentration_check(&a, *beta)?))
        }
        Command::Rectify { set, t, start, length } => {
            let a = parse_residue_set(set)?;
            let window = IntervalWindow {
                modulus: a.modulus(),
                start: *start % a.modulus(),
                length: *length,
                count: a.len() as u64,
            };
            let check = rectification_check(&a, *t, &window)?;
            let code = if check.guaranteed && !check.isomorphic { 1 } else { 0 };
            Rendered::from(Output::Rectify(check)).with_code(code)
        }
        Command::Pipeline { set, t, beta } => {
            let a = parse_residue_set(set)?;
            let trace = match beta {
                Some(b) => run_pipeline_with_beta(&a, *t, *b, &table)?,
                None => run_proof_pipeline_with(&a, *t, &table)?,
            };
            let code = if trace.all_hold() { 0 } else { 1 };
            Rendered::from(Output::Pipeline(Box::new(trace))).with_code(code)
        }
        Command::Search(args) => {
            let opts = SearchOptions {
                witness_cap: args.witness_cap,
                enumeration_limit: args.limit,
            };
            match (args.p, args.k, &args.k_range) {
                (Some(p), _, Some(range)) => {
                    Rendered::from(Output::Deficiency(deficiency_explorer(p, args.t, parse_range(range)?)?))
                }
                (Some(p), Some(k), None) => Rendered::from(Output::Search(exhaustive_min_sumset_modp_with(
                    p, args.t, k, &opts, &table,
                )?)),
                (None, Some(k), _) => {
                    let cap = args.cap.unwrap_or(3 * k as i64);
                    Rendered::from(Output::Search(exhaustive_min_sumset_integers_with(
                        k, args.t, cap, &opts, &table,
                    )?))
                }
                _ => return Err(Failure::Usage("search needs -k, or -p with --k-range".into())),
            }
        }
        Command::Verify(args) => {
            let mode = match args.sample {
                Some(n) => SampleMode::Sample {
                    n,
                    seed: cli.seed,
                    max_size: args.max_size,
                },
                None => SampleMode::Exhaustive,
            };
            let report = verify_lower_bound_with(args.p, args.t, mode, &table)?;
            let code = if report.violations.is_empty() { 0 } else { 1 };
            Rendered::from(Output::Verify(report)).with_code(code)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // only fails if a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let result = run(&cli).and_then(|rendered| {
        let text = rendered.output.render(cli.format).map_err(Failure::Usage)?;
        match &cli.output {
            Some(path) => File::create(path)?.write_all(text.as_bytes())?,
            None => io::stdout().write_all(text.as_bytes())?,
        }
        Ok(rendered.code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Infeasible(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
