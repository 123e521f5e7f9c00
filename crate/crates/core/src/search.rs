//! Brute-force ground truth for `|A + t·A|`.
//!
//! Searches in `Z/pZ` use the affine invariance of `|A + t·A|`: every set with
//! at least two elements has an image under `x ↦ ux + v` containing `{0, 1}`,
//! so only those sets are enumerated. The work is split by the third-smallest
//! element, each partition walks its subsets in colexicographic order of the
//! bit pattern, and partitions are merged with an order-independent min-reduce.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{critical_density, integer_reference_bound_with, lower_bound_with, ReferenceRule, WTable};
use crate::error::{domain, Error, Result};
use crate::residue::{is_prime, reduce, IntegerSet, ResidueSet};

/// Default ceiling on the number of sets a single search may visit.
pub const DEFAULT_ENUMERATION_LIMIT: f64 = 2e8;
pub const DEFAULT_WITNESS_CAP: usize = 16;
/// Largest `p` for which `verify_lower_bound` enumerates all `2^p − 1` sets.
pub const MAX_EXHAUSTIVE_P: u64 = 25;

/// Raw minimizers kept per partition before canonicalization.
const RAW_WITNESS_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    pub witness_cap: usize,
    pub enumeration_limit: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            witness_cap: DEFAULT_WITNESS_CAP,
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundComparison {
    pub name: String,
    pub value: f64,
    pub satisfied: bool,
    /// The minimum meets the bound with equality.
    pub attained: bool,
}

impl BoundComparison {
    fn new(name: &str, value: f64, min: u64) -> Self {
        BoundComparison {
            name: name.to_string(),
            value,
            satisfied: min as f64 >= value - 1e-9,
            attained: (min as f64 - value).abs() < 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    /// `None` for searches over the integers.
    pub p: Option<u64>,
    pub t: i64,
    pub k: u64,
    pub min_sumset_size: u64,
    pub witnesses: Vec<Vec<i64>>,
    pub witnesses_truncated: bool,
    pub sets_examined: u64,
    pub bound_comparisons: Vec<BoundComparison>,
    /// Largest element allowed in integer searches.
    pub diameter_cap: Option<i64>,
    pub wall_time_secs: f64,
}

impl SearchReport {
    /// `max(0, (|t|+1)k − min)`, or `None` when the minimum is capped at `p`.
    pub fn deficiency(&self) -> Option<i64> {
        if self.p.is_some_and(|p| self.min_sumset_size >= p) {
            return None;
        }
        let full = (self.t.unsigned_abs() as i64 + 1) * self.k as i64;
        Some((full - self.min_sumset_size as i64).max(0))
    }

    fn verify_witnesses(&self) -> Result<()> {
        for w in &self.witnesses {
            let size = match self.p {
                Some(p) => ResidueSet::from_integers(p as i64, w)?.sum_of_dilates(self.t)?.len(),
                None => IntegerSet::new(w).sum_of_dilates(self.t)?.len(),
            };
            assert_eq!(
                size as u64, self.min_sumset_size,
                "witness {w:?} does not attain the reported minimum"
            );
        }
        Ok(())
    }
}

/// `C(n, k)` as a float, for feasibility estimates.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `|A + t·A|` for `A ⊆ Z/pZ` given as a bit mask, `p ≤ 64`.
#[inline]
fn mask_sumset_size(mask: u64, p: u32, t_mod: u64) -> u32 {
    let full = if p == 64 { u64::MAX } else { (1u64 << p) - 1 };
    let mut acc = 0u64;
    let mut rest = mask;
    while rest != 0 {
        let b = rest.trailing_zeros() as u64;
        rest &= rest - 1;
        let s = ((t_mod * b) % p as u64) as u32;
        let rot = if s == 0 {
            mask
        } else {
            ((mask << s) | (mask >> (p - s))) & full
        };
        acc |= rot;
    }
    acc.count_ones()
}

/// Next bit pattern with the same popcount (Gosper's hack).
#[inline]
fn next_combination(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

fn mask_elements(mask: u64) -> Vec<i64> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Exact minimum of `|A + t·A|` over all `k`-subsets of `Z/pZ`.
pub fn exhaustive_min_sumset_modp(p: u64, t: i64, k: u64) -> Result<SearchReport> {
    exhaustive_min_sumset_modp_with(p, t, k, &SearchOptions::default(), &WTable::default())
}

pub fn exhaustive_min_sumset_modp_with(
    p: u64,
    t: i64,
    k: u64,
    opts: &SearchOptions,
    table: &WTable,
) -> Result<SearchReport> {
    let started = Instant::now();
    if !is_prime(p) {
        return Err(Error::CompositeModulus(p as i64));
    }
    if k < 1 || k > p {
        return domain(format!("k must lie in [1, {p}], got {k}"));
    }
    let estimated = if k >= 2 { binomial(p - 2, k - 2) } else { 1.0 };
    if p > 64 || estimated > opts.enumeration_limit {
        return Err(Error::InfeasibleEnumeration {
            estimated: if p > 64 { binomial(p, k) } else { estimated },
            limit: opts.enumeration_limit,
        });
    }
    let pu = p as u32;
    let t_mod = reduce(t, p);

    let (min, raw, examined) = match k {
        1 => (1, vec![1u64], 1),
        2 => (mask_sumset_size(0b11, pu, t_mod), vec![0b11], 1),
        _ => {
            let parts: Vec<(u32, Vec<u64>, u64)> = (2..p)
                .into_par_iter()
                .filter(|&m| p - 1 - m >= k - 3)
                .map(|m| min_in_partition(pu, t_mod, k, m))
                .collect();
            let min = parts.iter().map(|x| x.0).min().unwrap_or(0);
            let examined = parts.iter().map(|x| x.2).sum();
            let raw = parts.into_iter().filter(|x| x.0 == min).flat_map(|x| x.1).collect();
            (min, raw, examined)
        }
    };

    let canonical: BTreeSet<Vec<u64>> = raw
        .iter()
        .map(|&mask| {
            ResidueSet::new_unchecked(p, mask_elements(mask).into_iter().map(|e| e as u64))
                .canonical_form()
                .elements()
                .to_vec()
        })
        .collect();
    let truncated = canonical.len() > opts.witness_cap || raw.len() >= RAW_WITNESS_CAP;
    let witnesses: Vec<Vec<i64>> = canonical
        .into_iter()
        .take(opts.witness_cap)
        .map(|w| w.into_iter().map(|e| e as i64).collect())
        .collect();

    let min = min as u64;
    let mut comparisons = vec![BoundComparison::new("cauchy_davenport", (2 * k - 1).min(p) as f64, min)];
    if t.unsigned_abs() >= 2 {
        if let Ok(b) = lower_bound_with(p, k, t, table) {
            comparisons.push(BoundComparison::new("lower_bound", b, min));
        }
    }
    let report = SearchReport {
        p: Some(p),
        t,
        k,
        min_sumset_size: min,
        witnesses,
        witnesses_truncated: truncated,
        sets_examined: examined,
        bound_comparisons: comparisons,
        diameter_cap: None,
        wall_time_secs: started.elapsed().as_secs_f64(),
    };
    report.verify_witnesses()?;
    Ok(report)
}

/// Sets `{0, 1, m} ∪ R` with `R` a `(k−3)`-subset of `{m+1, …, p−1}`.
fn min_in_partition(p: u32, t_mod: u64, k: u64, m: u64) -> (u32, Vec<u64>, u64) {
    let base = 0b11u64 | (1u64 << m);
    let free = p as u64 - 1 - m;
    let r = k - 3;
    let mut best = u32::MAX;
    let mut witnesses = Vec::new();
    let mut examined = 0u64;
    let mut visit = |mask: u64| {
        examined += 1;
        let size = mask_sumset_size(mask, p, t_mod);
        if size < best {
            best = size;
            witnesses.clear();
        }
        if size == best && witnesses.len() < RAW_WITNESS_CAP {
            witnesses.push(mask);
        }
    };
    if r == 0 {
        visit(base);
    } else {
        let limit = 1u64 << free;
        let mut comb = (1u64 << r) - 1;
        while comb < limit {
            visit(base | (comb << (m + 1)));
            comb = next_combination(comb);
        }
    }
    (best, witnesses, examined)
}

/// Minimum of `|A + t·A|` over integer sets with `min A = 0`, `max A ≤ cap`.
pub fn exhaustive_min_sumset_integers(k: u64, t: i64, diameter_cap: i64) -> Result<SearchReport> {
    exhaustive_min_sumset_integers_with(k, t, diameter_cap, &SearchOptions::default(), &WTable::default())
}

pub fn exhaustive_min_sumset_integers_with(
    k: u64,
    t: i64,
    diameter_cap: i64,
    opts: &SearchOptions,
    table: &WTable,
) -> Result<SearchReport> {
    let started = Instant::now();
    if k < 1 {
        return domain("k must be at least 1");
    }
    if diameter_cap < k as i64 - 1 {
        return domain(format!("diameter cap {diameter_cap} cannot hold {k} elements"));
    }
    if diameter_cap > 63 {
        return Err(Error::InfeasibleEnumeration {
            estimated: binomial(diameter_cap as u64, k - 1),
            limit: opts.enumeration_limit,
        });
    }
    let estimated = binomial(diameter_cap as u64, k - 1);
    if estimated > opts.enumeration_limit {
        return Err(Error::InfeasibleEnumeration {
            estimated,
            limit: opts.enumeration_limit,
        });
    }
    let size_of = |mask: u64| -> u64 {
        let set = IntegerSet::new(&mask_elements(mask));
        set.sum_of_dilates(t).map(|s| s.len() as u64).unwrap_or(0)
    };

    let mut best = u64::MAX;
    let mut raw: Vec<u64> = Vec::new();
    let mut examined = 0u64;
    let mut visit = |mask: u64| {
        examined += 1;
        let size = size_of(mask);
        if size < best {
            best = size;
            raw.clear();
        }
        if size == best && raw.len() < RAW_WITNESS_CAP {
            raw.push(mask);
        }
    };
    let r = k - 1;
    if r == 0 {
        visit(1);
    } else {
        let limit = 1u64 << diameter_cap;
        let mut comb = (1u64 << r) - 1;
        while comb < limit {
            visit(1 | (comb << 1));
            comb = next_combination(comb);
        }
    }

    let canonical: BTreeSet<Vec<i64>> = raw
        .iter()
        .map(|&m| IntegerSet::new(&mask_elements(m)).normalized().elements().to_vec())
        .collect();
    let truncated = canonical.len() > opts.witness_cap || raw.len() >= RAW_WITNESS_CAP;
    let witnesses: Vec<Vec<i64>> = canonical.into_iter().take(opts.witness_cap).collect();

    let mut comparisons = Vec::new();
    for (label, rule) in [
        ("trivial3", ReferenceRule::Trivial3),
        ("seven_halves", ReferenceRule::SevenHalves),
        ("exact_t3", ReferenceRule::ExactT3),
        ("prime_t", ReferenceRule::PrimeT),
        ("universal", ReferenceRule::Universal),
    ] {
        if let Ok(b) = integer_reference_bound_with(t, k as i64, rule, table) {
            comparisons.push(BoundComparison::new(label, b as f64, best));
        }
    }
    let report = SearchReport {
        p: None,
        t,
        k,
        min_sumset_size: best,
        witnesses,
        witnesses_truncated: truncated,
        sets_examined: examined,
        bound_comparisons: comparisons,
        diameter_cap: Some(diameter_cap),
        wall_time_secs: started.elapsed().as_secs_f64(),
    };
    report.verify_witnesses()?;
    Ok(report)
}

/// How `verify_lower_bound` chooses the sets it checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    /// Every non-empty subset of `Z/pZ`.
    Exhaustive,
    /// `n` random subsets; sizes uniform in `[1, max_size]`.
    Sample { n: u64, seed: u64, max_size: Option<u64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub set: Vec<u64>,
    pub sumset_size: u64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub p: u64,
    pub t: i64,
    pub mode: SampleMode,
    pub sets_checked: u64,
    pub violations: Vec<Violation>,
    /// Smallest `|A + t·A| − bound` seen.
    pub min_slack: f64,
    pub min_slack_set: Vec<u64>,
    pub wall_time_secs: f64,
}

/// A uniform `k`-subset of `{0, …, n−1}` by a sparse partial Fisher-Yates shuffle.
pub fn random_subset<R: Rng>(rng: &mut R, n: u64, k: u64) -> Vec<u64> {
    let mut swapped: HashMap<u64, u64> = HashMap::with_capacity(2 * k as usize);
    let mut out = Vec::with_capacity(k as usize);
    for i in 0..k {
        let j = rng.gen_range(i..n);
        let vj = *swapped.get(&j).unwrap_or(&j);
        let vi = *swapped.get(&i).unwrap_or(&i);
        swapped.insert(j, vi);
        out.push(vj);
    }
    out.sort_unstable();
    out
}

/// Default largest sample size: twice the critical density's worth of `p`, at least 16.
pub fn default_sample_max_size(p: u64, t: i64) -> u64 {
    let c0 = critical_density(t).unwrap_or(0.0);
    ((2.0 * c0 * p as f64).ceil() as u64).max(16).min(p)
}

pub fn verify_lower_bound(p: u64, t: i64, mode: SampleMode) -> Result<LowerBoundReport> {
    verify_lower_bound_with(p, t, mode, &WTable::default())
}

pub fn verify_lower_bound_with(p: u64, t: i64, mode: SampleMode, table: &WTable) -> Result<LowerBoundReport> {
    let started = Instant::now();
    if !is_prime(p) {
        return Err(Error::CompositeModulus(p as i64));
    }
    if t.unsigned_abs() < 2 {
        return domain(format!("|t| must be at least 2, got {t}"));
    }
    table.get(t)?;
    // the bound depends on A only through |A|
    let bounds: Vec<f64> = std::iter::once(Ok(f64::NEG_INFINITY))
        .chain((1..=p).map(|k| lower_bound_with(p, k, t, table)))
        .collect::<Result<_>>()?;

    // (slack, set) pairs, reduced deterministically: smallest slack, then smallest set
    type Outcome = (Vec<Violation>, f64, Vec<u64>);
    let check = |set: Vec<u64>, size_s: u64| -> Outcome {
        let bound = bounds[set.len()];
        let slack = size_s as f64 - bound;
        let violations = if slack < -1e-9 {
            vec![Violation {
                set: set.clone(),
                sumset_size: size_s,
                bound,
            }]
        } else {
            Vec::new()
        };
        (violations, slack, set)
    };
    let merge = |mut a: Outcome, b: Outcome| -> Outcome {
        a.0.extend(b.0);
        if b.1 < a.1 || (b.1 == a.1 && b.2 < a.2) {
            a.1 = b.1;
            a.2 = b.2;
        }
        a
    };
    let empty = || (Vec::new(), f64::INFINITY, Vec::new());

    let (checked, (mut violations, min_slack, min_slack_set)) = match mode {
        SampleMode::Exhaustive => {
            if p > MAX_EXHAUSTIVE_P {
                return Err(Error::InfeasibleEnumeration {
                    estimated: 2f64.powi(p as i32) - 1.0,
                    limit: 2f64.powi(MAX_EXHAUSTIVE_P as i32),
                });
            }
            let pu = p as u32;
            let t_mod = reduce(t, p);
            let total = (1u64 << p) - 1;
            let outcome = (1..=total)
                .into_par_iter()
                .fold(empty, |acc, mask| {
                    let size_s = mask_sumset_size(mask, pu, t_mod) as u64;
                    let slack = size_s as f64 - bounds[mask.count_ones() as usize];
                    if slack <= acc.1 || slack < -1e-9 {
                        let set = mask_elements(mask).into_iter().map(|e| e as u64).collect();
                        merge(acc, check(set, size_s))
                    } else {
                        acc
                    }
                })
                .reduce(empty, merge);
            (total, outcome)
        }
        SampleMode::Sample { n, seed, max_size } => {
            let kmax = max_size.unwrap_or_else(|| default_sample_max_size(p, t)).clamp(1, p);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sets: Vec<Vec<u64>> = (0..n)
                .map(|_| {
                    let k = rng.gen_range(1..=kmax);
                    random_subset(&mut rng, p, k)
                })
                .collect();
            let outcome = sets
                .into_par_iter()
                .map(|set| {
                    let a = ResidueSet::new_unchecked(p, set.iter().copied());
                    let size_s = a.sum_of_dilates(t).map(|s| s.len() as u64).unwrap_or(0);
                    check(set, size_s)
                })
                .reduce(empty, merge);
            (n, outcome)
        }
    };
    violations.sort_by(|a, b| a.set.cmp(&b.set));
    Ok(LowerBoundReport {
        p,
        t,
        mode,
        sets_checked: checked,
        violations,
        min_slack,
        min_slack_set,
        wall_time_secs: started.elapsed().as_secs_f64(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeficiencyRow {
    pub k: u64,
    pub min_size: u64,
    /// `None` when the minimum is capped at `p`.
    pub deficiency: Option<i64>,
    /// Small-`k` rows where the deficiency is an artifact of `|A| = 1`.
    pub degenerate: bool,
    pub witness: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeficiencyTable {
    pub p: u64,
    pub t: i64,
    pub rows: Vec<DeficiencyRow>,
    /// Running maximum of non-degenerate deficiencies: an empirical lower bound
    /// for the constant `c(t)`, not a proof of anything.
    pub empirical_c: i64,
}

pub fn deficiency_explorer(p: u64, t: i64, k_range: std::ops::RangeInclusive<u64>) -> Result<DeficiencyTable> {
    let mut rows = Vec::new();
    let mut empirical_c = 0;
    for k in k_range {
        let rep = exhaustive_min_sumset_modp(p, t, k)?;
        let deficiency = rep.deficiency();
        let degenerate = k == 1;
        if !degenerate {
            empirical_c = empirical_c.max(deficiency.unwrap_or(0));
        }
        rows.push(DeficiencyRow {
            k,
            min_size: rep.min_sumset_size,
            deficiency,
            degenerate,
            witness: rep.witnesses.first().cloned().unwrap_or_default(),
        });
    }
    Ok(DeficiencyTable {
        p,
        t,
        rows,
        empirical_c,
    })
}
