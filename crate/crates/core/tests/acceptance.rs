//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sumdil::bounds::{critical_density, f_t, f_t_inverse_density};
use sumdil::fourier::{bias_lower_bound, counting_identity_residual, indicator_dft};
use sumdil::localize::{concentration_check, quarter_dichotomy};
use sumdil::rectify::{rectification_check, run_proof_pipeline};
use sumdil::residue::is_prime;
use sumdil::search::{exhaustive_min_sumset_integers, random_subset, verify_lower_bound, SampleMode};
use sumdil::{IntervalWindow, ResidueSet, Verdict};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn close(name: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    check(
        (got - want).abs() <= tol,
        format!("{name} = {got}, expected {want} ± {tol:e}"),
    )
}

fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

fn subsets(p: u64) -> impl Iterator<Item = ResidueSet> {
    (1u64..1 << p).map(move |mask| ResidueSet::new(p, (0..p).filter(|i| mask >> i & 1 == 1)).unwrap())
}

fn constants() -> Outcome {
    let f2 = f_t(2, 0.0).map_err(|e| e.to_string())?;
    close("f_2(0)", f2, 2.080083, 1e-5)?;
    close("f_2(0) vs 3^(2/3)", f2, 3f64.powf(2.0 / 3.0), 1e-12)?;
    let c2 = critical_density(2).map_err(|e| e.to_string())?;
    close("c_2^(0)", c2, 0.028595, 1e-6)?;
    close("c_3^(0)", critical_density(3).map_err(|e| e.to_string())?, 0.0, 1e-12)?;
    let big = 10_000_000;
    let f_big = f_t(big, 0.0).map_err(|e| e.to_string())?;
    let c_big = critical_density(big).map_err(|e| e.to_string())?;
    close("f_t(0) at t = 1e7", f_big, 2.15409, 1e-4)?;
    close("c_t^(0) at t = 1e7", c_big, 0.04984, 1e-4)?;
    close("c_t^(0) limit", 0.5 - SQRT_2 / PI, 0.04984, 1e-5)?;
    Ok(format!(
        "f_2(0) = {f2:.6}, c_2^(0) = {c2:.6}, f_t(0) = {f_big:.5} and c_t^(0) = {c_big:.5} at t = 1e7"
    ))
}

fn threshold_density() -> Outcome {
    let c = f_t_inverse_density(2, 2.08).map_err(|e| e.to_string())?;
    // the printed decimal 0.0000209607 transposes two digits of 1/34410.7
    close("c with f_2(c) = 2.08", c, 0.0000290607, 1e-10)?;
    let inv = 1.0 / c;
    check(
        (inv * 10.0).floor() == 344107.0,
        format!("1/c = {inv}, expected 34410.7…"),
    )?;
    check(c > 1.0 / 35000.0, format!("c = {c} is not above 1/35000"))?;
    let theta = f_t(2, 1.0 / 35000.0).map_err(|e| e.to_string())? - 2.0;
    check(theta >= 0.08, format!("theta_2 at |A| = p/35000 is {theta} < 0.08"))?;
    Ok(format!(
        "c = {c:.10} = 1/{inv:.1} > 1/35000, theta_2(1/35000) = {theta:.6} (printed 0.0000209607 is a digit transposition)"
    ))
}

fn exhaustive_lower_bound() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let mut total = 0u64;
    let mut tightest = f64::INFINITY;
    for p in [5u64, 7, 11, 13] {
        for t in [2i64, -2, 3, -3, 4] {
            let r = pool
                .install(|| verify_lower_bound(p, t, SampleMode::Exhaustive))
                .map_err(|e| e.to_string())?;
            check(
                r.sets_checked == (1 << p) - 1,
                format!("p = {p}, t = {t}: {} sets", r.sets_checked),
            )?;
            if let Some(v) = r.violations.first() {
                return Err(format!(
                    "p = {p}, t = {t}: {} violations, first {v:?}",
                    r.violations.len()
                ));
            }
            total += r.sets_checked;
            tightest = tightest.min(r.min_slack);
        }
    }
    Ok(format!(
        "{total} sets over 20 (p, t) pairs, zero violations, minimum slack {tightest:.4}"
    ))
}

fn integer_tightness() -> Outcome {
    let mut parts = Vec::new();
    for (t, want, witness) in [(2i64, 7u64, vec![0i64, 1, 2]), (3, 8, vec![0, 1, 3])] {
        let r = exhaustive_min_sumset_integers(3, t, 9).map_err(|e| e.to_string())?;
        check(
            r.min_sumset_size == want,
            format!("t = {t}: min {} != {want}", r.min_sumset_size),
        )?;
        check(
            r.witnesses.contains(&witness),
            format!("t = {t}: {witness:?} not among {:?}", r.witnesses),
        )?;
        parts.push(format!("t = {t}: min {want} with witness {witness:?}"));
    }
    Ok(parts.join("; "))
}

fn fourier_machinery() -> Outcome {
    let primes = primes_between(11, 10_000);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_parseval, mut worst_counting) = (0f64, 0f64);
    let mut binding = 0;
    for i in 0..1000 {
        let p = primes[rng.gen_range(0..primes.len())];
        let a = if i % 4 == 3 {
            // random subset of a dilated arithmetic progression, so the bias bound binds
            let span = rng.gen_range(4..=p.min(400));
            let k = rng.gen_range(1..=span);
            let (d, v) = (rng.gen_range(1..p), rng.gen_range(0..p));
            ResidueSet::new(p, random_subset(&mut rng, span, k).into_iter().map(|e| (e * d + v) % p)).unwrap()
        } else {
            let k = rng.gen_range(1..=p.min(300));
            ResidueSet::new(p, random_subset(&mut rng, p, k)).unwrap()
        };
        let spectrum = indicator_dft(&a).map_err(|e| e.to_string())?;
        worst_parseval = worst_parseval.max(spectrum.parseval_residual());
        for t in [2i64, 3, 4] {
            worst_counting = worst_counting.max(counting_identity_residual(&a, t).map_err(|e| e.to_string())?);
            let bound = bias_lower_bound(&a, t).map_err(|e| e.to_string())?;
            check(
                spectrum.bias >= bound - 1e-9 * a.len() as f64,
                format!("bias {} below bound {bound} for t = {t}, {a}", spectrum.bias),
            )?;
            binding += (bound > 0.0) as u32;
        }
    }
    check(worst_parseval <= 1e-9, format!("Parseval residual {worst_parseval:e}"))?;
    check(
        worst_counting <= 1e-9,
        format!("counting identity residual {worst_counting:e}"),
    )?;
    Ok(format!(
        "1000 sets, Parseval residual ≤ {worst_parseval:.1e}, counting residual ≤ {worst_counting:.1e}, bias bound positive and met in {binding}/3000 cases"
    ))
}

fn concentration_suite() -> Outcome {
    let betas = [1.0 / 3.0, 0.25, 0.2];
    let mut checked = 0u64;
    for p in [7u64, 11, 13] {
        for a in subsets(p) {
            for beta in betas {
                let c = concentration_check(&a, beta).map_err(|e| e.to_string())?;
                check(c.holds, format!("guarantee fails: {a}, beta {beta}, {c:?}"))?;
                checked += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..10_000 {
        let k = rng.gen_range(1..=101);
        let a = ResidueSet::new(101, random_subset(&mut rng, 101, k)).unwrap();
        let beta = betas[rng.gen_range(0..3)];
        let c = concentration_check(&a, beta).map_err(|e| e.to_string())?;
        check(c.holds, format!("guarantee fails: {a}, beta {beta}, {c:?}"))?;
        checked += 1;
    }
    let mut fired = 0;
    for i in 0..200 {
        let eta = FRAC_1_SQRT_2 * i as f64 / 199.0;
        for j in 1..=200 {
            let beta = j as f64 / 600.0;
            let branch = quarter_dichotomy(eta, beta).map_err(|e| format!("eta {eta}, beta {beta}: {e}"))?;
            fired += (branch != sumdil::DichotomyBranch::NeitherTriggered) as u32;
        }
    }
    Ok(format!(
        "{checked} concentration checks hold; dichotomy grid 200x200 without violations ({fired} cells trigger a branch)"
    ))
}

fn rectification_suite() -> Outcome {
    let mut checked = 0u64;
    for p in [7u64, 11, 13] {
        for t in [2i64, -2, 3, -3] {
            // closed arc of diameter p/(|t|+1); its subsets include the shorter windows
            let length = p / (t.unsigned_abs() + 1) + 1;
            for start in 0..p {
                for mask in 1u64..1 << length {
                    let a0 = ResidueSet::new(p, (0..length).filter(|i| mask >> i & 1 == 1).map(|i| (start + i) % p))
                        .unwrap();
                    let window = IntervalWindow {
                        modulus: p,
                        start,
                        length,
                        count: a0.len() as u64,
                    };
                    let r = rectification_check(&a0, t, &window).map_err(|e| e.to_string())?;
                    check(
                        r.guaranteed,
                        format!("window of {length} not short enough at p = {p}, t = {t}"),
                    )?;
                    check(
                        r.isomorphic,
                        format!("{a0}, t = {t}: {} mod p vs {} lifted", r.residue_size, r.integer_size),
                    )?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!(
        "{checked} windowed sets, residue and lifted sumset sizes agree in every case"
    ))
}

fn pipeline_soundness() -> Outcome {
    let primes = primes_between(10_000, 100_000);
    let c0 = critical_density(2).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut full, mut non_vacuous, mut short) = (0, 0, 0);
    for i in 0..1000 {
        let p = primes[rng.gen_range(0..primes.len())];
        let max_k = (c0 * p as f64).floor() as u64;
        let k = if i % 20 == 0 {
            rng.gen_range(1..=max_k)
        } else {
            rng.gen_range(1..=max_k.min(250))
        };
        let elems = match i % 3 {
            0 => random_subset(&mut rng, p, k),
            _ => {
                // dense pieces of an arithmetic progression give non-vacuous chains
                let span = k + rng.gen_range(0..=k / 2 + 1);
                let (d, v) = (rng.gen_range(1..p), rng.gen_range(0..p));
                random_subset(&mut rng, span, k)
                    .into_iter()
                    .map(|e| (e * d + v) % p)
                    .collect()
            }
        };
        let a = ResidueSet::new(p, elems).unwrap();
        check(a.density() <= c0, format!("sampled density {} above c0", a.density()))?;
        let t = if i % 2 == 0 { 2 } else { -2 };
        let trace = run_proof_pipeline(&a, t).map_err(|e| e.to_string())?;
        if let Some(step) = trace.steps.iter().find(|s| s.verdict == Verdict::Fails) {
            return Err(format!(
                "{a}, t = {t}: step {} fails ({} < {})",
                step.name, step.value, step.bound
            ));
        }
        if trace.short_circuit {
            short += 1;
            continue;
        }
        full += 1;
        if let Some(b) = trace.b_value {
            non_vacuous += 1;
            check(
                trace.ratio_bound_holds == Some(true),
                format!("x = {} < 3B = {}", trace.x, 3.0 * b),
            )?;
        }
    }
    check(non_vacuous > 0, "no instance had a non-vacuous chain")?;
    Ok(format!(
        "1000 traces ({full} full, {short} short-circuited), zero fails, x ≥ 3B holds on all {non_vacuous} non-vacuous chains"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("bound constants", constants, Duration::from_secs(1)),
        ("threshold density", threshold_density, Duration::from_secs(1)),
        (
            "exhaustive lower bound",
            exhaustive_lower_bound,
            Duration::from_secs(60),
        ),
        ("integer minimizers", integer_tightness, Duration::from_secs(5)),
        ("Fourier identities", fourier_machinery, Duration::from_secs(120)),
        ("window concentration", concentration_suite, Duration::from_secs(120)),
        ("rectification", rectification_suite, Duration::from_secs(60)),
        ("pipeline soundness", pipeline_soundness, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let started = Instant::now();
        let outcome = run();
        let elapsed = started.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= budget {
                Ok(msg)
            } else {
                Err(format!("{msg}; took {elapsed:.2?}, budget {budget:?}"))
            }
        });
        match outcome {
            Ok(msg) => println!("criterion {} PASS [{name}] {msg} ({elapsed:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} FAIL [{name}] {msg} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
