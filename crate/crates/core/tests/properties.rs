use proptest::prelude::*;
use sumdil::bounds::{concentration_m, critical_density, f_t, sinc_g, sinc_g_inverse};
use sumdil::fourier::{bias_lower_bound, counting_identity_residual, indicator_dft, normalize_bias_to_one};
use sumdil::localize::{best_interval, concentration_check};
use sumdil::rectify::{lift_to_integers, rectification_check, run_proof_pipeline};
use sumdil::residue::{cauchy_davenport_bound, gcd};
use sumdil::search::{verify_lower_bound, SampleMode};
use sumdil::{IntegerSet, IntervalWindow, ResidueSet, Verdict};

const PRIMES: [u64; 10] = [5, 7, 11, 13, 17, 31, 53, 101, 257, 1009];

fn residue_set() -> impl Strategy<Value = ResidueSet> {
    prop::sample::select(PRIMES.to_vec()).prop_flat_map(|p| {
        prop::collection::btree_set(0..p, 1..=(p as usize).min(40)).prop_map(move |e| ResidueSet::new(p, e).unwrap())
    })
}

fn dilation() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![2i64, -2, 3, -3, 4, -4])
}

fn sorted_magnitudes(a: &ResidueSet) -> Vec<f64> {
    let mut m = indicator_dft(a).unwrap().magnitudes;
    m.sort_by(f64::total_cmp);
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dilation_by_a_unit_preserves_size(a in residue_set(), t in -50i64..50) {
        let p = a.modulus();
        prop_assume!(t.rem_euclid(p as i64) != 0);
        prop_assert_eq!(a.dilate(t).len(), a.len());
    }

    #[test]
    fn sumset_meets_cauchy_davenport(a in residue_set(), t in dilation()) {
        let p = a.modulus();
        prop_assume!(gcd(t.unsigned_abs(), p) == 1);
        let cd = cauchy_davenport_bound(a.len() as u64, a.len() as u64, p).unwrap();
        prop_assert!(a.sum_of_dilates(t).unwrap().len() as u64 >= cd);
    }

    #[test]
    fn canonical_form_is_idempotent(a in residue_set()) {
        prop_assume!(a.modulus() <= 101);
        let c = a.canonical_form();
        prop_assert_eq!(c.canonical_form(), c);
    }

    #[test]
    fn sumset_size_is_affine_invariant(a in residue_set(), t in dilation(), u in 1i64..1000, v in -1000i64..1000) {
        let p = a.modulus() as i64;
        prop_assume!(u % p != 0);
        let image = a.affine_image(u, v);
        prop_assert_eq!(image.sum_of_dilates(t).unwrap().len(), a.sum_of_dilates(t).unwrap().len());
    }

    #[test]
    fn integer_sumset_size_is_translation_invariant(
        e in prop::collection::vec(-200i64..200, 1..25), t in dilation(), v in -10_000i64..10_000,
    ) {
        let a = IntegerSet::new(&e);
        prop_assert_eq!(
            a.translate(v).sum_of_dilates(t).unwrap().len(),
            a.sum_of_dilates(t).unwrap().len()
        );
    }

    #[test]
    fn bound_function_is_non_increasing(t in 2i64..=10, c1 in 0.0f64..1.0, c2 in 0.0f64..1.0) {
        let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
        prop_assert!(f_t(t, lo).unwrap() >= f_t(t, hi).unwrap() - 1e-12);
        let c0 = critical_density(t).unwrap();
        if hi >= c0 {
            prop_assert_eq!(f_t(t, hi).unwrap(), 2.0);
        }
        if lo < c0 {
            prop_assert!(f_t(t, lo).unwrap() > 2.0);
        }
    }

    #[test]
    fn sinc_inverse_round_trips(y in 0.0f64..0.999) {
        let u = sinc_g_inverse(y).unwrap();
        prop_assert!((sinc_g(u).unwrap() - y).abs() <= 1e-10);
    }

    #[test]
    fn concentration_is_one_at_full_eta(beta in 0.001f64..0.5) {
        let m = concentration_m(beta, 1.0).unwrap();
        prop_assert_eq!(m.m, 1.0);
        prop_assert_eq!(m.term_cosine, 1.0);
        prop_assert_eq!(m.term_sinc, 1.0);
    }

    #[test]
    fn parseval_holds(a in residue_set()) {
        prop_assert!(indicator_dft(&a).unwrap().parseval_residual() <= 1e-9);
    }

    #[test]
    fn counting_identity_holds(a in residue_set(), t in dilation()) {
        prop_assert!(counting_identity_residual(&a, t).unwrap() <= 1e-9);
    }

    #[test]
    fn magnitudes_follow_dilation(a in residue_set(), u in 1u64..1000) {
        let p = a.modulus();
        prop_assume!(u % p != 0);
        let base = indicator_dft(&a).unwrap().magnitudes;
        let dilated = indicator_dft(&a.dilate(u as i64)).unwrap().magnitudes;
        for r in 0..p {
            let expect = base[((u as u128 * r as u128) % p as u128) as usize];
            prop_assert!((dilated[r as usize] - expect).abs() <= 1e-9 * a.len() as f64);
        }
    }

    #[test]
    fn magnitudes_ignore_translation(a in residue_set(), v in -1000i64..1000) {
        let base = indicator_dft(&a).unwrap().magnitudes;
        let moved = indicator_dft(&a.translate(v)).unwrap().magnitudes;
        for (x, y) in base.iter().zip(&moved) {
            prop_assert!((x - y).abs() <= 1e-9 * a.len() as f64);
        }
    }

    #[test]
    fn bias_meets_its_lower_bound(a in residue_set(), t in dilation()) {
        let bias = indicator_dft(&a).unwrap().bias;
        prop_assert!(bias >= bias_lower_bound(&a, t).unwrap() - 1e-9);
    }

    #[test]
    fn normalization_keeps_magnitude_multiset(a in residue_set()) {
        let (b, unit) = normalize_bias_to_one(&a).unwrap();
        prop_assert!(unit != 0);
        for (x, y) in sorted_magnitudes(&a).iter().zip(&sorted_magnitudes(&b)) {
            prop_assert!((x - y).abs() <= 1e-9 * a.len() as f64);
        }
        let spectrum = indicator_dft(&b).unwrap();
        prop_assert!((spectrum.magnitudes[1] - spectrum.bias).abs() <= 1e-9 * a.len() as f64);
    }

    #[test]
    fn best_count_is_translation_invariant(a in residue_set(), v in 0i64..1000, frac in 0.0f64..1.0) {
        let p = a.modulus();
        let length = 1 + (frac * (p - 1) as f64) as u64;
        let w = best_interval(&a, length).unwrap();
        let moved = best_interval(&a.translate(v), length).unwrap();
        prop_assert_eq!(w.count, moved.count);
        let shifted = IntervalWindow { start: (w.start + v as u64) % p, ..w };
        prop_assert_eq!(a.translate(v).elements().iter().filter(|&&x| shifted.contains(x)).count() as u64, w.count);
    }

    #[test]
    fn concentration_guarantee_holds(a in residue_set(), beta in 0.01f64..0.5) {
        prop_assert!(concentration_check(&a, beta).unwrap().holds);
    }

    #[test]
    fn short_windows_rectify(a in residue_set(), t in dilation(), start in 0u64..2000) {
        let p = a.modulus();
        let length = p / (t.unsigned_abs() + 1) + 1;
        let window = IntervalWindow { modulus: p, start: start % p, length, count: 0 };
        let inside = ResidueSet::new(p, a.elements().iter().copied().filter(|&x| window.contains(x))).unwrap();
        prop_assume!(!inside.is_empty());
        let check = rectification_check(&inside, t, &window).unwrap();
        // (|t|+1)(L-1) < p fails only when |t|+1 divides p
        prop_assert_eq!(check.guaranteed, p % (t.unsigned_abs() + 1) != 0);
        if check.guaranteed {
            prop_assert!(check.isomorphic);
        }
        let lift = lift_to_integers(&inside, &window).unwrap();
        prop_assert_eq!(lift.len(), inside.len());
        for &x in lift.elements() {
            prop_assert!(inside.contains(x.rem_euclid(p as i64) as u64));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn pipeline_is_sound_and_deterministic(
        seed_elems in prop::collection::btree_set(0u64..10007, 1..=60), t in prop::sample::select(vec![2i64, -2]),
    ) {
        let a = ResidueSet::new(10007, seed_elems).unwrap();
        let first = run_proof_pipeline(&a, t).unwrap();
        prop_assert!(first.steps.iter().all(|s| s.verdict != Verdict::Fails), "{:?}", first.steps);
        prop_assert_eq!(run_proof_pipeline(&a, t).unwrap(), first);
    }

    #[test]
    fn seeded_sampling_is_reproducible(seed in any::<u64>()) {
        let mode = SampleMode::Sample { n: 50, seed, max_size: None };
        let mut a = verify_lower_bound(211, 2, mode).unwrap();
        let mut b = verify_lower_bound(211, 2, mode).unwrap();
        prop_assert!(a.violations.is_empty());
        a.wall_time_secs = 0.0;
        b.wall_time_secs = 0.0;
        prop_assert_eq!(a, b);
    }
}

#[test]
fn json_reports_round_trip() {
    let a = ResidueSet::from_integers(10007, &[0, 3, 9, 27, 81, 243, 729]).unwrap();
    let trace = run_proof_pipeline(&a, 2).unwrap();
    let back: sumdil::PipelineTrace = serde_json::from_str(&serde_json::to_string(&trace).unwrap()).unwrap();
    assert_eq!(back, trace);
    let conc = concentration_check(&a, 1.0 / 3.0).unwrap();
    let back: sumdil::ConcentrationCheck = serde_json::from_str(&serde_json::to_string(&conc).unwrap()).unwrap();
    assert_eq!(back, conc);
    let spectrum = indicator_dft(&a).unwrap();
    let back: sumdil::FourierSpectrum = serde_json::from_str(&serde_json::to_string(&spectrum).unwrap()).unwrap();
    assert_eq!(back, spectrum);
}
