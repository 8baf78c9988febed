use proptest::prelude::*;

use tailpremium::cli::{format_number, parse_claims};
use tailpremium::threshold::DEFAULT_BETA;
use tailpremium::{
    asym_mean, build_sorted_sample, censored_hill, hill_estimator, kaplan_meier_curve, kaplan_meier_survival,
    php_estimate, reiss_thomas_k, theoretical_premium, AsymptoticParams, BurrModel, CensoredObservation,
    EstimationSettings, HeavyTailModel, ParetoModel, Retention, SortedCensoredSample,
};

/// Distinct positive values with random censoring flags.
fn censored_sample(min: usize, max: usize) -> impl Strategy<Value = Vec<(f64, u8)>> {
    prop::collection::vec((0.01f64..1.0, 0u8..=1), min..max).prop_map(|raw| {
        // Cumulate positive steps so values are distinct and heavy-ish.
        let mut acc = 1.0;
        raw.into_iter()
            .map(|(step, d)| {
                acc *= 1.0 + step;
                (acc, d)
            })
            .collect()
    })
}

fn shuffled(pairs: &[(f64, u8)], seed: u64) -> Vec<CensoredObservation> {
    let mut obs: Vec<CensoredObservation> =
        pairs.iter().map(|&(z, d)| CensoredObservation::new(z, d).unwrap()).collect();
    // Fisher-Yates driven by a fixed LCG.
    let mut s = seed | 1;
    for i in (1..obs.len()).rev() {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        obs.swap(i, (s >> 33) as usize % (i + 1));
    }
    obs
}

fn sample_of(pairs: &[(f64, u8)]) -> SortedCensoredSample {
    let z: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let d: Vec<u8> = pairs.iter().map(|p| p.1).collect();
    SortedCensoredSample::from_pairs(&z, &d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sorting_is_permutation_invariant(pairs in censored_sample(2, 60), seed in any::<u64>()) {
        let a = build_sorted_sample(&shuffled(&pairs, seed)).unwrap();
        let b = sample_of(&pairs);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn hill_and_k_star_are_scale_invariant(pairs in censored_sample(12, 80), e in -6i32..6) {
        let c = 2f64.powi(e);
        let s = sample_of(&pairs);
        let t = s.scaled(c).unwrap();
        for k in 1..s.n() {
            let (a, b) = (hill_estimator(&s, k).unwrap(), hill_estimator(&t, k).unwrap());
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
        }
        let ks = reiss_thomas_k(&s, DEFAULT_BETA).map(|c| c.k_star);
        let kt = reiss_thomas_k(&t, DEFAULT_BETA).map(|c| c.k_star);
        prop_assert_eq!(ks, kt);
    }

    #[test]
    fn premium_is_homogeneous(pairs in censored_sample(10, 80), c in 0.01f64..100.0, mult in 0.5f64..4.0, kf in 0.1f64..0.9) {
        let s = sample_of(&pairs);
        let k = ((s.n() - 1) as f64 * kf).ceil() as usize;
        prop_assume!(censored_hill(&s, k).is_ok());
        let r = mult * s.threshold(k).unwrap();
        let a = php_estimate(&s, EstimationSettings::new(k, 1.0, Retention::Explicit(r)));
        let b = php_estimate(&s.scaled(c).unwrap(), EstimationSettings::new(k, 1.0, Retention::Explicit(c * r)));
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert!((b.value - c * a.value).abs() <= 1e-10 * (c * a.value).abs());
        }
    }

    #[test]
    fn kaplan_meier_is_a_non_increasing_step(pairs in censored_sample(2, 60)) {
        let s = sample_of(&pairs);
        let z = s.z_sorted();
        let mut prev = 1.0;
        for i in 0..z.len() - 1 {
            let at = kaplan_meier_survival(&s, z[i]).unwrap();
            prop_assert!(at <= prev && at >= 0.0);
            // Constant between consecutive order statistics.
            let mid = 0.5 * (z[i] + z[i + 1]);
            prop_assert_eq!(kaplan_meier_survival(&s, mid).unwrap(), at);
            prev = at;
        }
        prop_assert!(kaplan_meier_survival(&s, 0.5 * z[0]).unwrap() == 1.0);
        let curve = kaplan_meier_curve(&s);
        prop_assert_eq!(curve.len(), z.len() - 1);
    }

    #[test]
    fn burr_quantile_round_trips(gamma in 0.02f64..2.0, eta in 0.05f64..4.0, ls in -25.0f64..-1e-3) {
        let m = BurrModel::new(gamma, eta).unwrap();
        let s = ls.exp();
        let back = m.survival(m.quantile_of_survival(s).unwrap()).unwrap();
        prop_assert!(((back - s) / s).abs() <= 1e-12, "{} -> {}", s, back);
    }

    #[test]
    fn pareto_quantile_round_trips(gamma in 0.02f64..2.0, x_min in 0.1f64..10.0, ls in -25.0f64..0.0) {
        let m = ParetoModel::new(gamma, x_min).unwrap();
        let s = ls.exp();
        let back = m.survival(m.quantile_of_survival(s).unwrap()).unwrap();
        prop_assert!(((back - s) / s).abs() <= 1e-12);
    }

    #[test]
    fn asymptotic_mean_is_linear_in_lambda(gamma in 0.05f64..0.45, p in 0.1f64..1.0, rho in 1.0f64..1.5,
                                           tau in -2.0f64..-0.05, l in -5.0f64..5.0) {
        let mu = |l: f64| AsymptoticParams::new(gamma, p, rho, tau, l).and_then(|q| asym_mean(&q));
        if let (Ok(one), Ok(at)) = (mu(1.0), mu(l)) {
            prop_assert!((at - l * one).abs() <= 1e-12 * (1.0 + (l * one).abs()));
            prop_assert_eq!(mu(0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn claims_csv_round_trips(pairs in prop::collection::vec((-30.0f64..30.0, 0u8..=1), 1..40)) {
        let obs: Vec<(f64, u8)> = pairs.iter().map(|&(l, d)| (l.exp(), d)).collect();
        let mut text = String::from("z,delta\n");
        for (z, d) in &obs {
            text.push_str(&format!("{},{}\n", format_number(*z), d));
        }
        let parsed = parse_claims(&text).unwrap();
        let expected = sample_of(&obs);
        prop_assert_eq!(parsed.delta_concomitant(), expected.delta_concomitant());
        for (a, b) in parsed.z_sorted().iter().zip(expected.z_sorted()) {
            prop_assert!(((a - b) / b).abs() <= 1e-11);
        }
    }

    #[test]
    fn premium_decreases_in_retention_and_increases_in_rho(gamma in 0.05f64..0.45, eta in 0.1f64..2.0,
                                                          r in 0.2f64..50.0, bump in 1.01f64..3.0) {
        let m: HeavyTailModel = BurrModel::new(gamma, eta).unwrap().into();
        let base = theoretical_premium(&m, 1.0, r).unwrap();
        prop_assert!(theoretical_premium(&m, 1.0, r * bump).unwrap() < base);
        prop_assert!(theoretical_premium(&m, 1.05, r).unwrap() > base);
    }
}
