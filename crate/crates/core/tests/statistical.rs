//! Randomized checks against population quantities. Seeds are fixed, so the
//! outcomes are reproducible.

use tailpremium::models::second_order_a1;
use tailpremium::quadrature::{integrate, Tolerance};
use tailpremium::stream::stream_from_words;
use tailpremium::threshold::DEFAULT_BETA;
use tailpremium::{
    build_sorted_sample, censored_hill, draw_censored_sample, php_estimate, reiss_thomas_k, BurrModel, CensoringScheme,
    EstimationSettings, ParetoModel, Retention, SortedCensoredSample,
};

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[(v.len() - 1) / 2]
}

fn sample(scheme: &CensoringScheme, n: usize, words: &[u64]) -> SortedCensoredSample {
    build_sorted_sample(&draw_censored_sample(scheme, n, &mut stream_from_words(words)).unwrap()).unwrap()
}

#[test]
fn censored_hill_consistent_for_pareto() {
    let (g1, p) = (0.1, 0.6);
    let g2 = p * g1 / (1.0 - p);
    let scheme = CensoringScheme::new(ParetoModel::standard(g1).unwrap(), ParetoModel::standard(g2).unwrap());
    let n = 20_000;
    let k = (n as f64).powf(0.6).floor() as usize;
    let estimates: Vec<f64> =
        (0..200).map(|seed| censored_hill(&sample(&scheme, n, &[11, seed]), k).unwrap().gamma1_hat).collect();
    let m = median(estimates);
    assert!((m - g1).abs() <= 0.1 * g1, "median {m}");
}

#[test]
fn uncensored_fraction_matches_population() {
    let scheme = CensoringScheme::burr_pair(0.1, 0.4, 0.25).unwrap();
    let s = sample(&scheme, 100_000, &[12]);
    let observed = s.uncensored_count() as f64 / s.n() as f64;
    // P(δ = 1) = ∫₀¹ Ḡ(q_F(s)) ds.
    let integrand = |u: f64| {
        if u == 0.0 {
            0.0
        } else {
            scheme.censor.survival(scheme.loss.quantile_of_survival(u).unwrap()).unwrap()
        }
    };
    let expected =
        integrate(integrand, 0.0, 1.0, Tolerance { abs: 1e-10, rel: 1e-8, max_intervals: 2000 }).unwrap().value;
    assert!((observed - expected).abs() <= 0.01, "{observed} vs {expected}");
}

#[test]
fn top_k_uncensored_fraction_near_p() {
    for (g1, p) in [(0.1, 0.4), (0.1, 0.6), (0.25, 0.8)] {
        let scheme = CensoringScheme::burr_pair(g1, p, 0.25).unwrap();
        let s = sample(&scheme, 100_000, &[13, p.to_bits()]);
        let top = &s.delta_concomitant()[s.n() - 1000..];
        let frac = top.iter().map(|&d| d as f64).sum::<f64>() / 1000.0;
        assert!((frac - p).abs() <= 0.05, "p={p}: {frac}");
    }
}

#[test]
fn burr_second_order_limit() {
    let (gamma, eta) = (0.1, 0.25);
    let model = BurrModel::new(gamma, eta).unwrap();
    let tau = model.tau();
    let (t, x): (f64, f64) = (1e6, 2.0);
    // log F̄(s) = −(1/γ) log s − (1/η) log1p(s^(−η/γ)), differenced without cancellation.
    let a = eta / gamma;
    let log_excess = -(((t * x).powf(-a)).ln_1p() - t.powf(-a).ln_1p()) / eta;
    let base = x.powf(-1.0 / gamma);
    let numerator = base * log_excess.exp_m1();
    let ratio = numerator / second_order_a1(&model, t);
    let limit = base * ((x.powf(tau / gamma) - 1.0) / (gamma * tau));
    assert!(((ratio - limit) / limit).abs() <= 1e-3, "{ratio} vs {limit}");

    // Moderate t through the model's own survival function.
    let t = 30.0;
    let ratio = (model.survival(t * x).unwrap() / model.survival(t).unwrap() - base) / second_order_a1(&model, t);
    assert!(((ratio - limit) / limit).abs() <= 2e-2, "{ratio} vs {limit}");
}

#[test]
fn burr_survival_is_regularly_varying() {
    let model = BurrModel::new(0.1, 0.25).unwrap();
    let t = 1e6;
    let ratio = model.survival(2.0 * t).unwrap() / model.survival(t).unwrap();
    assert!((ratio / 2f64.powf(-10.0) - 1.0).abs() <= 1e-4);
}

#[test]
fn reiss_thomas_tail_index_near_truth() {
    let scheme = CensoringScheme::burr_pair(0.25, 0.6, 0.25).unwrap();
    let estimates: Vec<f64> = (0..200)
        .map(|seed| {
            let s = sample(&scheme, 1500, &[14, seed]);
            let k = reiss_thomas_k(&s, DEFAULT_BETA).unwrap().k_star;
            censored_hill(&s, k).unwrap().gamma1_hat
        })
        .collect();
    let m = median(estimates);
    assert!((m - 0.25).abs() <= 0.25 * 0.25, "median gamma1_hat(k*) = {m}, outside 0.25 ± 25%");
}

#[test]
fn nearly_uncensored_scheme_matches_plain_estimates() {
    // Censoring tail far heavier than the loss tail: almost every top observation is a loss.
    let scheme = CensoringScheme::new(ParetoModel::standard(0.2).unwrap(), ParetoModel::standard(20.0).unwrap());
    let s = sample(&scheme, 5000, &[15]);
    let k = 200;
    let t = censored_hill(&s, k).unwrap();
    assert!(t.p_hat >= 0.97, "{}", t.p_hat);
    assert!((t.gamma1_hat - 0.2).abs() <= 0.04, "{}", t.gamma1_hat);
    let est = php_estimate(&s, EstimationSettings::new(k, 1.0, Retention::Threshold)).unwrap();
    let truth = 0.2 / 0.8 * est.retention.powf(1.0 - 5.0);
    assert!((est.value / truth - 1.0).abs() <= 0.2, "{} vs {truth}", est.value);
}
