//! The Gaussian limit of the premium estimator: `μ` and `σ²` over a grid,
//! then a small coverage experiment at a fixed `k` on Burr data.
//!
//! ```text
//! cargo run --release --example asymptotic_interval
//! ```

use tailpremium::asymptotics::{asym_variance, scheme_limit};
use tailpremium::stream::stream_from_words;
use tailpremium::{
    build_sorted_sample, confidence_interval, draw_censored_sample, php_estimate, theoretical_premium,
    AsymptoticParams, CensoringScheme, EstimationSettings, Retention,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>6} {:>5} {:>5} {:>12} {:>12}", "gamma1", "p", "rho", "mu", "sigma2");
    for (gamma1, p, rho) in [(0.1, 0.4, 1.0), (0.1, 0.8, 1.0), (0.25, 0.6, 1.1), (0.25, 0.9, 1.0)] {
        let params = AsymptoticParams::new(gamma1, p, rho, -0.25, 1.0)?;
        let mu = tailpremium::asym_mean(&params)?;
        let s2 = asym_variance(gamma1, p, rho)?;
        let note = if s2 <= 0.0 { "  (non-positive: no interval)" } else { "" };
        println!("{gamma1:>6} {p:>5} {rho:>5} {mu:>12.6} {s2:>12.6}{note}");
    }

    let (n, k, rho, reps) = (1500, 46, 1.0, 400);
    let scheme = CensoringScheme::burr_pair(0.1, 0.4, 0.25)?;
    let mut covered = 0;
    let mut evaluated = 0;
    for rep in 0..reps {
        let mut rng = stream_from_words(&[2024, rep]);
        let sample = build_sorted_sample(&draw_censored_sample(&scheme, n, &mut rng)?)?;
        let Ok(est) = php_estimate(&sample, EstimationSettings::new(k, rho, Retention::Threshold)) else { continue };
        let limit = scheme_limit(&scheme, k, n, rho, est.retention)?;
        let ci = confidence_interval(&est, &limit, k, 0.95)?;
        let truth = theoretical_premium(&scheme.loss, rho, est.retention)?;
        evaluated += 1;
        covered += usize::from(ci.lo <= truth && truth <= ci.hi);
    }
    println!("\nn = {n}, k = {k}: 95% interval covered the premium in {covered}/{evaluated} samples");
    Ok(())
}
