//! Point estimate and bias-corrected interval for the premium of a censored
//! claim sample.
//!
//! ```text
//! cargo run --example estimate_premium              # simulated Burr claims
//! cargo run --example estimate_premium -- claims.csv
//! ```

use std::path::Path;

use tailpremium::asymptotics::{asym_mean, asym_variance, normalization_factor};
use tailpremium::cli::read_claims;
use tailpremium::stream::stream_from_seed;
use tailpremium::threshold::DEFAULT_BETA;
use tailpremium::{
    build_sorted_sample, confidence_interval, draw_censored_sample, php_estimate, reiss_thomas_k, AsymptoticParams,
    CensoringScheme, EstimationSettings, NormalLimit, Retention,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sample = match std::env::args().nth(1) {
        Some(path) => read_claims(Path::new(&path))?,
        None => {
            let scheme = CensoringScheme::burr_pair(0.25, 0.6, 0.25)?;
            let draws = draw_censored_sample(&scheme, 1500, &mut stream_from_seed(7))?;
            build_sorted_sample(&draws)?
        }
    };
    println!("n = {}, uncensored = {}", sample.n(), sample.uncensored_count());

    let choice = reiss_thomas_k(&sample, DEFAULT_BETA)?;
    println!("k* = {}, Z(n-k*) = {:.6}", choice.k_star, choice.retention);

    for rho in [1.0, 1.1, 1.5] {
        let est = php_estimate(&sample, EstimationSettings::new(choice.k_star, rho, Retention::Threshold))?;
        let t = est.tail;
        println!(
            "rho = {rho:<4} gamma_H = {:.4}  p_hat = {:.3}  gamma1_hat = {:.4}  premium = {:.6}",
            t.gamma_hill, t.p_hat, t.gamma1_hat, est.value
        );

        // Plug-in limit with no second-order bias (lambda1 = 0).
        let params = AsymptoticParams::new(t.gamma1_hat, t.p_hat, rho, -0.25, 0.0)?;
        let limit = NormalLimit {
            mu: asym_mean(&params)?,
            sigma2: asym_variance(t.gamma1_hat, t.p_hat, rho)?,
            normalization: normalization_factor(est.retention, est.threshold, est.km_at_threshold, t.gamma1_hat, rho)?,
        };
        match confidence_interval(&est, &limit, est.k, 0.95) {
            Ok(ci) => println!("          95% interval [{:.6}, {:.6}]", ci.lo, ci.hi),
            Err(e) => println!("          no interval: {e}"),
        }
    }

    // A fixed retention above the threshold extrapolates along the fitted tail.
    let est = php_estimate(
        &sample,
        EstimationSettings::new(choice.k_star, 1.0, Retention::Explicit(2.0 * choice.retention)),
    )?;
    println!("premium above R = {:.4}: {:.6}", est.retention, est.value);
    Ok(())
}
