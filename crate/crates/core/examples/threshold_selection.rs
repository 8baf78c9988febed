//! Reiss–Thomas choice of `k`: the objective curve, the selected `k*`, and
//! the censored Hill path around it.
//!
//! ```text
//! cargo run --example threshold_selection
//! ```

use tailpremium::estimators::censored_hill_path;
use tailpremium::stream::stream_from_seed;
use tailpremium::{build_sorted_sample, draw_censored_sample, reiss_thomas_k, CensoringScheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scheme = CensoringScheme::burr_pair(0.25, 0.6, 0.25)?;
    let sample = build_sorted_sample(&draw_censored_sample(&scheme, 1500, &mut stream_from_seed(3))?)?;

    for beta in [0.0, 0.3, 0.5] {
        let c = reiss_thomas_k(&sample, beta)?;
        println!("beta = {beta}: k* = {:>3}, retention = {:.5}", c.k_star, c.retention);
    }

    let choice = reiss_thomas_k(&sample, 0.3)?;
    let path = censored_hill_path(&sample, sample.n() / 2)?;
    println!("\n{:>5} {:>12} {:>12}", "k", "objective", "gamma1_hat");
    for &(k, obj) in choice.objective_curve.iter().filter(|(k, _)| (*k <= 150 && k % 10 == 0) || *k == choice.k_star) {
        let mark = if k == choice.k_star { " <- k*" } else { "" };
        println!("{k:>5} {obj:>12.6} {:>12.5}{mark}", path[k - 1].unwrap_or(f64::NAN));
    }
    println!("\ntrue gamma1 = {}", scheme.gamma1());
    Ok(())
}
