//! The Burr loss and censoring pair: survival functions, the censoring
//! proportion, exact premiums against the Karamata approximation, and the
//! second-order quantities feeding the asymptotic bias.
//!
//! ```text
//! cargo run --example burr_censoring
//! ```

use tailpremium::models::second_order_a1;
use tailpremium::stream::stream_from_seed;
use tailpremium::{
    draw_censored_sample, h_threshold, karamata_premium, theoretical_premium, BurrModel, CensoringScheme,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (gamma1, p, eta) = (0.1, 0.6, 0.25);
    let scheme = CensoringScheme::burr_pair(gamma1, p, eta)?;
    println!(
        "gamma1 = {}, gamma2 = {:.4}, gamma = {:.4}, p = {}",
        scheme.gamma1(),
        scheme.gamma2(),
        scheme.gamma(),
        scheme.p()
    );

    let draws = draw_censored_sample(&scheme, 100_000, &mut stream_from_seed(1))?;
    let uncensored = draws.iter().filter(|o| o.is_uncensored()).count() as f64 / draws.len() as f64;
    println!("overall uncensored fraction in 1e5 draws: {uncensored:.4}");

    println!("\n{:>12} {:>14} {:>14} {:>8}", "R", "premium", "karamata", "ratio");
    for s in [1e-2, 1e-4, 1e-6, 1e-8, 1e-10] {
        let r = scheme.loss.quantile_of_survival(s)?;
        let exact = theoretical_premium(&scheme.loss, 1.0, r)?;
        let approx = karamata_premium(&scheme.loss, 1.0, r)?;
        println!("{r:>12.4e} {exact:>14.6e} {approx:>14.6e} {:>8.5}", exact / approx);
    }

    let loss = BurrModel::new(gamma1, eta)?;
    println!("\ntau1 = {}", loss.tau());
    for (k, n) in [(20, 500), (46, 1500), (200, 20_000)] {
        let h = h_threshold(&scheme, k, n)?;
        let lambda1 = (k as f64).sqrt() * second_order_a1(&loss, h);
        println!(
            "k = {k:>3}, n = {n:>5}: h = {h:.5}, A1(h) = {:.5}, sqrt(k) A1(h) = {lambda1:.4}",
            second_order_a1(&loss, h)
        );
    }
    Ok(())
}
