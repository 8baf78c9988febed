//! Product-limit survival curve of a censored sample, written as
//! `x,survival` CSV on stdout.
//!
//! ```text
//! cargo run --example kaplan_meier_curve > km.csv
//! ```

use tailpremium::cli::format_number;
use tailpremium::{kaplan_meier_curve, kaplan_meier_survival, SortedCensoredSample};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Small hand-checkable sample: censored values at 2 and 5.
    let z = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    let delta = [1, 0, 1, 1, 0, 1];
    let sample = SortedCensoredSample::from_pairs(&z, &delta)?;

    eprintln!("S(2.5) = {:.6}", kaplan_meier_survival(&sample, 2.5)?);
    eprintln!("S(5.5) = {:.6}", kaplan_meier_survival(&sample, 5.5)?);
    match kaplan_meier_survival(&sample, 6.0) {
        Ok(s) => eprintln!("S(6) = {s}"),
        Err(e) => eprintln!("S(6): {e}"),
    }

    println!("x,survival");
    for (x, s) in kaplan_meier_curve(&sample) {
        println!("{},{}", format_number(x), format_number(s));
    }
    Ok(())
}
