//! A reduced Burr study grid run in parallel and printed as the study CSV.
//! Results are identical for any worker count.
//!
//! ```text
//! cargo run --release --example monte_carlo_study [-- workers]
//! ```

use tailpremium::cli::study_csv;
use tailpremium::{run_study, StudyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let workers = std::env::args().nth(1).map(|w| w.parse()).transpose()?.unwrap_or(4);
    let config = StudyConfig {
        p_values: vec![0.4, 0.8],
        n_values: vec![500, 1500],
        replicates: 200,
        ..StudyConfig::burr_protocol(0.1, 20240601)
    };
    let reports = run_study(&config, workers)?;
    print!("{}", study_csv(&config, &reports));

    let again = run_study(&config, 1)?;
    assert_eq!(study_csv(&config, &again), study_csv(&config, &reports));
    eprintln!("{} cells, single-worker rerun identical", reports.len());
    Ok(())
}
