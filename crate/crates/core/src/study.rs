//! Replicated Monte Carlo study of the premium estimator on Burr data.
//!
//! Each replicate draws a censored Burr sample, picks `k*` with the
//! Reiss–Thomas rule, sets `R = Z_{n−k*:n}`, and compares `Π̂ρ(R)` with the
//! exact `Πρ(R)` obtained by quadrature at that same `R`.
//!
//! Replicate streams are keyed by `(master_seed, γ₁, η, p, n, replicate)`.
//! The distortion `ρ` is deliberately not part of the key, so cells that
//! differ only in `ρ` see the same samples. Results never depend on the
//! number of worker threads.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::php_estimate;
use crate::models::{draw_censored_sample, theoretical_premium, CensoringScheme};
use crate::sample::{build_sorted_sample, EstimationSettings, Retention};
use crate::stream::stream_from_words;
use crate::threshold::{reiss_thomas_k, DEFAULT_BETA};

pub const MIN_STUDY_N: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub gamma1: f64,
    pub eta: f64,
    pub p_values: Vec<f64>,
    pub rho_values: Vec<f64>,
    pub n_values: Vec<usize>,
    pub replicates: usize,
    pub master_seed: u64,
    /// Reiss–Thomas weight exponent.
    pub beta: f64,
}

impl StudyConfig {
    /// The Burr protocol grid: `η = 1/4`, `p ∈ {0.4, 0.6, 0.8}`,
    /// `ρ ∈ {1, 1.1}`, `n ∈ {500, 1000, 1500}`, 1000 replicates.
    pub fn burr_protocol(gamma1: f64, master_seed: u64) -> Self {
        Self {
            gamma1,
            eta: 0.25,
            p_values: vec![0.4, 0.6, 0.8],
            rho_values: vec![1.0, 1.1],
            n_values: vec![500, 1000, 1500],
            replicates: 1000,
            master_seed,
            beta: DEFAULT_BETA,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSettings(msg));
        if !(self.gamma1 > 0.0 && self.gamma1.is_finite()) {
            return bad(format!("gamma1 must be positive (got {})", self.gamma1));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return bad(format!("eta must be positive (got {})", self.eta));
        }
        if self.p_values.is_empty() || self.rho_values.is_empty() || self.n_values.is_empty() {
            return bad("p_values, rho_values and n_values must be non-empty".into());
        }
        if let Some(p) = self.p_values.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
            return bad(format!("every p must lie in (0, 1) (got {p})"));
        }
        if let Some(r) = self.rho_values.iter().find(|&&r| !(r >= 1.0 && r.is_finite())) {
            return bad(format!("every rho must be ≥ 1 (got {r})"));
        }
        if let Some(n) = self.n_values.iter().find(|&&n| n < MIN_STUDY_N) {
            return bad(format!("every n must be ≥ {MIN_STUDY_N} (got {n})"));
        }
        if self.replicates == 0 {
            return bad("replicates must be ≥ 1".into());
        }
        if !(0.0..=0.5).contains(&self.beta) {
            return bad(format!("beta must lie in [0, 0.5] (got {})", self.beta));
        }
        Ok(())
    }

    /// Cells in p-major, then ρ, then n order.
    pub fn cells(&self) -> Vec<StudyCell> {
        let mut cells = Vec::new();
        for &p in &self.p_values {
            for &rho in &self.rho_values {
                for &n in &self.n_values {
                    cells.push(StudyCell { gamma1: self.gamma1, p, rho, n, eta: self.eta, beta: self.beta });
                }
            }
        }
        cells
    }
}

/// One `(γ₁, p, ρ, n, η)` configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyCell {
    pub gamma1: f64,
    pub p: f64,
    pub rho: f64,
    pub n: usize,
    pub eta: f64,
    pub beta: f64,
}

impl StudyCell {
    pub fn new(gamma1: f64, p: f64, rho: f64, n: usize, eta: f64) -> Self {
        Self { gamma1, p, rho, n, eta, beta: DEFAULT_BETA }
    }

    fn stream_key(&self, master_seed: u64, replicate_index: usize) -> [u64; 6] {
        [
            master_seed,
            self.gamma1.to_bits(),
            self.eta.to_bits(),
            self.p.to_bits(),
            self.n as u64,
            replicate_index as u64,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicateValues {
    pub pi_true: f64,
    pub pi_hat: f64,
    pub k_star: usize,
    pub retention: f64,
}

/// Outcome of one replicate; estimator failures are recorded, not raised.
#[derive(Debug, Clone, PartialEq)]
pub enum ReplicateResult {
    Ok(ReplicateValues),
    Failed(Error),
}

impl ReplicateResult {
    pub fn values(&self) -> Option<&ReplicateValues> {
        match self {
            Self::Ok(v) => Some(v),
            Self::Failed(_) => None,
        }
    }
}

fn replicate_values(cell: &StudyCell, replicate_index: usize, master_seed: u64) -> Result<ReplicateValues> {
    let scheme = CensoringScheme::burr_pair(cell.gamma1, cell.p, cell.eta)?;
    let mut rng = stream_from_words(&cell.stream_key(master_seed, replicate_index));
    let sample = build_sorted_sample(&draw_censored_sample(&scheme, cell.n, &mut rng)?)?;
    let choice = reiss_thomas_k(&sample, cell.beta)?;
    let estimate = php_estimate(&sample, EstimationSettings::new(choice.k_star, cell.rho, Retention::Threshold))?;
    let pi_true = theoretical_premium(&scheme.loss, cell.rho, choice.retention)?;
    Ok(ReplicateValues { pi_true, pi_hat: estimate.value, k_star: choice.k_star, retention: choice.retention })
}

pub fn run_replicate(cell: &StudyCell, replicate_index: usize, master_seed: u64) -> ReplicateResult {
    match replicate_values(cell, replicate_index, master_seed) {
        Ok(v) => ReplicateResult::Ok(v),
        Err(e) => ReplicateResult::Failed(e),
    }
}

/// Aggregated metrics for one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyRow {
    pub p: f64,
    pub rho: f64,
    pub n: usize,
    pub mean_pi_true: f64,
    pub mean_pi_hat: f64,
    /// `|mean π̂ − mean π|` over successful replicates.
    pub abs_bias: f64,
    /// `sqrt(mean (π̂ − π)²)` over successful replicates.
    pub rmse: f64,
    pub failure_count: usize,
}

/// Folds replicate results in index order.
pub fn aggregate(cell: &StudyCell, results: &[ReplicateResult]) -> Result<StudyRow> {
    let ok: Vec<&ReplicateValues> = results.iter().filter_map(ReplicateResult::values).collect();
    if ok.is_empty() {
        return Err(Error::AllReplicatesFailed { replicates: results.len() });
    }
    let m = ok.len() as f64;
    let mean_pi_true = ok.iter().map(|v| v.pi_true).sum::<f64>() / m;
    let mean_pi_hat = ok.iter().map(|v| v.pi_hat).sum::<f64>() / m;
    let mse = ok.iter().map(|v| (v.pi_hat - v.pi_true).powi(2)).sum::<f64>() / m;
    Ok(StudyRow {
        p: cell.p,
        rho: cell.rho,
        n: cell.n,
        mean_pi_true,
        mean_pi_hat,
        abs_bias: (mean_pi_hat - mean_pi_true).abs(),
        rmse: mse.sqrt(),
        failure_count: results.len() - ok.len(),
    })
}

/// A cell together with its aggregate, or the reason it has none.
#[derive(Debug, Clone, PartialEq)]
pub struct CellReport {
    pub cell: StudyCell,
    pub row: Result<StudyRow>,
}

fn log_cell(cell: &StudyCell, results: &[ReplicateResult], row: &Result<StudyRow>) {
    let mut errors: Vec<f64> = results.iter().filter_map(|r| r.values()).map(|v| v.pi_hat - v.pi_true).collect();
    errors.sort_by(f64::total_cmp);
    let q = |f: f64| errors.get(((errors.len() as f64 - 1.0) * f).round() as usize).copied().unwrap_or(f64::NAN);
    log::info!(
        "cell p={} rho={} n={}: error quantiles 5%={:.4e} 50%={:.4e} 95%={:.4e} max={:.4e}",
        cell.p,
        cell.rho,
        cell.n,
        q(0.05),
        q(0.5),
        q(0.95),
        q(1.0)
    );
    match row {
        Ok(r) if r.failure_count > 0 => {
            log::warn!("cell p={} rho={} n={}: {} replicates failed", cell.p, cell.rho, cell.n, r.failure_count)
        }
        Err(e) => log::warn!("cell p={} rho={} n={}: {e}", cell.p, cell.rho, cell.n),
        _ => {}
    }
}

/// Runs `replicates` replicates of one cell on the current rayon pool.
pub fn run_cell_replicates(cell: &StudyCell, replicates: usize, master_seed: u64) -> Vec<ReplicateResult> {
    (0..replicates).into_par_iter().map(|i| run_replicate(cell, i, master_seed)).collect()
}

/// Runs every cell of the study on a pool of `workers` threads.
pub fn run_study(config: &StudyConfig, workers: usize) -> Result<Vec<CellReport>> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?;
    let cells = config.cells();
    let jobs: Vec<(usize, usize)> =
        (0..cells.len()).flat_map(|c| (0..config.replicates).map(move |r| (c, r))).collect();
    let results: Vec<ReplicateResult> =
        pool.install(|| jobs.par_iter().map(|&(c, r)| run_replicate(&cells[c], r, config.master_seed)).collect());
    Ok(cells
        .iter()
        .zip(results.chunks(config.replicates))
        .map(|(cell, chunk)| {
            let row = aggregate(cell, chunk);
            log_cell(cell, chunk, &row);
            CellReport { cell: *cell, row }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(pi_true: f64, pi_hat: f64) -> ReplicateResult {
        ReplicateResult::Ok(ReplicateValues { pi_true, pi_hat, k_star: 5, retention: 1.0 })
    }

    fn cell() -> StudyCell {
        StudyCell::new(0.1, 0.4, 1.0, 500, 0.25)
    }

    #[test]
    fn aggregate_single() {
        let row = aggregate(&cell(), &[ok(2.0, 3.0)]).unwrap();
        assert_eq!((row.mean_pi_true, row.mean_pi_hat, row.abs_bias, row.rmse), (2.0, 3.0, 1.0, 1.0));
        assert_eq!(row.failure_count, 0);
    }

    #[test]
    fn aggregate_bias_vs_rmse() {
        let row = aggregate(&cell(), &[ok(1.0, 2.0), ok(3.0, 2.0)]).unwrap();
        assert_eq!(row.abs_bias, 0.0);
        assert_eq!(row.rmse, 1.0);
    }

    #[test]
    fn aggregate_skips_failures() {
        let failed = ReplicateResult::Failed(Error::AllCensored { k: 3 });
        let row = aggregate(&cell(), &[ok(1.0, 2.0), failed.clone()]).unwrap();
        assert_eq!(row.failure_count, 1);
        assert_eq!(row.rmse, 1.0);
        assert_eq!(aggregate(&cell(), &[failed.clone(), failed]), Err(Error::AllReplicatesFailed { replicates: 2 }));
    }

    #[test]
    fn replicate_is_deterministic() {
        let a = run_replicate(&cell(), 17, 99);
        let b = run_replicate(&cell(), 17, 99);
        assert_eq!(a, b);
        assert!(a.values().is_some());
        assert_ne!(a, run_replicate(&cell(), 18, 99));
    }

    #[test]
    fn rho_shares_samples() {
        let a = run_replicate(&cell(), 3, 5);
        let b = run_replicate(&StudyCell { rho: 1.1, ..cell() }, 3, 5);
        let (a, b) = (a.values().unwrap(), b.values().unwrap());
        assert_eq!(a.k_star, b.k_star);
        assert_eq!(a.retention, b.retention);
    }

    #[test]
    fn heavy_cells_fail_as_data() {
        let heavy = StudyCell::new(0.95, 0.6, 1.1, 200, 0.25);
        let results: Vec<_> = (0..20).map(|i| run_replicate(&heavy, i, 1)).collect();
        let failures = results.iter().filter(|r| r.values().is_none()).count();
        assert!(failures > 0);
        for r in &results {
            if let ReplicateResult::Failed(e) = r {
                assert!(matches!(e, Error::TailTooHeavy { .. } | Error::DivergentIntegral { .. }), "{e}");
            }
        }
    }

    #[test]
    fn config_validation_and_order() {
        let mut c = StudyConfig::burr_protocol(0.1, 1);
        assert!(c.validate().is_ok());
        let cells = c.cells();
        assert_eq!(cells.len(), 18);
        assert_eq!((cells[0].p, cells[0].rho, cells[0].n), (0.4, 1.0, 500));
        assert_eq!((cells[1].p, cells[1].rho, cells[1].n), (0.4, 1.0, 1000));
        assert_eq!((cells[3].p, cells[3].rho, cells[3].n), (0.4, 1.1, 500));
        assert_eq!((cells[6].p, cells[6].rho, cells[6].n), (0.6, 1.0, 500));
        c.n_values = vec![50];
        assert!(c.validate().is_err());
        c.n_values = vec![500];
        c.p_values = vec![1.0];
        assert!(c.validate().is_err());
    }

    #[test]
    fn single_replicate_row_matches_replicate() {
        let mut c = StudyConfig::burr_protocol(0.1, 7);
        c.p_values = vec![0.6];
        c.rho_values = vec![1.0];
        c.n_values = vec![300];
        c.replicates = 1;
        let reports = run_study(&c, 2).unwrap();
        assert_eq!(reports.len(), 1);
        let row = reports[0].row.clone().unwrap();
        let v = *run_replicate(&reports[0].cell, 0, 7).values().unwrap();
        assert_eq!(row.mean_pi_true, v.pi_true);
        assert_eq!(row.mean_pi_hat, v.pi_hat);
        assert_eq!(row.rmse, (v.pi_hat - v.pi_true).abs());
    }
}
