//! Reiss–Thomas choice of the number of upper order statistics.
//!
//! For each candidate `k ∈ {2, …, ⌊n/2⌋}` the objective is
//!
//! ```text
//! (1/k) · Σ_{i=2}^{k} i^β · |γ̂₁(i) − med{γ̂₁(2), …, γ̂₁(k)}|
//! ```
//!
//! where `γ̂₁(i)` is the censored Hill estimate from the top `i` values and
//! `med` is the lower median. Indices whose top segment is fully censored
//! have no estimate and drop out of both the median and the sum. A candidate
//! `k` is evaluated only when `γ̂₁(k)` exists and at least two estimates enter
//! the median; with a single estimate the objective is identically zero.
//! Ties go to the smallest `k`; objectives within `1e-12·|median|` of the
//! running minimum count as ties, so rounding noise cannot move `k*`.

use crate::error::{Error, Result};
use crate::estimators::censored_hill_path;
use crate::sample::SortedCensoredSample;

pub const DEFAULT_BETA: f64 = 0.3;
pub const MIN_SAMPLE: usize = 10;
const TIE_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdChoice {
    pub k_star: usize,
    /// `Z_{n−k*:n}`.
    pub retention: f64,
    /// `(k, objective)` for every evaluated `k`, increasing in `k`.
    pub objective_curve: Vec<(usize, f64)>,
}

pub fn reiss_thomas_k(sample: &SortedCensoredSample, beta: f64) -> Result<ThresholdChoice> {
    let n = sample.n();
    if n < MIN_SAMPLE {
        return Err(Error::SampleTooSmall { n, min: MIN_SAMPLE });
    }
    if !(0.0..=0.5).contains(&beta) {
        return Err(Error::Domain(format!("beta must lie in [0, 0.5] (got {beta})")));
    }
    let k_max = n / 2;
    let path = censored_hill_path(sample, k_max)?;

    // Admissible (i, i^β, γ̂₁(i)) for i ≥ 2, in increasing i.
    let mut terms: Vec<(f64, f64)> = Vec::with_capacity(k_max);
    let mut sorted: Vec<f64> = Vec::with_capacity(k_max);
    let mut curve = Vec::new();
    let mut best: Option<(usize, f64)> = None;

    for k in 2..=k_max {
        let Some(gamma_k) = path[k - 1] else { continue };
        terms.push(((k as f64).powf(beta), gamma_k));
        let at = sorted.partition_point(|&g| g < gamma_k);
        sorted.insert(at, gamma_k);
        if sorted.len() < 2 {
            continue;
        }
        let median = sorted[(sorted.len() - 1) / 2];
        let objective = terms.iter().map(|&(w, g)| w * (g - median).abs()).sum::<f64>() / k as f64;
        curve.push((k, objective));
        if best.is_none_or(|(_, b)| objective < b - TIE_RTOL * median.abs()) {
            best = Some((k, objective));
        }
    }

    let (k_star, _) = best.ok_or(Error::NoAdmissibleK)?;
    Ok(ThresholdChoice { k_star, retention: sample.threshold(k_star)?, objective_curve: curve })
}
