//! Point estimators for randomly right-censored heavy-tailed data.
//!
//! The chain is: Kaplan–Meier survival `F̄ₙ`, Hill's estimator `γ̂ᴴ` of the
//! observed-data tail index, the proportion `p̂` of uncensored values among the
//! top `k`, the censored-data index `γ̂₁ = γ̂ᴴ / p̂`, a Weissman-type tail
//! `F̄̂(x) = (x / Z_{n−k:n})^(−1/γ̂₁) · F̄ₙ(Z_{n−k:n})`, and finally the
//! proportional hazard premium
//!
//! ```text
//! Π̂ρ(R) = ρR / (1/γ̂₁ − ρ) · (R / Z_{n−k:n})^(−1/(ργ̂₁)) · F̄ₙ(Z_{n−k:n})^(1/ρ)
//! ```

use crate::error::{Error, Result};
use crate::sample::{validate_settings, EstimationSettings, Retention, SortedCensoredSample};

/// Above this sample size Kaplan–Meier products are accumulated as log sums.
pub const LOG_SPACE_MIN_N: usize = 10_000;

/// Tail-index estimates from the top `k` order statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimates {
    pub k: usize,
    /// Hill's estimator `γ̂ᴴ` of the observed-data index `γ`.
    pub gamma_hill: f64,
    /// Proportion of uncensored observations among the top `k`.
    pub p_hat: f64,
    /// Censored-data tail index `γ̂₁ = γ̂ᴴ / p̂`.
    pub gamma1_hat: f64,
}

/// Estimated proportional hazard premium with the inputs that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PremiumEstimate {
    pub value: f64,
    pub rho: f64,
    pub retention: f64,
    pub k: usize,
    /// `F̄ₙ(Z_{n−k:n})`.
    pub km_at_threshold: f64,
    /// `Z_{n−k:n}`.
    pub threshold: f64,
    pub tail: TailEstimates,
}

/// Product of `1 − δ_{[i:n]}/(n−i+1)` for `i = 1..=upto`.
fn km_product(sample: &SortedCensoredSample, upto: usize) -> f64 {
    if sample.n() > LOG_SPACE_MIN_N {
        km_product_log(sample.delta_concomitant(), sample.n(), upto)
    } else {
        km_product_direct(sample.delta_concomitant(), sample.n(), upto)
    }
}

pub(crate) fn km_product_direct(delta: &[u8], n: usize, upto: usize) -> f64 {
    delta[..upto].iter().enumerate().filter(|(_, &d)| d == 1).map(|(i, _)| 1.0 - 1.0 / (n - i) as f64).product()
}

pub(crate) fn km_product_log(delta: &[u8], n: usize, upto: usize) -> f64 {
    delta[..upto]
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 1)
        .map(|(i, _)| (-1.0 / (n - i) as f64).ln_1p())
        .sum::<f64>()
        .exp()
}

/// Kaplan–Meier product-limit estimate of `F̄(x)`, defined for `x < Z_{n:n}`.
pub fn kaplan_meier_survival(sample: &SortedCensoredSample, x: f64) -> Result<f64> {
    let max = sample.max();
    if !(x < max) {
        return Err(Error::OutOfSupport { x, max });
    }
    let at_or_below = sample.z_sorted().partition_point(|&z| z <= x);
    Ok(km_product(sample, at_or_below))
}

/// Kaplan–Meier estimate at every distinct order statistic below `Z_{n:n}`,
/// as `(x, F̄ₙ(x))` pairs in increasing `x`.
pub fn kaplan_meier_curve(sample: &SortedCensoredSample) -> Vec<(f64, f64)> {
    let n = sample.n();
    let z = sample.z_sorted();
    let d = sample.delta_concomitant();
    let log_space = n > LOG_SPACE_MIN_N;
    let mut acc = if log_space { 0.0 } else { 1.0 };
    let mut curve = Vec::new();
    let max = sample.max();
    for i in 0..n {
        if z[i] >= max {
            break;
        }
        if d[i] == 1 {
            let step = -1.0 / (n - i) as f64;
            if log_space {
                acc += step.ln_1p();
            } else {
                acc *= 1.0 + step;
            }
        }
        if z[i + 1] > z[i] {
            curve.push((z[i], if log_space { acc.exp() } else { acc }));
        }
    }
    curve
}

/// `F̄ₙ(Z_{n−k:n}) = ∏_{i=1}^{n−k} (1 − δ_{[i:n]}/(n−i+1))`.
pub fn km_survival_at_threshold(sample: &SortedCensoredSample, k: usize) -> Result<f64> {
    sample.check_k(k)?;
    Ok(km_product(sample, sample.n() - k))
}

/// Hill's estimator `k⁻¹ Σ_{i=1}^{k} log(Z_{n−i+1:n} / Z_{n−k:n})`.
pub fn hill_estimator(sample: &SortedCensoredSample, k: usize) -> Result<f64> {
    let threshold = sample.threshold(k)?;
    if !(threshold > 0.0) {
        return Err(Error::NonPositiveThreshold { value: threshold });
    }
    let z = sample.z_sorted();
    let sum: f64 = z[z.len() - k..].iter().map(|&zi| (zi / threshold).ln()).sum();
    Ok(sum / k as f64)
}

/// Fraction of uncensored observations among the top `k`.
pub fn uncensored_proportion(sample: &SortedCensoredSample, k: usize) -> Result<f64> {
    sample.check_k(k)?;
    let d = sample.delta_concomitant();
    let count: usize = d[d.len() - k..].iter().map(|&x| x as usize).sum();
    Ok(count as f64 / k as f64)
}

/// Hill's estimator adapted to censoring, `γ̂₁ = γ̂ᴴ / p̂`.
pub fn censored_hill(sample: &SortedCensoredSample, k: usize) -> Result<TailEstimates> {
    let p_hat = uncensored_proportion(sample, k)?;
    if p_hat == 0.0 {
        return Err(Error::AllCensored { k });
    }
    let gamma_hill = hill_estimator(sample, k)?;
    Ok(TailEstimates { k, gamma_hill, p_hat, gamma1_hat: gamma_hill / p_hat })
}

/// `γ̂₁(k)` for `k = 1..=k_max`, entry `k − 1`; `None` where the top `k` are
/// all censored or the threshold is not positive.
///
/// Uses the spacing identity `Σ_{i≤k} log(Z_{n−i+1}/Z_{n−k}) = Σ_{j≤k} j·log(Z_{n−j+1}/Z_{n−j})`
/// so the whole path costs `O(k_max)`.
pub fn censored_hill_path(sample: &SortedCensoredSample, k_max: usize) -> Result<Vec<Option<f64>>> {
    sample.check_k(k_max)?;
    let n = sample.n();
    let z = sample.z_sorted();
    let d = sample.delta_concomitant();
    let mut path = Vec::with_capacity(k_max);
    let mut log_sum = 0.0;
    let mut uncensored = 0usize;
    let mut positive = true;
    for j in 1..=k_max {
        let upper = z[n - j];
        let lower = z[n - j - 1];
        uncensored += d[n - j] as usize;
        positive &= lower > 0.0;
        if !positive {
            path.push(None);
            continue;
        }
        log_sum += j as f64 * (upper / lower).ln();
        path.push((uncensored > 0).then(|| log_sum / uncensored as f64));
    }
    Ok(path)
}

fn check_tail_index(gamma1: f64) -> Result<()> {
    if gamma1 == 0.0 {
        return Err(Error::Domain("estimated tail index is zero (degenerate top order statistics)".into()));
    }
    Ok(())
}

/// Weissman-type estimate of `F̄(x)` for `x ≥ Z_{n−k:n}`.
pub fn weissman_tail(sample: &SortedCensoredSample, k: usize, x: f64) -> Result<f64> {
    let tail = censored_hill(sample, k)?;
    check_tail_index(tail.gamma1_hat)?;
    let threshold = sample.threshold(k)?;
    if !(x >= threshold) {
        return Err(Error::BelowThreshold { x, threshold });
    }
    let km = km_survival_at_threshold(sample, k)?;
    Ok((x / threshold).powf(-1.0 / tail.gamma1_hat) * km)
}

/// Proportional hazard premium estimate `Π̂ρ(R)`.
///
/// The estimator assumes `R` close to `Z_{n−k:n}`; any positive `R` is
/// accepted, but accuracy degrades for retentions far above the threshold.
pub fn php_estimate(sample: &SortedCensoredSample, settings: EstimationSettings) -> Result<PremiumEstimate> {
    let settings = validate_settings(settings, sample.n())?;
    let EstimationSettings { k, rho, retention } = settings;
    let tail = censored_hill(sample, k)?;
    let gamma1 = tail.gamma1_hat;
    check_tail_index(gamma1)?;
    if gamma1 * rho >= 1.0 {
        return Err(Error::TailTooHeavy { gamma1, rho });
    }
    let threshold = sample.threshold(k)?;
    let retention = match retention {
        Retention::Explicit(r) => r,
        Retention::Threshold => threshold,
    };
    let km = km_survival_at_threshold(sample, k)?;
    let loading = rho * gamma1 / (1.0 - rho * gamma1);
    let value = loading * retention * (retention / threshold).powf(-1.0 / (rho * gamma1)) * km.powf(1.0 / rho);
    Ok(PremiumEstimate { value, rho, retention, k, km_at_threshold: km, threshold, tail })
}
