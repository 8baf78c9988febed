//! Censored observations, their ordered form, and estimation settings.
//!
//! Each observation is a pair `(z, delta)` where `z = min(X, Y)` is the
//! observed value and `delta = 1{X ≤ Y}` tells whether the loss itself was
//! seen (`1`) or the censoring variable cut it off (`0`).
//!
//! [`SortedCensoredSample`] holds the order statistics `Z_{1:n} ≤ … ≤ Z_{n:n}`
//! with each indicator carried along as the concomitant `δ_{[i:n]}`. Sorting is
//! stable, so among tied `z` values the concomitants keep their input order.

use crate::error::{Error, Result};

/// One observed `(z, delta)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensoredObservation {
    pub z: f64,
    /// `1` when the loss was observed, `0` when censored.
    pub delta: u8,
}

impl CensoredObservation {
    pub fn new(z: f64, delta: u8) -> Result<Self> {
        let obs = Self { z, delta };
        obs.check().map_err(|reason| Error::InvalidObservation { index: 0, reason })?;
        Ok(obs)
    }

    pub fn is_uncensored(&self) -> bool {
        self.delta == 1
    }

    fn check(&self) -> std::result::Result<(), String> {
        if !self.z.is_finite() {
            return Err(format!("z must be finite (got {})", self.z));
        }
        if self.z < 0.0 {
            return Err(format!("z must be non-negative (got {})", self.z));
        }
        if self.delta > 1 {
            return Err(format!("delta must be 0 or 1 (got {})", self.delta));
        }
        Ok(())
    }
}

/// Order statistics with concomitant censoring indicators.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedCensoredSample {
    z: Vec<f64>,
    delta: Vec<u8>,
}

/// Validates and sorts observations, keeping each indicator with its value.
pub fn build_sorted_sample(observations: &[CensoredObservation]) -> Result<SortedCensoredSample> {
    if observations.is_empty() {
        return Err(Error::EmptySample);
    }
    for (index, obs) in observations.iter().enumerate() {
        obs.check().map_err(|reason| Error::InvalidObservation { index, reason })?;
    }
    let mut sorted = observations.to_vec();
    // `sort_by` is stable; ties keep input order.
    sorted.sort_by(|a, b| a.z.total_cmp(&b.z));
    Ok(SortedCensoredSample {
        z: sorted.iter().map(|o| o.z).collect(),
        delta: sorted.iter().map(|o| o.delta).collect(),
    })
}

impl SortedCensoredSample {
    /// Builds a sample from parallel value and indicator slices.
    pub fn from_pairs(z: &[f64], delta: &[u8]) -> Result<Self> {
        if z.len() != delta.len() {
            return Err(Error::InvalidSettings(format!("z and delta lengths differ ({} vs {})", z.len(), delta.len())));
        }
        let obs: Vec<_> = z.iter().zip(delta).map(|(&z, &delta)| CensoredObservation { z, delta }).collect();
        build_sorted_sample(&obs)
    }

    /// Builds a sample in which every observation is uncensored.
    pub fn uncensored(z: &[f64]) -> Result<Self> {
        Self::from_pairs(z, &vec![1; z.len()])
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    /// Ascending order statistics.
    pub fn z_sorted(&self) -> &[f64] {
        &self.z
    }

    /// Concomitant indicators aligned with [`Self::z_sorted`].
    pub fn delta_concomitant(&self) -> &[u8] {
        &self.delta
    }

    /// `Z_{i:n}` with 1-based `i`.
    pub fn order_stat(&self, i: usize) -> f64 {
        self.z[i - 1]
    }

    /// `δ_{[i:n]}` with 1-based `i`.
    pub fn concomitant(&self, i: usize) -> u8 {
        self.delta[i - 1]
    }

    pub fn max(&self) -> f64 {
        self.z[self.z.len() - 1]
    }

    /// Checks `1 ≤ k < n`.
    pub fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k >= self.n() {
            return Err(Error::KOutOfRange { k, n: self.n() });
        }
        Ok(())
    }

    /// The intermediate order statistic `Z_{n−k:n}`.
    pub fn threshold(&self, k: usize) -> Result<f64> {
        self.check_k(k)?;
        Ok(self.z[self.n() - k - 1])
    }

    /// Number of uncensored observations.
    pub fn uncensored_count(&self) -> usize {
        self.delta.iter().map(|&d| d as usize).sum()
    }

    /// The same sample with every value multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Domain(format!("scale factor must be positive (got {factor})")));
        }
        Ok(Self { z: self.z.iter().map(|z| z * factor).collect(), delta: self.delta.clone() })
    }

    /// Observations in sorted order.
    pub fn observations(&self) -> impl Iterator<Item = CensoredObservation> + '_ {
        self.z.iter().zip(&self.delta).map(|(&z, &delta)| CensoredObservation { z, delta })
    }
}

/// Where the retention level `R` comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Retention {
    Explicit(f64),
    /// Use the intermediate order statistic `Z_{n−k:n}`.
    Threshold,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationSettings {
    /// Number of top order statistics.
    pub k: usize,
    /// Distortion parameter, `ρ ≥ 1`.
    pub rho: f64,
    pub retention: Retention,
}

impl EstimationSettings {
    pub fn new(k: usize, rho: f64, retention: Retention) -> Self {
        Self { k, rho, retention }
    }

    pub fn validate(self, n: usize) -> Result<Self> {
        validate_settings(self, n)
    }
}

/// Returns the settings unchanged iff `1 ≤ k < n`, `ρ ≥ 1`, and an explicit
/// retention is positive.
pub fn validate_settings(settings: EstimationSettings, n: usize) -> Result<EstimationSettings> {
    if settings.k == 0 || settings.k >= n {
        return Err(Error::KOutOfRange { k: settings.k, n });
    }
    if !(settings.rho >= 1.0) || !settings.rho.is_finite() {
        return Err(Error::InvalidSettings(format!("rho must be ≥ 1 (got {})", settings.rho)));
    }
    if let Retention::Explicit(r) = settings.retention {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidSettings(format!("retention must be positive (got {r})")));
        }
    }
    Ok(settings)
}
