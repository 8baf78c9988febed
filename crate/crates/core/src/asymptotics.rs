//! Asymptotic normal limit of the premium estimator.
//!
//! ```text
//! √k (Π̂ρ(R) − Πρ(R)) / [(R/h)^(−1/(ργ₁)) R F̄(h)^(1/ρ)]  →  N(μ, σ²)
//!
//! μ  = ρλ₁ / ((1−pτ₁)(1−ργ₁)²) + λ₁ / (ρ(γ₁+τ₁+ρ−2)(2−ρ−γ₁))
//! σ² = γ₁²/(1−ργ₁)² · ( p(2−p) + ρ(p−1)/(1−ργ₁) + ρ²(1−2p)/(p(1−ργ₁)²) )
//! ```
//!
//! `σ²` is evaluated exactly as written and is negative for some parameter
//! sets (for example `γ₁ = 0.1, ρ = 1, p = 0.8`). Callers that need a
//! variance get [`Error::NonPositiveVariance`] from [`confidence_interval`].

use statrs::function::erf::erf_inv;

use crate::error::{Error, Result};
use crate::estimators::PremiumEstimate;
use crate::models::{h_threshold, CensoringScheme};

/// Denominator factors closer to zero than this are treated as vanishing.
const SINGULAR_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticParams {
    pub gamma1: f64,
    /// Asymptotic uncensored proportion, `p ∈ (0, 1]`.
    pub p: f64,
    pub rho: f64,
    /// Second-order parameter of the loss tail, `τ₁ ≤ 0`.
    pub tau1: f64,
    /// Limit of `√k·A₁(h)`.
    pub lambda1: f64,
}

impl AsymptoticParams {
    pub fn new(gamma1: f64, p: f64, rho: f64, tau1: f64, lambda1: f64) -> Result<Self> {
        let params = Self { gamma1, p, rho, tau1, lambda1 };
        params.check()?;
        Ok(params)
    }

    fn check(&self) -> Result<()> {
        check_gamma_rho(self.gamma1, self.rho)?;
        check_p(self.p)?;
        if !(self.tau1 <= 0.0) {
            return Err(Error::Domain(format!("tau1 must be ≤ 0 (got {})", self.tau1)));
        }
        if !self.lambda1.is_finite() {
            return Err(Error::Domain(format!("lambda1 must be finite (got {})", self.lambda1)));
        }
        Ok(())
    }
}

fn check_gamma_rho(gamma1: f64, rho: f64) -> Result<()> {
    if !(gamma1 > 0.0) || !(rho > 0.0) {
        return Err(Error::Domain(format!("gamma1 and rho must be positive (got {gamma1}, {rho})")));
    }
    if rho * gamma1 >= 1.0 {
        return Err(Error::TailTooHeavy { gamma1, rho });
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!("p must lie in (0, 1] (got {p})")));
    }
    Ok(())
}

/// Parameters of the Gaussian limit plus the normalizing scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalLimit {
    pub mu: f64,
    pub sigma2: f64,
    pub normalization: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub lo: f64,
    pub hi: f64,
    pub level: f64,
}

/// Asymptotic bias `μ`.
pub fn asym_mean(params: &AsymptoticParams) -> Result<f64> {
    params.check()?;
    let AsymptoticParams { gamma1, p, rho, tau1, lambda1 } = *params;
    let factors =
        [("(1−pτ₁)", 1.0 - p * tau1), ("(2−ρ−γ₁)", 2.0 - rho - gamma1), ("(γ₁+τ₁+ρ−2)", gamma1 + tau1 + rho - 2.0)];
    if let Some((factor, _)) = factors.iter().find(|(_, v)| v.abs() < SINGULAR_EPS) {
        return Err(Error::SingularMean { factor });
    }
    let [(_, a), (_, c), (_, b)] = factors;
    let one_minus = 1.0 - rho * gamma1;
    Ok(rho * lambda1 / (a * one_minus * one_minus) + lambda1 / (rho * b * c))
}

/// Asymptotic variance `σ²` exactly as the closed form reads; may be negative.
pub fn asym_variance(gamma1: f64, p: f64, rho: f64) -> Result<f64> {
    check_gamma_rho(gamma1, rho)?;
    check_p(p)?;
    let d = 1.0 - rho * gamma1;
    let bracket = p * (2.0 - p) + rho * (p - 1.0) / d + rho * rho * (1.0 - 2.0 * p) / (p * d * d);
    Ok(gamma1 * gamma1 / (d * d) * bracket)
}

/// `(R/h)^(−1/(ργ₁)) · R · F̄(h)^(1/ρ)`.
pub fn normalization_factor(retention: f64, h: f64, survival_at_h: f64, gamma1: f64, rho: f64) -> Result<f64> {
    for (name, v) in [("retention", retention), ("h", h), ("survival_at_h", survival_at_h)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("{name} must be positive (got {v})")));
        }
    }
    check_gamma_rho(gamma1, rho)?;
    Ok((retention / h).powf(-1.0 / (rho * gamma1)) * retention * survival_at_h.powf(1.0 / rho))
}

/// Two-sided standard normal quantile `z_{(1+level)/2}`.
pub fn normal_two_sided_quantile(level: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&level) {
        return Err(Error::Domain(format!("confidence level must lie in [0, 1) (got {level})")));
    }
    Ok(std::f64::consts::SQRT_2 * erf_inv(level))
}

/// Bias-corrected Gaussian interval
/// `[Π̂ − N(μ + zσ)/√k, Π̂ − N(μ − zσ)/√k]` with `N` the normalization.
pub fn confidence_interval(
    estimate: &PremiumEstimate,
    limit: &NormalLimit,
    k: usize,
    level: f64,
) -> Result<ConfidenceInterval> {
    if !(limit.sigma2 > 0.0) {
        return Err(Error::NonPositiveVariance { sigma2: limit.sigma2 });
    }
    if k == 0 {
        return Err(Error::KOutOfRange { k, n: 0 });
    }
    let z = normal_two_sided_quantile(level)?;
    let scale = limit.normalization / (k as f64).sqrt();
    let sigma = limit.sigma2.sqrt();
    let a = estimate.value - scale * (limit.mu + z * sigma);
    let b = estimate.value - scale * (limit.mu - z * sigma);
    Ok(ConfidenceInterval { lo: a.min(b), hi: a.max(b), level })
}

/// `λ₁ = √k·A₁(h)` at finite `(k, n)`, with `h` solved from the scheme.
pub fn finite_sample_lambda1(scheme: &CensoringScheme, k: usize, n: usize) -> Result<f64> {
    let h = h_threshold(scheme, k, n)?;
    Ok((k as f64).sqrt() * scheme.loss.second_order_a(h))
}

/// The population limit for a known scheme at finite `(k, n)` and retention `R`.
pub fn scheme_limit(scheme: &CensoringScheme, k: usize, n: usize, rho: f64, retention: f64) -> Result<NormalLimit> {
    let h = h_threshold(scheme, k, n)?;
    let gamma1 = scheme.gamma1();
    let lambda1 = (k as f64).sqrt() * scheme.loss.second_order_a(h);
    let tau1 = scheme.loss.tau().unwrap_or(0.0);
    let params = AsymptoticParams::new(gamma1, scheme.p(), rho, tau1, lambda1)?;
    let survival_at_h = scheme.loss.log_survival_at_log(h.ln()).exp();
    Ok(NormalLimit {
        mu: asym_mean(&params)?,
        sigma2: asym_variance(gamma1, scheme.p(), rho)?,
        normalization: normalization_factor(retention, h, survival_at_h, gamma1, rho)?,
    })
}
