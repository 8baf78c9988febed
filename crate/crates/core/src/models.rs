//! Parametric heavy-tailed loss models and the censoring scheme built on them.
//!
//! Burr: `F̄(x) = (1 + x^(η/γ))^(−1/η)`, `x ≥ 0`, second-order parameter
//! `τ = −η` with rate `A(t) = γ·t^(−η/γ)`.
//!
//! Pareto: `F̄(x) = (x/x_min)^(−1/γ)`, `x ≥ x_min`; a pure power law, so
//! `A ≡ 0`.

use rand_chacha::rand_core::RngCore;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::sample::CensoredObservation;
use crate::stream::unit_open_closed;

/// `ln(1 + eᵗ)` without overflow.
fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Domain(format!("{name} must be positive and finite (got {v})")));
    }
    Ok(())
}

fn check_survival_level(s: f64) -> Result<()> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::Domain(format!("survival level must lie in (0, 1] (got {s})")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurrModel {
    pub gamma: f64,
    pub eta: f64,
}

impl BurrModel {
    pub fn new(gamma: f64, eta: f64) -> Result<Self> {
        check_positive("gamma", gamma)?;
        check_positive("eta", eta)?;
        Ok(Self { gamma, eta })
    }

    fn log_survival_at_log(&self, log_x: f64) -> f64 {
        -softplus(self.eta / self.gamma * log_x) / self.eta
    }

    pub fn survival(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("Burr survival needs x ≥ 0 (got {x})")));
        }
        Ok(self.log_survival_at_log(x.ln()).exp())
    }

    /// `x = (s^(−η) − 1)^(γ/η)`.
    pub fn quantile_of_survival(&self, s: f64) -> Result<f64> {
        check_survival_level(s)?;
        Ok((-self.eta * s.ln()).exp_m1().powf(self.gamma / self.eta))
    }

    /// Second-order parameter `τ = −η`.
    pub fn tau(&self) -> f64 {
        -self.eta
    }

    /// Second-order rate `A(t) = γ·t^(−η/γ)`.
    pub fn second_order_a(&self, t: f64) -> f64 {
        self.gamma * t.powf(-self.eta / self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParetoModel {
    pub gamma: f64,
    pub x_min: f64,
}

impl ParetoModel {
    pub fn new(gamma: f64, x_min: f64) -> Result<Self> {
        check_positive("gamma", gamma)?;
        check_positive("x_min", x_min)?;
        Ok(Self { gamma, x_min })
    }

    /// Unit-scale Pareto, `x_min = 1`.
    pub fn standard(gamma: f64) -> Result<Self> {
        Self::new(gamma, 1.0)
    }

    fn log_survival_at_log(&self, log_x: f64) -> f64 {
        let excess = log_x - self.x_min.ln();
        if excess <= 0.0 {
            0.0
        } else {
            -excess / self.gamma
        }
    }

    pub fn survival(&self, x: f64) -> Result<f64> {
        if !(x >= self.x_min) {
            return Err(Error::Domain(format!("Pareto survival needs x ≥ x_min={} (got {x})", self.x_min)));
        }
        Ok((x / self.x_min).powf(-1.0 / self.gamma))
    }

    pub fn quantile_of_survival(&self, s: f64) -> Result<f64> {
        check_survival_level(s)?;
        Ok(self.x_min * s.powf(-self.gamma))
    }
}

/// A heavy-tailed survival model with tail index `γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HeavyTailModel {
    Burr(BurrModel),
    Pareto(ParetoModel),
}

impl From<BurrModel> for HeavyTailModel {
    fn from(m: BurrModel) -> Self {
        Self::Burr(m)
    }
}

impl From<ParetoModel> for HeavyTailModel {
    fn from(m: ParetoModel) -> Self {
        Self::Pareto(m)
    }
}

impl HeavyTailModel {
    pub fn tail_index(&self) -> f64 {
        match self {
            Self::Burr(m) => m.gamma,
            Self::Pareto(m) => m.gamma,
        }
    }

    /// Left end of the support.
    pub fn support_start(&self) -> f64 {
        match self {
            Self::Burr(_) => 0.0,
            Self::Pareto(m) => m.x_min,
        }
    }

    pub fn survival(&self, x: f64) -> Result<f64> {
        match self {
            Self::Burr(m) => m.survival(x),
            Self::Pareto(m) => m.survival(x),
        }
    }

    pub fn quantile_of_survival(&self, s: f64) -> Result<f64> {
        match self {
            Self::Burr(m) => m.quantile_of_survival(s),
            Self::Pareto(m) => m.quantile_of_survival(s),
        }
    }

    /// `ln F̄(eˡ)`, total over the real line (`0` below the support).
    pub fn log_survival_at_log(&self, log_x: f64) -> f64 {
        match self {
            Self::Burr(m) => m.log_survival_at_log(log_x),
            Self::Pareto(m) => m.log_survival_at_log(log_x),
        }
    }

    /// Second-order rate `A₁(t)`; identically zero for Pareto.
    pub fn second_order_a(&self, t: f64) -> f64 {
        match self {
            Self::Burr(m) => m.second_order_a(t),
            Self::Pareto(_) => 0.0,
        }
    }

    /// Second-order parameter `τ`; not defined for a pure power law.
    pub fn tau(&self) -> Option<f64> {
        match self {
            Self::Burr(m) => Some(m.tau()),
            Self::Pareto(_) => None,
        }
    }
}

/// `γ₂ = p·γ₁/(1−p)`, the censoring index giving `p = γ₂/(γ₁+γ₂)`.
pub fn gamma2_from_p(gamma1: f64, p: f64) -> Result<f64> {
    check_positive("gamma1", gamma1)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("p must lie in (0, 1) (got {p})")));
    }
    Ok(p * gamma1 / (1.0 - p))
}

/// Independent loss `X ~ F` and censoring `Y ~ G`, observed as `Z = min(X, Y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensoringScheme {
    pub loss: HeavyTailModel,
    pub censor: HeavyTailModel,
}

impl CensoringScheme {
    pub fn new(loss: impl Into<HeavyTailModel>, censor: impl Into<HeavyTailModel>) -> Self {
        Self { loss: loss.into(), censor: censor.into() }
    }

    /// Burr loss and Burr censoring sharing `η`, with `γ₂` solved from `p`.
    pub fn burr_pair(gamma1: f64, p: f64, eta: f64) -> Result<Self> {
        let gamma2 = gamma2_from_p(gamma1, p)?;
        Ok(Self::new(BurrModel::new(gamma1, eta)?, BurrModel::new(gamma2, eta)?))
    }

    pub fn gamma1(&self) -> f64 {
        self.loss.tail_index()
    }

    pub fn gamma2(&self) -> f64 {
        self.censor.tail_index()
    }

    /// Tail index of the observed `Z`, `γ₁γ₂/(γ₁+γ₂)`.
    pub fn gamma(&self) -> f64 {
        let (g1, g2) = (self.gamma1(), self.gamma2());
        g1 * g2 / (g1 + g2)
    }

    /// Asymptotic proportion of uncensored tail observations, `γ₂/(γ₁+γ₂)`.
    pub fn p(&self) -> f64 {
        self.gamma2() / (self.gamma1() + self.gamma2())
    }

    /// `ln H̄(eˡ) = ln F̄(eˡ) + ln Ḡ(eˡ)`.
    pub fn log_observed_survival_at_log(&self, log_x: f64) -> f64 {
        self.loss.log_survival_at_log(log_x) + self.censor.log_survival_at_log(log_x)
    }

    pub fn observed_survival(&self, x: f64) -> f64 {
        self.log_observed_survival_at_log(x.ln()).exp()
    }
}

/// Draws `n` censored observations by inverse transform: per observation one
/// `(0, 1]` uniform for `X`, then one for `Y`.
pub fn draw_censored_sample<R: RngCore + ?Sized>(
    scheme: &CensoringScheme,
    n: usize,
    rng: &mut R,
) -> Result<Vec<CensoredObservation>> {
    if n == 0 {
        return Err(Error::Domain("sample size must be at least 1".into()));
    }
    (0..n)
        .map(|_| {
            let x = scheme.loss.quantile_of_survival(unit_open_closed(rng))?;
            let y = scheme.censor.quantile_of_survival(unit_open_closed(rng))?;
            Ok(CensoredObservation { z: x.min(y), delta: u8::from(x <= y) })
        })
        .collect()
}

fn check_finite_premium(model: &HeavyTailModel, rho: f64) -> Result<()> {
    let gamma = model.tail_index();
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("rho must be positive (got {rho})")));
    }
    if rho * gamma >= 1.0 {
        return Err(Error::DivergentIntegral { gamma, rho });
    }
    Ok(())
}

/// `Πρ(R) = ∫_R^∞ F̄(x)^(1/ρ) dx` by adaptive quadrature.
///
/// The substitution `x = R·u^(−m)`, `u ∈ (0, 1]`, maps the tail to a finite
/// interval. `m = 1` unless `ργ > 1/2`, where `m = ργ/(1−ργ)` keeps the
/// transformed integrand bounded at `u = 0`.
pub fn theoretical_premium(model: &HeavyTailModel, rho: f64, retention: f64) -> Result<f64> {
    check_finite_premium(model, rho)?;
    check_positive("retention", retention)?;
    let start = model.support_start();
    // Below the support the integrand is 1.
    let (flat, lower) = if retention < start { (start - retention, start) } else { (0.0, retention) };

    let rg = rho * model.tail_index();
    let m = if rg > 0.5 { rg / (1.0 - rg) } else { 1.0 };
    let log_lower = lower.ln();
    let log_scale = (lower * m).ln();
    let integrand = |u: f64| {
        let log_u = u.ln();
        let log_x = log_lower - m * log_u;
        (model.log_survival_at_log(log_x) / rho + log_scale - (m + 1.0) * log_u).exp()
    };
    let tail = integrate(integrand, 0.0, 1.0, Tolerance::default())?;
    Ok(flat + tail.value)
}

/// Karamata approximation `ρ/(1/γ₁ − ρ) · R · F̄(R)^(1/ρ)`.
pub fn karamata_premium(model: &HeavyTailModel, rho: f64, retention: f64) -> Result<f64> {
    check_finite_premium(model, rho).map_err(|_| Error::TailTooHeavy { gamma1: model.tail_index(), rho })?;
    check_positive("retention", retention)?;
    let survival = model.survival(retention)?;
    Ok(rho / (1.0 / model.tail_index() - rho) * retention * survival.powf(1.0 / rho))
}

/// `h = H^←(1 − k/n)`: the point where `F̄(h)·Ḡ(h) = k/n`, found by bisection
/// on `log h`.
pub fn h_threshold(scheme: &CensoringScheme, k: usize, n: usize) -> Result<f64> {
    if k == 0 || k >= n {
        return Err(Error::KOutOfRange { k, n });
    }
    let target = (k as f64 / n as f64).ln();
    let f = |lx: f64| scheme.log_observed_survival_at_log(lx) - target;

    let start = scheme.loss.support_start().max(scheme.censor.support_start());
    let mut lo = if start > 0.0 { start.ln() } else { -1.0 };
    while f(lo) <= 0.0 {
        lo -= 8.0;
        if lo < -700.0 {
            return Err(Error::RootNotFound { lo: lo.exp(), hi: f64::NAN });
        }
    }
    let mut hi = lo + 1.0;
    while f(hi) > 0.0 {
        hi += 8.0;
        if hi > 700.0 {
            return Err(Error::RootNotFound { lo: lo.exp(), hi: hi.exp() });
        }
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (a, b) = (lo.exp(), hi.exp());
    if (b - a) > 1e-10 * a {
        return Err(Error::RootNotFound { lo: a, hi: b });
    }
    Ok(0.5 * (a + b))
}

/// `A₁(t) = γ₁·t^(−η/γ₁)` for the Burr loss model.
pub fn second_order_a1(model: &BurrModel, t: f64) -> f64 {
    model.second_order_a(t)
}
