use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the estimation, modelling and study layers can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,

    #[error("observation {index}: {reason}")]
    InvalidObservation { index: usize, reason: String },

    #[error("invalid settings: {0}")]
    InvalidSettings(String),

    #[error("k must satisfy 1 ≤ k < n (got k={k}, n={n})")]
    KOutOfRange { k: usize, n: usize },

    #[error("Kaplan-Meier estimate is only defined below the sample maximum (x={x}, max={max})")]
    OutOfSupport { x: f64, max: f64 },

    #[error("threshold order statistic must be positive (got {value})")]
    NonPositiveThreshold { value: f64 },

    #[error("all top-{k} observations censored; censored Hill estimator undefined")]
    AllCensored { k: usize },

    #[error("x={x} lies below the threshold {threshold}; tail extrapolation only applies above it")]
    BelowThreshold { x: f64, threshold: f64 },

    #[error("estimated tail too heavy for finite premium at this rho (gamma1={gamma1}, rho={rho}, gamma1*rho ≥ 1)")]
    TailTooHeavy { gamma1: f64, rho: f64 },

    #[error("premium integral diverges (gamma={gamma}, rho={rho}, rho*gamma ≥ 1)")]
    DivergentIntegral { gamma: f64, rho: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("root finding did not converge in bracket [{lo}, {hi}]")]
    RootNotFound { lo: f64, hi: f64 },

    #[error("quadrature did not reach tolerance (estimate {estimate}, error {error})")]
    Quadrature { estimate: f64, error: f64 },

    #[error("asymptotic mean is singular: {factor} vanishes")]
    SingularMean { factor: &'static str },

    #[error("asymptotic variance non-positive for these parameters ({sigma2}); no CI available")]
    NonPositiveVariance { sigma2: f64 },

    #[error("sample too small for threshold selection (n={n}, need at least {min})")]
    SampleTooSmall { n: usize, min: usize },

    #[error("no admissible k: every candidate top segment is fully censored")]
    NoAdmissibleK,

    #[error("all {replicates} replicates failed")]
    AllReplicatesFailed { replicates: usize },
}
