//! Heavy-tail index and proportional hazard premium estimation for randomly
//! right-censored claim data.
//!
//! The pipeline runs from a [`SortedCensoredSample`] through the
//! Kaplan–Meier, Hill and censored Hill estimators to the premium estimate
//! [`php_estimate`], with [`reiss_thomas_k`] choosing the number of upper
//! order statistics and [`asymptotics`] supplying the Gaussian limit and
//! confidence intervals. [`models`] holds the Burr and Pareto reference
//! distributions and their exact premiums, and [`study`] runs seeded,
//! parallel Monte Carlo studies.
//!
//! Runnable walkthroughs live under `examples/`:
//!
//! - `estimate_premium`: point estimate and interval from a claim sample
//! - `kaplan_meier_curve`: product-limit survival curve as CSV
//! - `burr_censoring`: Burr loss and censoring model, exact premium, Karamata check
//! - `threshold_selection`: Reiss–Thomas objective curve and `k*`
//! - `asymptotic_interval`: `μ`, `σ²` and coverage of the Gaussian limit
//! - `monte_carlo_study`: a small study grid rendered as the CSV table

// Guards are written `!(x > 0.0)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod estimators;
pub mod models;
pub mod quadrature;
pub mod sample;
pub mod stream;
pub mod study;
pub mod threshold;

pub use asymptotics::{
    asym_mean, asym_variance, confidence_interval, normalization_factor, AsymptoticParams, ConfidenceInterval,
    NormalLimit,
};
pub use error::{Error, Result};
pub use estimators::{
    censored_hill, hill_estimator, kaplan_meier_curve, kaplan_meier_survival, km_survival_at_threshold, php_estimate,
    uncensored_proportion, weissman_tail, PremiumEstimate, TailEstimates,
};
pub use models::{
    draw_censored_sample, gamma2_from_p, h_threshold, karamata_premium, theoretical_premium, BurrModel,
    CensoringScheme, HeavyTailModel, ParetoModel,
};
pub use sample::{build_sorted_sample, CensoredObservation, EstimationSettings, Retention, SortedCensoredSample};
pub use study::{run_study, StudyConfig, StudyRow};
pub use threshold::{reiss_thomas_k, ThresholdChoice};
