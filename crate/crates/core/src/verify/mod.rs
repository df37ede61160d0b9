//! Independent checks of the supermode results: the closed-form optimized
//! case, full-matrix covariance propagation, deterministic time-domain decay
//! and a Monte Carlo spectral estimate.

mod analytic;
mod covariance;
mod dense;
mod stochastic;
mod time_domain;

pub use analytic::{
    analytic_optimized_case, optimized_lambda0, optimized_threshold_reduction, AnalyticReport,
    OptimizedCaseSpec, WIDTH_MATCH_TOLERANCE,
};
pub use covariance::{covariance_homodyne_variance, covariance_variance, CovarianceReport};
pub use stochastic::{stochastic_variance_estimate, StochasticEstimate, MIN_TRAJECTORIES};
pub use time_domain::{fit_decay_rate, integrate_mean_field, time_domain_decay, MAX_STEP_GAMMA};
