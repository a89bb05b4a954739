//! Randomness metrics, binomial and bootstrap intervals, variance
//! estimators and non-monotonic seed detection.

mod bootstrap;
mod metrics;
mod nonmonotonic;
mod variance;
pub mod verify;

pub use bootstrap::{bootstrap_ci, quantile_sorted};
pub use metrics::{
    binomial_interval, entropy, histogram, histogram_csv, outlier_fraction, outlier_fraction_of, span, trim_count,
    trimmed_span, MetricsReport, BUCKETS, DEFAULT_CONFIDENCE, DEFAULT_TRIM,
};
pub use nonmonotonic::{
    nonmonotonic_seeds, two_proportion_z, win_count, z_critical, BudgetFlags, MonotonicFlag, NonMonotonicReport,
};
pub use variance::{bernoulli_variance, mirrored_game_variance, mirrored_variance_of, single_game_variance};
pub use verify::{verify_variance, Mixture, VarianceCheck, VarianceReport};
