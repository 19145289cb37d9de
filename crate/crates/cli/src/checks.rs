//! Row builders shared by the Monte-Carlo experiments.

use pickone_core::report::{ExactRate, RateEstimate};

use crate::report::{Relation, ReportRow};
use crate::trials::rate_sigma;

fn interval_detail(est: &RateEstimate) -> String {
    format!("successes={} trials={} wilson95=[{}, {}]", est.successes, est.trials, est.lower, est.upper)
}

/// Observed rate against the mean of the per-trial exact probabilities, within three standard deviations.
pub fn rate_matches_exact(
    experiment: &str,
    params: &serde_json::Value,
    name: &str,
    est: &RateEstimate,
    exact: &ExactRate,
) -> ReportRow {
    let tol = 3.0 * rate_sigma(exact, est.trials);
    ReportRow::check(experiment, params, &format!("{name}_rate"), est.rate, Relation::Within, exact.mean, tol)
        .with_detail(interval_detail(est))
}

/// A lower threshold on a rate holds unless the whole Wilson interval lies below it.
pub fn rate_at_least(
    experiment: &str,
    params: &serde_json::Value,
    name: &str,
    est: &RateEstimate,
    threshold: f64,
) -> ReportRow {
    ReportRow::check(experiment, params, &format!("{name}_wilson_upper"), est.upper, Relation::AtLeast, threshold, 0.0)
        .with_detail(interval_detail(est))
}

/// An upper threshold on a rate holds unless the whole Wilson interval lies above it.
pub fn rate_at_most(
    experiment: &str,
    params: &serde_json::Value,
    name: &str,
    est: &RateEstimate,
    threshold: f64,
) -> ReportRow {
    ReportRow::check(experiment, params, &format!("{name}_wilson_lower"), est.lower, Relation::AtMost, threshold, 0.0)
        .with_detail(interval_detail(est))
}

/// A count that must be zero.
pub fn zero_count(experiment: &str, params: &serde_json::Value, metric: &str, count: u64) -> ReportRow {
    ReportRow::check(experiment, params, metric, count as f64, Relation::Within, 0.0, 0.0)
}

/// Adds `trials` to a parameter echo.
pub fn with_trials(mut params: serde_json::Value, trials: u64) -> serde_json::Value {
    if let Some(map) = params.as_object_mut() {
        map.insert("trials".into(), trials.into());
    }
    params
}
