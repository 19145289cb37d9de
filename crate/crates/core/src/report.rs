//! Monte-Carlo rate estimates and paired attack reports.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// A success rate with its Wilson 95% interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub successes: u64,
    pub trials: u64,
    pub rate: f64,
    pub lower: f64,
    pub upper: f64,
}

impl RateEstimate {
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        let (lower, upper) = wilson_interval(successes, trials, Z95);
        let rate = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        Self { successes, trials, rate, lower, upper }
    }

    pub fn from_outcomes(outcomes: &[bool]) -> Self {
        Self::from_counts(outcomes.iter().filter(|&&b| b).count() as u64, outcomes.len() as u64)
    }

    /// Binomial standard error of the point estimate.
    pub fn std_error(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        (self.rate * (1.0 - self.rate) / self.trials as f64).sqrt()
    }
}

/// Mean of per-trial exact success probabilities and the standard deviation of the
/// resulting empirical rate under independent Bernoulli trials.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactRate {
    pub mean: f64,
    pub sigma: f64,
}

impl ExactRate {
    pub fn from_probabilities(p: &[f64]) -> Self {
        if p.is_empty() {
            return Self { mean: 0.0, sigma: 0.0 };
        }
        let t = p.len() as f64;
        let mean = p.iter().sum::<f64>() / t;
        let var: f64 = p.iter().map(|q| q * (1.0 - q)).sum();
        Self { mean, sigma: var.sqrt() / t }
    }
}

/// Break classification for a convincing adversary that no extractor can match.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BreakClass {
    TotalBreak,
    TotalKnowledgeBreak,
}

impl fmt::Display for BreakClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BreakClass::TotalBreak => "total break",
            BreakClass::TotalKnowledgeBreak => "total knowledge break",
        })
    }
}

/// Paired adversary/extractor success rates over the same world seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub adversary_success_rate: RateEstimate,
    pub extractor_success_rate: Option<RateEstimate>,
    pub exact_adversary_rate: Option<ExactRate>,
    pub break_class: Option<BreakClass>,
    pub trials: u64,
    pub params: serde_json::Value,
}
