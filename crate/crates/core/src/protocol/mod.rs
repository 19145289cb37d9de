//! Sigma-protocol, Fiat-Shamir and Fischlin constructions with their attacks.

pub mod fiat_shamir;
pub mod fischlin;
pub mod oracle;
pub mod sigma;

use crate::report::{AttackReport, BreakClass, RateEstimate};
use crate::world::Variant;

/// Paired adversary/extractor report over the same world seeds. The break class follows the
/// world variant: a false statement gives a total break, a true one a total knowledge break.
pub fn total_break_metrics(
    adversary: &[bool],
    extractor: &[bool],
    variant: Variant,
    params: serde_json::Value,
) -> AttackReport {
    AttackReport {
        adversary_success_rate: RateEstimate::from_outcomes(adversary),
        extractor_success_rate: Some(RateEstimate::from_outcomes(extractor)),
        exact_adversary_rate: None,
        break_class: Some(match variant {
            Variant::Statistical => BreakClass::TotalKnowledgeBreak,
            Variant::Computational => BreakClass::TotalBreak,
        }),
        trials: adversary.len() as u64,
        params,
    }
}
