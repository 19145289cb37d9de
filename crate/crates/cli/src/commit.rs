//! `commit-attack`: open one commitment to a message chosen after committing.

use pickone_core::commitment::{attack_b1, attack_b2, attack_b2_exact, hiding_bound, hiding_distance_exact, verify};
use pickone_core::report::{ExactRate, RateEstimate};
use pickone_core::stats::p_fraction_tail;
use pickone_core::world::{OracleWorld, Variant};

use crate::args::CommitArgs;
use crate::checks::{rate_at_least, rate_matches_exact, with_trials, zero_count};
use crate::report::{Relation, ReportRow};
use crate::trials::{derive_seed, run_trials, trial_rng};

const EXPERIMENT: &str = "commit-attack";

/// Largest `l_com + l_resp` for which the hiding distance is computed.
const HIDING_MAX_RAND_BITS: u32 = 12;

pub fn run(args: &CommitArgs) -> anyhow::Result<Vec<ReportRow>> {
    let seed = args.common.seed;
    let trials = args.common.trials_or(1000);
    let params = args.world.params()?;
    let variant = Variant::from(args.world.variant);
    let len = args.msg_len as usize;
    let mut echo = with_trials(args.world.echo(), trials);
    echo["msg_len"] = len.into();
    let outcomes = run_trials(args.common.workers, trials, |t| {
        let world = OracleWorld::sample(params, variant, derive_seed(seed, "world", t))?;
        let o = world.public();
        let mut rng = trial_rng(seed, "commit-attack", t);
        let (c, mut state) = attack_b1(len, &o, &mut rng)?;
        let m: Vec<bool> = (0..len).map(|_| rng.bit()).collect();
        let exact: f64 = attack_b2_exact(&m, &state, &o)?.iter().product();
        let opened = attack_b2(&m, &mut state, &o, &mut rng)?.opening();
        let verified = opened.as_ref().is_some_and(|u| verify(&c, &m, u, &o));
        Ok((verified, opened.is_some() && !verified, exact, world.w0_reads() + world.oe_calls()))
    })?;
    let successes: Vec<bool> = outcomes.iter().map(|o| o.0).collect();
    let rejected = outcomes.iter().filter(|o| o.1).count() as u64;
    let exact: Vec<f64> = outcomes.iter().map(|o| o.2).collect();
    let secret_reads: u64 = outcomes.iter().map(|o| o.3).sum();
    let est = RateEstimate::from_outcomes(&successes);
    let exact_rate = ExactRate::from_probabilities(&exact);
    let x = params.x_size() as u64;
    let tail = p_fraction_tail(x, x / 2, params.k() as u64, 1.0 / 3.0);
    let lower = 1.0 - len as f64 * (2f64.powi(-(params.l_com as i32)) + tail);
    let mut rows = vec![
        rate_matches_exact(EXPERIMENT, &echo, "open", &est, &exact_rate),
        rate_at_least(EXPERIMENT, &echo, "open", &est, args.threshold),
        ReportRow::check(EXPERIMENT, &echo, "open_exact_mean", exact_rate.mean, Relation::AtLeast, args.threshold, 0.0),
        ReportRow::check(
            EXPERIMENT,
            &echo,
            "open_exact_mean_vs_union_bound",
            exact_rate.mean,
            Relation::AtLeast,
            lower,
            0.0,
        ),
        zero_count(EXPERIMENT, &echo, "openings_rejected_by_verifier", rejected),
        zero_count(EXPERIMENT, &echo, "secret_accesses", secret_reads),
    ];
    if params.l_rand() <= HIDING_MAX_RAND_BITS {
        let distance = hiding_distance_exact(params)?;
        rows.push(ReportRow::check(
            EXPERIMENT,
            &echo,
            "hiding_distance",
            distance,
            Relation::AtMost,
            hiding_bound(params),
            0.0,
        ));
    }
    Ok(rows)
}
