//! `sigma-attack`, `fs-attack` and `fischlin-attack`.

use pickone_core::commitment::{commit, message_bits};
use pickone_core::protocol::fiat_shamir::fs_attack;
use pickone_core::protocol::fischlin::{fischlin_attack, fischlin_success_bound, FischlinParams};
use pickone_core::protocol::oracle::RandomOracle;
use pickone_core::protocol::sigma::{
    naive_extract, naive_extract_exact, sigma_attack, sigma_extract, sigma_verify, ComStar, ExtractorBudget, RespStar,
};
use pickone_core::protocol::total_break_metrics;
use pickone_core::report::{ExactRate, RateEstimate};
use pickone_core::world::{OracleWorld, Variant, WorldParams};
use pickone_core::RandomSource;

use crate::args::{FischlinArgs, FsArgs, SigmaArgs};
use crate::checks::{rate_at_least, rate_at_most, rate_matches_exact, with_trials, zero_count};
use crate::report::{Relation, ReportRow};
use crate::trials::{derive_seed, mean_std_error, rate_sigma, run_trials, trial_rng};

struct SigmaTrial {
    accepted: bool,
    exact: f64,
    transcript: (bool, usize, usize),
    attack_secret_accesses: u64,
    extracted: bool,
    extractor_exact: f64,
}

pub fn run_sigma(args: &SigmaArgs) -> anyhow::Result<Vec<ReportRow>> {
    const EXPERIMENT: &str = "sigma-attack";
    let seed = args.common.seed;
    let trials = args.common.trials_or(1000);
    let params = args.world.params()?;
    let variant = Variant::from(args.world.variant);
    let budget = ExtractorBudget { q_v: args.q_v, q_s: args.q_s };
    let mut echo = with_trials(args.world.echo(), trials);
    echo["q_v"] = args.q_v.into();
    echo["q_s"] = args.q_s.into();

    let attack = |t: u64, variant: Variant| -> anyhow::Result<SigmaTrial> {
        let world = OracleWorld::sample(params, variant, derive_seed(seed, "world", t))?;
        let run = sigma_attack(&world.public(), &mut trial_rng(seed, "sigma-attack", t))?;
        let attack_secret_accesses = world.w0_reads() + world.oe_calls();
        let com = run.com_star.com;
        let resp = run.resp_star.as_ref().map_or(0, |rs| rs.resp);
        let mut rng = trial_rng(seed, "sigma-extract", t);
        let out = naive_extract(com, run.ch, resp, budget, &world.extractor(), &mut rng);
        let extracted = out.is_some_and(|w| world.oracle_r(world.s0(), w));
        let member = world.oracle_v(com, params.pack(run.ch, resp));
        let extractor_exact = match variant {
            Variant::Statistical => naive_extract_exact(member, params.k(), params.x_size(), args.q_v),
            Variant::Computational => 0.0,
        };
        Ok(SigmaTrial {
            accepted: run.accepted,
            exact: run.exact_success,
            transcript: (run.accepted, run.ch, com),
            attack_secret_accesses,
            extracted,
            extractor_exact,
        })
    };
    let runs = run_trials(args.common.workers, trials, |t| attack(t, variant))?;
    let accepted: Vec<bool> = runs.iter().map(|r| r.accepted).collect();
    let extracted: Vec<bool> = runs.iter().map(|r| r.extracted).collect();
    let report = total_break_metrics(&accepted, &extracted, variant, echo.clone());
    let adv = report.adversary_success_rate;
    let ext = report.extractor_success_rate.expect("paired report");
    let adv_exact = ExactRate::from_probabilities(&runs.iter().map(|r| r.exact).collect::<Vec<_>>());
    let mut rows = vec![
        rate_matches_exact(EXPERIMENT, &echo, "adversary", &adv, &adv_exact),
        rate_at_least(EXPERIMENT, &echo, "adversary", &adv, args.adversary_threshold),
        ReportRow::check(
            EXPERIMENT,
            &echo,
            "adversary_exact_mean",
            adv_exact.mean,
            Relation::AtLeast,
            args.adversary_threshold,
            0.0,
        ),
        zero_count(EXPERIMENT, &echo, "attack_secret_accesses", runs.iter().map(|r| r.attack_secret_accesses).sum()),
    ];
    if args.q_s == 0 {
        let ext_exact = ExactRate::from_probabilities(&runs.iter().map(|r| r.extractor_exact).collect::<Vec<_>>());
        rows.push(rate_matches_exact(EXPERIMENT, &echo, "extractor", &ext, &ext_exact));
        rows.push(ReportRow::check(
            EXPERIMENT,
            &echo,
            "extractor_exact_mean",
            ext_exact.mean,
            Relation::AtMost,
            args.extractor_threshold,
            0.0,
        ));
    }
    rows.push(rate_at_most(EXPERIMENT, &echo, "extractor", &ext, args.extractor_threshold));
    let class = report.break_class.expect("paired report");
    rows.push(ReportRow::report(EXPERIMENT, &echo, "break_class", adv.rate, ext.rate).with_detail(class));

    match variant {
        Variant::Computational => {
            let reference = run_trials(args.common.workers, trials, |t| attack(t, Variant::Statistical))?;
            let differing = runs.iter().zip(&reference).filter(|(a, b)| a.transcript != b.transcript).count() as u64;
            rows.push(zero_count(EXPERIMENT, &echo, "runs_differing_from_statistical_variant", differing));
        }
        Variant::Statistical => rows.push(special_soundness(args)?),
    }
    Ok(rows)
}

/// Extraction from every pair of accepting transcripts that share `com` and differ in `ch`.
fn special_soundness(args: &SigmaArgs) -> anyhow::Result<ReportRow> {
    const EXPERIMENT: &str = "sigma-special-soundness";
    let seed = args.common.seed;
    let params = WorldParams::new(args.soundness_l_com, args.soundness_l_ch, args.soundness_l_resp)?;
    let echo = serde_json::json!({
        "l_com": params.l_com, "l_ch": params.l_ch, "l_resp": params.l_resp, "worlds": args.soundness_worlds,
    });
    if params.x_size() > 1 << 8 {
        return Ok(ReportRow::error(
            EXPERIMENT,
            &echo,
            "extraction_fraction",
            "exhaustive pair enumeration limited to 2^8 elements",
        ));
    }
    let (mut pairs, mut extracted) = (0u64, 0u64);
    let mut index = 0u64;
    for w in 0..args.soundness_worlds {
        // A zero witness is indistinguishable from a failed extraction.
        let world = loop {
            let candidate =
                OracleWorld::sample(params, Variant::Statistical, derive_seed(seed, "soundness-world", index))?;
            index += 1;
            if candidate.w0() != 0 {
                break candidate;
            }
        };
        let mut rng = trial_rng(seed, "soundness", w);
        let o = world.public();
        let transcript = |com: usize, ch: usize, resp: usize, rng: &mut RandomSource| {
            let mut commitments = Vec::with_capacity(params.challenges());
            let mut opening = None;
            for c in 0..params.challenges() {
                let (cm, u) = commit(&message_bits(if c == ch { resp } else { 0 }, params.l_resp), &o, rng);
                if c == ch {
                    opening = Some(u);
                }
                commitments.push(cm);
            }
            (ComStar { com, commitments }, RespStar { resp, opening: opening.expect("challenge slot") })
        };
        for com in 0..params.y_size() {
            let members: Vec<(usize, usize)> = world.instance().set(com).iter().map(|&x| params.unpack(x)).collect();
            for &(c1, r1) in &members {
                for &(c2, r2) in members.iter().filter(|&&(c2, _)| c2 != c1) {
                    let (cs, rs1) = transcript(com, c1, r1, &mut rng);
                    let (_, rs2) = transcript(com, c2, r2, &mut rng);
                    if !sigma_verify(world.s0(), &cs, c1, &rs1, &o) {
                        continue;
                    }
                    pairs += 1;
                    let out = sigma_extract(world.s0(), &cs, c1, &rs1, c2, &rs2, &world.extractor());
                    extracted += u64::from(out == Some(world.w0()));
                }
            }
        }
    }
    let fraction = if pairs == 0 { 0.0 } else { extracted as f64 / pairs as f64 };
    Ok(ReportRow::check(EXPERIMENT, &echo, "extraction_fraction", fraction, Relation::Within, 1.0, 0.0)
        .with_detail(format!("pairs={pairs} extracted={extracted}")))
}

pub fn run_fs(args: &FsArgs) -> anyhow::Result<Vec<ReportRow>> {
    const EXPERIMENT: &str = "fs-attack";
    let seed = args.common.seed;
    let trials = args.common.trials_or(300);
    let params = args.world.params()?;
    let variant = Variant::from(args.world.variant);
    let r = args.r;
    let mut echo = with_trials(args.world.echo(), trials);
    echo["r"] = r.into();
    let runs = run_trials(args.common.workers, trials, |t| {
        let world = OracleWorld::sample(params, variant, derive_seed(seed, "world", t))?;
        let single = sigma_attack(&world.public(), &mut trial_rng(seed, "fs-single", t))?;
        let h = RandomOracle::new(r as u32 * params.l_ch, derive_seed(seed, "fs-oracle", t))?;
        let fs = fs_attack(r, &h, &world.public(), &mut trial_rng(seed, "fs-attack", t))?;
        Ok((single.accepted, single.exact_success, fs.accepted, fs.exact_success, world.w0_reads() + world.oe_calls()))
    })?;
    let single_ok: Vec<bool> = runs.iter().map(|x| x.0).collect();
    let single_exact: Vec<f64> = runs.iter().map(|x| x.1).collect();
    let fs_ok: Vec<bool> = runs.iter().map(|x| x.2).collect();
    let fs_exact: Vec<f64> = runs.iter().map(|x| x.3).collect();
    let single = RateEstimate::from_outcomes(&single_ok);
    let fs = RateEstimate::from_outcomes(&fs_ok);
    let (e1, er) = (ExactRate::from_probabilities(&single_exact), ExactRate::from_probabilities(&fs_exact));
    let rf = r as f64;
    let measured_tol = 3.0 * rate_sigma(&er, trials);
    let exact_tol = 3.0 * (rf * mean_std_error(&single_exact) + mean_std_error(&fs_exact));
    Ok(vec![
        rate_matches_exact(EXPERIMENT, &echo, "single_run_accept", &single, &e1),
        rate_matches_exact(EXPERIMENT, &echo, "fs_accept", &fs, &er),
        ReportRow::check(
            EXPERIMENT,
            &echo,
            "fs_failure_vs_r_single_failure",
            1.0 - fs.rate,
            Relation::AtMost,
            rf * (1.0 - single.rate),
            measured_tol,
        )
        .with_detail(format!("single_failure={}", 1.0 - single.rate)),
        ReportRow::check(
            EXPERIMENT,
            &echo,
            "fs_exact_failure_vs_r_single_exact_failure",
            1.0 - er.mean,
            Relation::AtMost,
            rf * (1.0 - e1.mean),
            exact_tol,
        ),
        zero_count(EXPERIMENT, &echo, "secret_accesses", runs.iter().map(|x| x.4).sum()),
    ])
}

pub fn run_fischlin(args: &FischlinArgs) -> anyhow::Result<Vec<ReportRow>> {
    const EXPERIMENT: &str = "fischlin-attack";
    let seed = args.common.seed;
    let trials = args.common.trials_or(200);
    let params = args.world.params()?;
    let variant = Variant::from(args.world.variant);
    let fp = FischlinParams::new(args.b, args.r, args.s_bound, args.t, params)?;
    let mut echo = with_trials(args.world.echo(), trials);
    for (key, value) in [("b", u64::from(args.b)), ("r", args.r as u64), ("S", args.s_bound), ("t", u64::from(args.t))]
    {
        echo[key] = value.into();
    }
    let bound = fischlin_success_bound(params, &fp)?;
    let runs = run_trials(args.common.workers, trials, |t| {
        let world = OracleWorld::sample(params, variant, derive_seed(seed, "world", t))?;
        let h = RandomOracle::new(fp.b, derive_seed(seed, "fischlin-oracle", t))?;
        let run = fischlin_attack(&fp, &h, &world.public(), &mut trial_rng(seed, "fischlin-attack", t))?;
        let bad_sum = run.accepted && run.hash_sum != Some(0);
        Ok((run.accepted, run.exact_success, bad_sum, world.w0_reads() + world.oe_calls()))
    })?;
    let accepted: Vec<bool> = runs.iter().map(|x| x.0).collect();
    let est = RateEstimate::from_outcomes(&accepted);
    let exact = ExactRate::from_probabilities(&runs.iter().map(|x| x.1).collect::<Vec<_>>());
    Ok(vec![
        rate_matches_exact(EXPERIMENT, &echo, "accept", &est, &exact),
        ReportRow::check(
            EXPERIMENT,
            &echo,
            "accept_rate_vs_bound",
            est.rate,
            Relation::AtLeast,
            bound,
            3.0 * rate_sigma(&exact, trials),
        ),
        rate_at_least(EXPERIMENT, &echo, "accept", &est, bound),
        ReportRow::check(EXPERIMENT, &echo, "accept_exact_mean_vs_bound", exact.mean, Relation::AtLeast, bound, 0.0),
        zero_count(EXPERIMENT, &echo, "accepted_with_nonzero_hash_sum", runs.iter().filter(|x| x.2).count() as u64),
        zero_count(EXPERIMENT, &echo, "secret_accesses", runs.iter().map(|x| x.3).sum()),
    ])
}
