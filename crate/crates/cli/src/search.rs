//! `pickone`: the one-element search, its rotation identity and the naive collision strategies.

use pickone_core::pickone::{collision_experiment, e2, e2_exact_success, CollisionStrategy, PickOneConfig};
use pickone_core::report::{ExactRate, RateEstimate};
use pickone_core::sim::apply_phase_predicate;
use pickone_core::world::{psi_y, sample_instance, ReflectionOracle, TwoValuesInstance, TwoValuesParams};
use pickone_core::{AmplitudeVector, RandomSource, C64};

use crate::args::PickoneArgs;
use crate::checks::{rate_at_least, rate_matches_exact, with_trials, zero_count};
use crate::report::{Relation, ReportRow};
use crate::trials::{derive_seed, run_trials, trial_rng};

const EXPERIMENT: &str = "pickone";

/// An instance with a chosen subset `y` and a predicate table.
struct Marked {
    instance: TwoValuesInstance,
    y: usize,
    table: Vec<bool>,
}

/// Marks `count` elements of `S_y` in random order and a random half of everything outside it.
fn mark(instance: TwoValuesInstance, y: usize, count: usize, rng: &mut RandomSource) -> Marked {
    let mut set = instance.set(y).to_vec();
    for i in (1..set.len()).rev() {
        set.swap(i, rng.index(i + 1));
    }
    let mut table = vec![false; instance.params().n];
    for &x in &set[..count] {
        table[x] = true;
    }
    for (x, t) in table.iter_mut().enumerate() {
        if !instance.contains(y, x) {
            *t = rng.bit();
        }
    }
    Marked { instance, y, table }
}

/// `sin β |yes⟩ + cos β |no⟩` for the split of `S_y` by the predicate.
fn rotated(m: &Marked, beta: f64) -> anyhow::Result<AmplitudeVector> {
    let set = m.instance.set(m.y);
    let yes = set.iter().filter(|&&x| m.table[x]).count() as f64;
    let no = set.len() as f64 - yes;
    let mut amps = vec![C64::new(0.0, 0.0); m.instance.params().n];
    for &x in set {
        amps[x] =
            if m.table[x] { C64::new(beta.sin() / yes.sqrt(), 0.0) } else { C64::new(beta.cos() / no.sqrt(), 0.0) };
    }
    Ok(AmplitudeVector::new(vec![m.instance.params().n], amps)?)
}

/// Largest amplitude error of `2^{j−1}` search steps against the rotation by `2^j γ`, over `j ≤ max_j`.
fn rotation_error(m: &Marked, beta: f64, max_j: u32) -> anyhow::Result<f64> {
    let k = m.instance.params().k as f64;
    let count = m.instance.set(m.y).iter().filter(|&&x| m.table[x]).count() as f64;
    let gamma = (count / k).sqrt().asin();
    let mut worst = 0.0f64;
    for j in 1..=max_j {
        let mut st = rotated(m, beta)?;
        for _ in 0..1u64 << (j - 1) {
            st = m.instance.reflect(m.y, &apply_phase_predicate(&st, |x| m.table[x]))?;
        }
        // Each step is the rotation by 2γ up to a global sign.
        let sign = if (1u64 << (j - 1)) % 2 == 1 { -1.0 } else { 1.0 };
        let target = rotated(m, beta + 2f64.powi(j as i32) * gamma)?;
        let err = st.amps().iter().zip(target.amps()).map(|(a, b)| (a - sign * b).norm()).fold(0.0, f64::max);
        worst = worst.max(err);
    }
    Ok(worst)
}

pub fn run(args: &PickoneArgs) -> anyhow::Result<Vec<ReportRow>> {
    let seed = args.common.seed;
    let trials = args.common.trials_or(10_000);
    let workers = args.common.workers;
    let params = TwoValuesParams::new(args.y_size, args.x_size, args.k)?;
    let k = params.k;
    let mut rows = Vec::new();
    for (di, &delta_min) in args.delta_min.iter().enumerate() {
        let config = PickOneConfig::new(args.n, delta_min)?;
        let echo = with_trials(
            serde_json::json!({
                "M": params.m, "N": params.n, "k": k, "n": args.n,
                "delta_min": delta_min, "rounds": config.rounds(), "instances": args.instances,
            }),
            trials,
        );
        let least = ((delta_min * k as f64) - 1e-12).ceil().max(1.0) as usize;
        if least > k {
            rows.push(ReportRow::error(
                EXPERIMENT,
                &echo,
                "promise",
                format!("no predicate on {k} elements has fraction ≥ {delta_min}"),
            ));
            continue;
        }
        let domain = format!("pickone-instance-{di}");
        let marked = run_trials(workers, args.instances, |i| {
            let mut rng = trial_rng(seed, &domain, i);
            let instance = sample_instance(params, &mut rng)?;
            let y = rng.index(params.m);
            let count = least + rng.index(k - least + 1);
            let m = mark(instance, y, count, &mut rng);
            let exact = e2_exact_success(config, &m.instance, m.y, &|x: usize| m.table[x])?;
            Ok((m, exact))
        })?;
        let target = 1.0 - 2f64.powi(-(args.n as i32));
        let (worst_i, worst) = marked.iter().enumerate().map(|(i, (_, p))| (i, *p)).fold((0, f64::INFINITY), |a, b| {
            if b.1 < a.1 {
                b
            } else {
                a
            }
        });
        rows.push(
            ReportRow::check(EXPERIMENT, &echo, "min_exact_success", worst, Relation::AtLeast, target, 0.0)
                .with_detail(format!("instance={worst_i}")),
        );
        let mc_domain = format!("pickone-search-{di}");
        let outcomes = run_trials(workers, trials, |t| {
            let (m, exact) = &marked[(t % args.instances.max(1)) as usize];
            let mut rng = trial_rng(seed, &mc_domain, t);
            let run = e2(config, m.y, psi_y(&m.instance, m.y)?, &|x: usize| m.table[x], &m.instance, &mut rng)?;
            let valid = run.found.map(|x| m.instance.contains(m.y, x) && m.table[x]);
            Ok((valid == Some(true), valid == Some(false), *exact))
        })?;
        let successes: Vec<bool> = outcomes.iter().map(|o| o.0).collect();
        let invalid = outcomes.iter().filter(|o| o.1).count() as u64;
        let exact: Vec<f64> = outcomes.iter().map(|o| o.2).collect();
        let est = RateEstimate::from_outcomes(&successes);
        let exact_rate = ExactRate::from_probabilities(&exact);
        rows.push(rate_matches_exact(EXPERIMENT, &echo, "success", &est, &exact_rate));
        rows.push(rate_at_least(EXPERIMENT, &echo, "success", &est, target));
        rows.push(zero_count(EXPERIMENT, &echo, "outputs_outside_subset_or_predicate", invalid));
    }

    let rot_echo =
        serde_json::json!({ "M": params.m, "N": params.n, "k": k, "max_j": args.max_j, "instances": args.instances });
    if k < 2 {
        rows.push(ReportRow::error(EXPERIMENT, &rot_echo, "rotation_max_error", "the rotation check needs k ≥ 2"));
    } else {
        let errors = run_trials(workers, args.instances, |i| {
            let mut rng = trial_rng(seed, "pickone-rotation", i);
            let instance = sample_instance(params, &mut rng)?;
            let y = rng.index(params.m);
            let count = 1 + rng.index(k - 1);
            let m = mark(instance, y, count, &mut rng);
            let beta = rng.unit() * std::f64::consts::TAU;
            rotation_error(&m, beta, args.max_j)
        })?;
        let worst = errors.iter().copied().fold(0.0, f64::max);
        rows.push(ReportRow::check(EXPERIMENT, &rot_echo, "rotation_max_error", worst, Relation::AtMost, 0.0, 1e-7));
    }

    for (si, strategy) in CollisionStrategy::ALL.into_iter().enumerate() {
        let report = collision_experiment(
            strategy,
            params,
            args.q_budget,
            args.collision_trials,
            derive_seed(seed, "pickone-collision", si as u64),
        )?;
        let echo = with_trials(report.params.clone(), args.collision_trials);
        let exact = report.exact_adversary_rate.unwrap_or(ExactRate { mean: 0.0, sigma: 0.0 });
        rows.push(rate_matches_exact(EXPERIMENT, &echo, "collision", &report.adversary_success_rate, &exact));
    }
    Ok(rows)
}
