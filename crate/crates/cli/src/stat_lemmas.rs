//! `stat-lemmas`: exact statistical distances and tails on small grids against their bounds.

use pickone_core::report::{ExactRate, RateEstimate};
use pickone_core::stats::{
    empirical_bounds, empirical_sd_exact, grover_dist_bound, grover_dist_classical, p_fraction_bound, p_fraction_tail,
    pick_dep_bound, pick_dep_sd_exact, slsb_bound, slsb_sd_exact,
};

use crate::args::StatArgs;
use crate::checks::rate_matches_exact;
use crate::report::{Relation, ReportRow};
use crate::trials::{run_trials, trial_rng};

const EXPERIMENT: &str = "stat-lemmas";

/// Largest enumerated space.
pub const MAX_X_BITS: u32 = 10;

const FLOAT_TOL: f64 = 1e-12;

/// Worst `exact − bound` over a grid, with the point where it occurs.
struct Sweep {
    worst: f64,
    at: String,
    points: usize,
}

impl Sweep {
    fn new() -> Self {
        Self { worst: f64::NEG_INFINITY, at: String::new(), points: 0 }
    }

    fn add(&mut self, exact: f64, bound: f64, at: impl FnOnce() -> String) {
        self.points += 1;
        if exact - bound > self.worst {
            self.worst = exact - bound;
            self.at = at();
        }
    }

    fn row(&self, lemma: &str, echo: &serde_json::Value) -> ReportRow {
        ReportRow::check(
            EXPERIMENT,
            echo,
            &format!("{lemma}_max_excess_over_bound"),
            self.worst,
            Relation::AtMost,
            0.0,
            FLOAT_TOL,
        )
        .with_detail(format!("points={} worst_at={}", self.points, self.at))
    }
}

fn geometric(len: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..len).map(|i| 0.5f64.powi(i as i32 + 1)).collect();
    let total: f64 = w.iter().sum();
    w.iter().map(|p| p / total).collect()
}

pub fn run(args: &StatArgs) -> anyhow::Result<Vec<ReportRow>> {
    let bits = args.max_x_bits;
    let echo = serde_json::json!({ "max_x_bits": bits });
    if !(2..=MAX_X_BITS).contains(&bits) {
        return Ok(vec![ReportRow::error(EXPERIMENT, &echo, "grid", format!("need 2 ≤ max_x_bits ≤ {MAX_X_BITS}"))]);
    }
    let mut rows = Vec::new();

    // empirical: oracle O : X → Y with i.i.d. D-values versus a fresh D-sample.
    let example = serde_json::json!({ "X": 64, "Y": 4, "D": "uniform" });
    let (_, plain) = empirical_bounds(64, &[0.25; 4]);
    rows.push(ReportRow::check(
        EXPERIMENT,
        &example,
        "empirical_example",
        empirical_sd_exact(64, &[0.25; 4])?,
        Relation::AtMost,
        plain,
        0.0,
    ));
    let (mut plain_sweep, mut renyi_sweep) = (Sweep::new(), Sweep::new());
    for xb in 1..=bits {
        let x = 1u64 << xb;
        for yb in 0..=xb.min(4) {
            let y = 1usize << yb;
            for (name, dist) in [("uniform", vec![1.0 / y as f64; y]), ("geometric", geometric(y))] {
                let exact = empirical_sd_exact(x, &dist)?;
                let (renyi, plain) = empirical_bounds(x, &dist);
                renyi_sweep.add(exact, renyi, || format!("X={x},Y={y},D={name}"));
                if name == "uniform" {
                    plain_sweep.add(exact, plain, || format!("X={x},Y={y}"));
                }
            }
        }
    }
    rows.push(plain_sweep.row("empirical_support", &echo));
    rows.push(renyi_sweep.row("empirical_renyi", &echo));

    // s.lsb: one bit of a uniform element of a random k-subset.
    rows.push(ReportRow::check(
        EXPERIMENT,
        &serde_json::json!({ "ell": 5, "k": 32 }),
        "slsb_full_set",
        slsb_sd_exact(5, 32)?,
        Relation::Within,
        0.0,
        0.0,
    ));
    let mut slsb = Sweep::new();
    for ell in 1..=bits {
        for kb in 0..=ell {
            let k = 1u64 << kb;
            slsb.add(slsb_sd_exact(ell, k)?, slsb_bound(k), || format!("ell={ell},k={k}"));
        }
        for k in [3u64, 5, 7].into_iter().filter(|&k| k <= 1 << ell) {
            slsb.add(slsb_sd_exact(ell, k)?, slsb_bound(k), || format!("ell={ell},k={k}"));
        }
    }
    rows.push(slsb.row("slsb", &echo));

    // pick.dep: the challenge half of a uniform element of a random k-subset of C × R.
    let mut pick = Sweep::new();
    for lc in 0..=3u32.min(bits) {
        for lr in 0..=bits - lc {
            let (c, r) = (1u64 << lc, 1u64 << lr);
            for kb in 0..=lc + lr {
                let k = 1u64 << kb;
                pick.add(pick_dep_sd_exact(c, r, k)?, pick_dep_bound(c, r, k), || format!("C={c},R={r},k={k}"));
            }
        }
    }
    rows.push(pick.row("pick_dep", &echo));

    // p.fraction: fewer than δ_min·k marked elements in a random k-subset.
    let example = serde_json::json!({ "N": 256, "k": 16, "phi": 0.5, "delta_min": 1.0 / 3.0 });
    rows.push(ReportRow::check(
        EXPERIMENT,
        &example,
        "p_fraction_example",
        p_fraction_tail(256, 128, 16, 1.0 / 3.0),
        Relation::AtMost,
        p_fraction_bound(16, 0.5, 1.0 / 3.0),
        0.0,
    ));
    let mut tail = Sweep::new();
    for nb in 4..=bits {
        let n = 1u64 << nb;
        for kb in 1..nb {
            let k = 1u64 << kb;
            for (pn, pd) in [(1u64, 4u64), (1, 2), (3, 4)] {
                let marked = n * pn / pd;
                let phi = marked as f64 / n as f64;
                for delta_min in [1.0 / 8.0, 1.0 / 3.0, 0.5].into_iter().filter(|&d| d < phi) {
                    tail.add(p_fraction_tail(n, marked, k, delta_min), p_fraction_bound(k, phi, delta_min), || {
                        format!("N={n},k={k},phi={phi},delta_min={delta_min}")
                    });
                }
            }
        }
    }
    rows.push(tail.row("p_fraction", &echo));

    // grover.dist: classical distinguishers only.
    let mut grover = Sweep::new();
    for q in [1u32, 2, 5, 10, 20, 100] {
        for gamma in [1e-6, 1e-4, 1e-3, 1e-2, 0.1, 0.5] {
            grover.add(grover_dist_classical(gamma, q), grover_dist_bound(gamma, q), || format!("gamma={gamma},q={q}"));
        }
    }
    rows.push(grover.row("grover_dist_classical", &echo));
    rows.push(ReportRow::check(
        EXPERIMENT,
        &serde_json::json!({ "gamma": 0.0, "q": 100 }),
        "grover_dist_zero_measure",
        grover_dist_classical(0.0, 100),
        Relation::Within,
        0.0,
        0.0,
    ));
    let trials = args.common.trials_or(20_000);
    let (gamma, q) = (0.05, 10u32);
    let seen = run_trials(args.common.workers, trials, |t| {
        let mut rng = trial_rng(args.common.seed, "grover-dist", t);
        Ok((0..q).any(|_| rng.unit() < gamma))
    })?;
    let est = RateEstimate::from_outcomes(&seen);
    let p = grover_dist_classical(gamma, q);
    let exact = ExactRate { mean: p, sigma: (p * (1.0 - p) / trials as f64).sqrt() };
    rows.push(rate_matches_exact(
        EXPERIMENT,
        &serde_json::json!({ "gamma": gamma, "q": q, "trials": trials }),
        "grover_dist_classical_simulated",
        &est,
        &exact,
    ));
    Ok(rows)
}
