//! The pick-one trick: split `|ΣΨ⟩` into `(y, |Ψ(y)⟩)` and search `S_y` for one element
//! satisfying a predicate with the reflection `O_F(y)`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{AttackReport, ExactRate, RateEstimate};
use crate::rng::RandomSource;
use crate::sim::{apply_phase_predicate, measure_computational, measure_projector, project, AmplitudeVector};
use crate::world::{bit, psi_y, sample_instance, sigma_psi, ReflectionOracle, TwoValuesInstance, TwoValuesParams};

/// Repetition budget `n` (failure target `2^{-n}`) and the promised lower bound on the
/// fraction of `S_y` satisfying the predicate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PickOneConfig {
    pub n: u32,
    pub delta_min: f64,
}

impl PickOneConfig {
    pub fn new(n: u32, delta_min: f64) -> Result<Self> {
        if !(delta_min > 0.0 && delta_min <= 1.0) {
            return Err(Error::Params(format!("delta_min must lie in (0, 1], got {delta_min}")));
        }
        Ok(Self { n, delta_min })
    }

    /// Inner-loop length `⌈log2(π / (2√δ_min))⌉`.
    pub fn rounds(&self) -> u32 {
        (FRAC_PI_2 / self.delta_min.sqrt()).log2().ceil().max(1.0) as u32
    }
}

/// Measures the `Y` register of `|ΣΨ⟩` on `[M, N]` and returns `(y, |Ψ(y)⟩)`.
pub fn e1(sigma_psi_state: &AmplitudeVector, rng: &mut RandomSource) -> Result<(usize, AmplitudeVector)> {
    if sigma_psi_state.registers() != 2 {
        return Err(Error::Shape { expected: vec![0, 0], found: sigma_psi_state.dims().to_vec() });
    }
    let m = measure_computational(sigma_psi_state, 0, rng)?;
    let x_state = m.post_state.condition(0, m.outcome)?;
    Ok((m.outcome, x_state))
}

/// Outcome of one search run.
#[derive(Clone, Debug, PartialEq)]
pub struct E2Run {
    /// The element found, always in `S_y` with `P(x) = 1`.
    pub found: Option<usize>,
    /// `|x⟩` on success, `|no⟩` on failure.
    pub state: AmplitudeVector,
    pub outer_iterations: u32,
    pub measurements: u32,
    pub reflections: u64,
}

fn grover_step<O: ReflectionOracle>(
    oracle: &O,
    y: usize,
    state: &AmplitudeVector,
    predicate: &impl Fn(usize) -> bool,
) -> Result<AmplitudeVector> {
    oracle.reflect(y, &apply_phase_predicate(state, predicate))
}

/// Searches for `x ∈ S_y` with `P(x) = 1`, starting from `|Ψ(y)⟩` or a prior `|no⟩`.
pub fn e2<O: ReflectionOracle>(
    config: PickOneConfig,
    y: usize,
    state: AmplitudeVector,
    predicate: &impl Fn(usize) -> bool,
    oracle: &O,
    rng: &mut RandomSource,
) -> Result<E2Run> {
    let mut st = state;
    let (mut measurements, mut reflections) = (0u32, 0u64);
    for i in 1..=config.n + 1 {
        for j in 1..=config.rounds() {
            for _ in 0..1u64 << (j - 1) {
                st = grover_step(oracle, y, &st, predicate)?;
                reflections += 1;
            }
            let m = measure_projector(&st, predicate, rng)?;
            measurements += 1;
            st = m.post_state;
            if m.outcome == 1 {
                let x = measure_computational(&st, 0, rng)?;
                return Ok(E2Run {
                    found: Some(x.outcome),
                    state: x.post_state,
                    outer_iterations: i,
                    measurements,
                    reflections,
                });
            }
        }
    }
    Ok(E2Run { found: None, state: st, outer_iterations: config.n + 1, measurements, reflections })
}

/// Exact success probability of [`e2`] from an arbitrary starting state, by following
/// both branches of every projective measurement.
pub fn e2_exact_from<O: ReflectionOracle>(
    config: PickOneConfig,
    y: usize,
    state: &AmplitudeVector,
    predicate: &impl Fn(usize) -> bool,
    oracle: &O,
) -> Result<f64> {
    let mut st = state.clone();
    let (mut reach, mut success) = (1.0f64, 0.0f64);
    for _ in 0..=config.n {
        for j in 1..=config.rounds() {
            for _ in 0..1u64 << (j - 1) {
                st = grover_step(oracle, y, &st, predicate)?;
            }
            let no = match project(&st, predicate, false) {
                Ok(no) => no,
                Err(Error::EmptyBranch) => return Ok(success + reach),
                Err(e) => return Err(e),
            };
            match project(&st, predicate, true) {
                Ok(yes) => success += reach * yes.probability,
                Err(Error::EmptyBranch) => {}
                Err(e) => return Err(e),
            }
            reach *= no.probability;
            st = no.post_state;
        }
    }
    Ok(success)
}

/// Exact success probability of [`e2`] started on `|Ψ(y)⟩`.
pub fn e2_exact_success(
    config: PickOneConfig,
    instance: &TwoValuesInstance,
    y: usize,
    predicate: &impl Fn(usize) -> bool,
) -> Result<f64> {
    e2_exact_from(config, y, &psi_y(instance, y)?, predicate, instance)
}

/// The documented naive collision strategies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollisionStrategy {
    /// Measure `|Ψ(y)⟩` to get `x1`, then guess `q` uniform elements of `X` and test them with `O_V`.
    MeasureThenGuess,
    /// Measure `|Ψ(y)⟩` to get `x1`, then `q` times reflect `|x1⟩` with `O_F(y)` and measure.
    MeasureThenGroverResidual,
    /// Search with the predicate "lowest bit 0", then search the residual state with its complement.
    DoubleE2DisjointPredicates,
}

impl CollisionStrategy {
    pub const ALL: [CollisionStrategy; 3] = [
        CollisionStrategy::MeasureThenGuess,
        CollisionStrategy::MeasureThenGroverResidual,
        CollisionStrategy::DoubleE2DisjointPredicates,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CollisionStrategy::MeasureThenGuess => "measure-then-guess",
            CollisionStrategy::MeasureThenGroverResidual => "measure-then-grover-residual",
            CollisionStrategy::DoubleE2DisjointPredicates => "double-e2-disjoint-predicates",
        }
    }
}

/// One collision attempt: whether distinct `x1, x2 ∈ S_y` were produced, and the exact
/// success probability of the strategy on this instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollisionTrial {
    pub success: bool,
    pub exact: f64,
}

fn double_e2_config(q: u32) -> PickOneConfig {
    PickOneConfig { n: q, delta_min: 1.0 / 3.0 }
}

/// Runs one strategy on a given instance, spending the single `|ΣΨ⟩` copy.
pub fn collision_trial(
    strategy: CollisionStrategy,
    instance: &TwoValuesInstance,
    q_budget: u32,
    rng: &mut RandomSource,
) -> Result<CollisionTrial> {
    let TwoValuesParams { n, k, .. } = instance.params();
    let (y, psi) = e1(&sigma_psi(instance), rng)?;
    match strategy {
        CollisionStrategy::MeasureThenGuess => {
            let x1 = measure_computational(&psi, 0, rng)?.outcome;
            let mut success = false;
            for _ in 0..q_budget {
                let x2 = rng.index(n);
                success |= x2 != x1 && instance.contains(y, x2);
            }
            let p = (k - 1) as f64 / n as f64;
            Ok(CollisionTrial { success, exact: 1.0 - (1.0 - p).powi(q_budget as i32) })
        }
        CollisionStrategy::MeasureThenGroverResidual => {
            let x1 = measure_computational(&psi, 0, rng)?.outcome;
            let start = AmplitudeVector::basis(&[n], x1)?;
            let mut success = false;
            for _ in 0..q_budget {
                let reflected = instance.reflect(y, &start)?;
                let x2 = measure_computational(&reflected, 0, rng)?.outcome;
                success |= x2 != x1 && instance.contains(y, x2);
            }
            let p = 4.0 * (k - 1) as f64 / (k * k) as f64;
            Ok(CollisionTrial { success, exact: 1.0 - (1.0 - p).powi(q_budget as i32) })
        }
        CollisionStrategy::DoubleE2DisjointPredicates => {
            let config = double_e2_config(q_budget);
            let p1 = |x: usize| !bit(x, 1);
            let p2 = |x: usize| bit(x, 1);
            let first = e2(config, y, psi.clone(), &p1, instance, rng)?;
            let success = match first.found {
                Some(x1) => {
                    let second = e2(config, y, first.state, &p2, instance, rng)?;
                    second.found.is_some_and(|x2| x2 != x1 && instance.contains(y, x2))
                }
                None => false,
            };
            let exact = double_e2_exact(instance, y, q_budget)?;
            Ok(CollisionTrial { success, exact })
        }
    }
}

/// Exact success probability of the double-search strategy for a fixed `y`.
fn double_e2_exact(instance: &TwoValuesInstance, y: usize, q: u32) -> Result<f64> {
    let config = double_e2_config(q);
    let n = instance.params().n;
    let p1 = |x: usize| !bit(x, 1);
    let p2 = |x: usize| bit(x, 1);
    let first = e2_exact_success(config, instance, y, &p1)?;
    let hits: Vec<usize> = instance.set(y).iter().copied().filter(|&x| p1(x)).collect();
    if hits.is_empty() {
        return Ok(0.0);
    }
    let mut second = 0.0;
    for &x1 in &hits {
        second += e2_exact_from(config, y, &AmplitudeVector::basis(&[n], x1)?, &p2, instance)?;
    }
    Ok(first * second / hits.len() as f64)
}

/// Collision rate of a strategy over fresh instances, with the exact per-instance rate.
pub fn collision_experiment(
    strategy: CollisionStrategy,
    params: TwoValuesParams,
    q_budget: u32,
    trials: u64,
    seed: u64,
) -> Result<AttackReport> {
    let mut outcomes = Vec::with_capacity(trials as usize);
    let mut exact = Vec::with_capacity(trials as usize);
    for t in 0..trials {
        let mut rng = RandomSource::for_trial(seed, t);
        let instance = sample_instance(params, &mut rng)?;
        let trial = collision_trial(strategy, &instance, q_budget, &mut rng)?;
        outcomes.push(trial.success);
        exact.push(trial.exact);
    }
    Ok(AttackReport {
        adversary_success_rate: RateEstimate::from_outcomes(&outcomes),
        extractor_success_rate: None,
        exact_adversary_rate: Some(ExactRate::from_probabilities(&exact)),
        break_class: None,
        trials,
        params: serde_json::json!({
            "strategy": strategy.name(),
            "M": params.m,
            "N": params.n,
            "k": params.k,
            "q_budget": q_budget,
        }),
    })
}
