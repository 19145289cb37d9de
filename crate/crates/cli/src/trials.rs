//! Deterministic trial scheduling and seed derivation.

use rand::RngCore;
use rayon::prelude::*;

use pickone_core::report::ExactRate;
use pickone_core::rng::{key_bytes, keyed_rng};
use pickone_core::RandomSource;

/// Runs `f(0..trials)` on `workers` threads and returns the results in trial order.
pub fn run_trials<T, F>(workers: usize, trials: u64, f: F) -> anyhow::Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> anyhow::Result<T> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
    pool.install(|| (0..trials).into_par_iter().map(&f).collect())
}

/// Seed for trial `index` of a named stream, by keyed expansion of the master seed.
pub fn derive_seed(seed: u64, domain: &str, index: u64) -> u64 {
    keyed_rng(seed, domain, &key_bytes(&[index])).next_u64()
}

/// Randomness for trial `index` of a named stream.
pub fn trial_rng(seed: u64, domain: &str, index: u64) -> RandomSource {
    RandomSource::for_trial(derive_seed(seed, domain, 0), index)
}

/// Standard deviation of a Monte-Carlo rate around its exact mean, floored at one trial's
/// resolution `1/trials`.
pub fn rate_sigma(exact: &ExactRate, trials: u64) -> f64 {
    exact.sigma.max(1.0 / trials.max(1) as f64)
}

/// Standard error of the mean of per-trial probabilities.
pub fn mean_std_error(p: &[f64]) -> f64 {
    let n = p.len();
    if n < 2 {
        return 0.0;
    }
    let mean = p.iter().sum::<f64>() / n as f64;
    (p.iter().map(|q| (q - mean).powi(2)).sum::<f64>() / (n * (n - 1)) as f64).sqrt()
}
