//! Functions with at most `s` distinct outputs, each marginally distributed as a target law.

use std::collections::{BTreeSet, HashMap};

use pickone_core::rng::{key_bytes, keyed_rng};
use pickone_core::{Error, RandomSource, Result};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, RngCore};

/// `G(z) = y_{i_z}` with `y_1…y_s ← D_Y` and `i_z` uniform, sampled lazily per `z`.
#[derive(Clone, Debug)]
pub struct SmallRangeFunction {
    s: usize,
    values: Vec<usize>,
    seed: u64,
    index_map: HashMap<u64, usize>,
}

pub fn small_range_sample(s: usize, dist: &[f64], rng: &mut RandomSource) -> Result<SmallRangeFunction> {
    if s == 0 {
        return Err(Error::Params("image budget must be at least 1".into()));
    }
    let law = WeightedIndex::new(dist).map_err(|e| Error::Params(format!("invalid distribution: {e}")))?;
    let values = (0..s).map(|_| law.sample(rng)).collect();
    Ok(SmallRangeFunction { s, values, seed: rng.next_u64(), index_map: HashMap::new() })
}

impl SmallRangeFunction {
    pub fn budget(&self) -> usize {
        self.s
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn eval(&mut self, z: u64) -> usize {
        let (s, seed) = (self.s, self.seed);
        let i = *self.index_map.entry(z).or_insert_with(|| keyed_rng(seed, "G", &key_bytes(&[z])).random_range(0..s));
        self.values[i]
    }

    /// Distinct outputs among the sampled values.
    pub fn image(&self) -> BTreeSet<usize> {
        self.values.iter().copied().collect()
    }

    pub fn evaluated(&self) -> usize {
        self.index_map.len()
    }
}
