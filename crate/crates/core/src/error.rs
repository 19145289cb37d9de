//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures reported by the simulation kernel, the oracle world and the protocols.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    Shape { expected: Vec<usize>, found: Vec<usize> },
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("requested measurement branch has zero probability")]
    EmptyBranch,
    #[error("register index {index} out of range for {registers} registers")]
    Register { index: usize, registers: usize },
    #[error("value {value} out of range (limit {limit})")]
    OutOfRange { value: u64, limit: u64 },
    #[error("distributions have different supports ({0} vs {1})")]
    Support(usize, usize),
    #[error("distribution does not sum to one (sum {0})")]
    NotDistribution(f64),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
