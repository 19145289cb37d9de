//! Oracle world, pick-one search, commitments and protocol attacks over a dense
//! statevector kernel.
//!
//! The world hides one k-subset `S_y` per `y` behind membership, reflection and
//! state-creation oracles. One copy of `|ΣΨ⟩` lets an adversary find one element of some
//! `S_y` with any chosen property, which breaks binding and soundness of the schemes here,
//! while finding two elements of the same `S_y` stays hard.

pub mod commitment;
pub mod error;
pub mod pickone;
pub mod protocol;
pub mod report;
pub mod rng;
pub mod sim;
pub mod stats;
pub mod world;

pub use error::{Error, Result};
pub use rng::RandomSource;
pub use sim::{AmplitudeVector, MeasurementOutcome, C64};
