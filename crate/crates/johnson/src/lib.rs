//! Exact checks of the Johnson-scheme and symmetric-group calculations behind the
//! two-element hardness bound.
//!
//! The scheme lives on `H_I = span{|z⟩ : z ∈ {0,1}^N, |z| = k}` and, tensored with the query
//! register `H_Q = C^N`, carries the representation `U = U_Q ⊗ U_I` of `S_N` whose
//! `(N−1,1)`, `(N−2,2)` and `(N−2,1,1)` components control how much a query can move weight
//! between low and high irreps.

pub mod combinatorics;
pub mod decomposition;
pub mod error;
pub mod identities;
pub mod initial;
pub mod scheme;

pub use decomposition::{decompose, Sector, SubspaceDecomposition};
pub use error::{JohnsonError, Result};
pub use identities::{
    finalbound_ratios, identity_rows, main_trace_dense, main_trace_exact, main_trace_identity, overlap_traces,
    stepbound_condition_traces, sweep_points, FinalBoundRatios, IdentityRow, OverlapTable, PrintedMatch, Relation,
    StepBoundTraces,
};
pub use initial::{initialbound_check, InitialBoundCheck};
pub use scheme::{build_scheme, JohnsonScheme};
