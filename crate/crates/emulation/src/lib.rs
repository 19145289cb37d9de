//! Emulation of the state-creation oracle `O_Ψ` from copies of `|Ψ⟩`.
//!
//! A reservoir `|Ψ⟩^{⊗m} ⊗ |α₁⟩ ⊗ … ⊗ |α_n⟩` lets a controlled cyclic shift trade `|⊥⟩` for
//! `|Ψ⟩` with error about `π/(2√n)` per query, and a reflection about the symmetric subspace of
//! the work register and the `m` copies stands in for `I − 2|Ψ⟩⟨Ψ|` with error `2/√(m+1)`.

pub mod emulator;
pub mod registers;
pub mod reservoir;
pub mod small_range;
pub mod symmetric;

pub use emulator::{
    emulated_o_psi, emulation_bound, o_psi_matrix, random_state, random_unitary, reflection_matrix, run_emulation,
    shift_slack, CopyLayout, EmulationInstance, EmulationOutcome, Emulator, Frame, RefMode,
};
pub use registers::{cyclic_shift, cyclic_shift_inverse};
pub use reservoir::{interpolant, shift_overlap, shift_quality, shift_quality_leading, ReservoirState};
pub use small_range::{small_range_sample, SmallRangeFunction};
pub use symmetric::{symmetric_projector, symmetric_reflection, SymmetricBasis, SymmetricReflector, MAX_TEST_COPIES};
