//! Reservoir states and the quality of the cyclic shift on them.

use std::f64::consts::PI;

use pickone_core::{AmplitudeVector, Error, Result, C64};

/// Largest dense state built by this crate, in amplitudes.
pub const MAX_AMPLITUDES: usize = 1 << 22;

/// `|Ψ⟩^{⊗m} ⊗ |α₁⟩ ⊗ … ⊗ |α_n⟩` with `|α_j⟩ = cos(jπ/2n)|Ψ⟩ + sin(jπ/2n)|⊥⟩`.
#[derive(Clone, Debug)]
pub struct ReservoirState {
    pub d: usize,
    pub m: usize,
    pub n: usize,
    pub state: AmplitudeVector,
}

pub(crate) fn check_frame(psi: &AmplitudeVector, bot: &AmplitudeVector) -> Result<()> {
    if psi.dims().len() != 1 || psi.dims() != bot.dims() {
        return Err(Error::Shape { expected: psi.dims().to_vec(), found: bot.dims().to_vec() });
    }
    if psi.inner(bot)?.norm() > 1e-9 {
        return Err(Error::Params("⊥ must be orthogonal to Ψ".into()));
    }
    Ok(())
}

impl ReservoirState {
    pub fn new(psi: &AmplitudeVector, bot: &AmplitudeVector, m: usize, n: usize) -> Result<Self> {
        check_frame(psi, bot)?;
        let d = psi.len();
        if (m + n) as f64 * (d as f64).log2() > (MAX_AMPLITUDES as f64).log2() {
            return Err(Error::Budget(format!("reservoir of {} copies in dimension {d}", m + n)));
        }
        let mut state = AmplitudeVector::basis(&[1], 0)?;
        for _ in 0..m {
            state = state.tensor(psi);
        }
        for j in 1..=n {
            state = state.tensor(&interpolant(psi, bot, j, n));
        }
        let dims = if m + n == 0 { vec![1] } else { vec![d; m + n] };
        Ok(Self { d, m, n, state: state.reshaped(dims)? })
    }
}

/// `|α_j⟩ = cos(jπ/2n)|Ψ⟩ + sin(jπ/2n)|⊥⟩`.
pub fn interpolant(psi: &AmplitudeVector, bot: &AmplitudeVector, j: usize, n: usize) -> AmplitudeVector {
    let theta = j as f64 * PI / (2 * n) as f64;
    let amps: Vec<C64> = psi.amps().iter().zip(bot.amps()).map(|(p, b)| p * theta.cos() + b * theta.sin()).collect();
    AmplitudeVector::normalized(psi.dims().to_vec(), amps).expect("orthogonal unit vectors")
}

/// `⟨S(⊥⊗R)|Ψ⊗R⟩ = cos(π/2n)^n`.
pub fn shift_overlap(n: usize) -> f64 {
    (PI / (2 * n) as f64).cos().powi(n as i32)
}

/// `‖S(⊥⊗R) − Ψ⊗R‖ = √(2(1 − cos(π/2n)^n))`.
pub fn shift_quality(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Params("reservoir needs n ≥ 1".into()));
    }
    Ok((2.0 * (1.0 - shift_overlap(n))).max(0.0).sqrt())
}

/// Leading term `π/(2√n)` of the shift error.
pub fn shift_quality_leading(n: usize) -> f64 {
    PI / (2.0 * (n as f64).sqrt())
}
