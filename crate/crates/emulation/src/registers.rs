//! Register permutations on dense states.

use pickone_core::{AmplitudeVector, Error, Result, C64};

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut out = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        out[i] = out[i + 1] * dims[i + 1];
    }
    out
}

pub(crate) fn check_registers(dims: &[usize], regs: &[usize]) -> Result<()> {
    for (i, &r) in regs.iter().enumerate() {
        if r >= dims.len() {
            return Err(Error::Register { index: r, registers: dims.len() });
        }
        if regs[..i].contains(&r) {
            return Err(Error::Params(format!("register {r} listed twice")));
        }
    }
    if let Some(&first) = regs.first() {
        if regs.iter().any(|&r| dims[r] != dims[first]) {
            return Err(Error::Shape {
                expected: vec![dims[first]; regs.len()],
                found: regs.iter().map(|&r| dims[r]).collect(),
            });
        }
    }
    Ok(())
}

/// Output register `regs[j]` receives the content of input register `regs[perm[j]]`.
pub(crate) fn permute_raw(amps: &[C64], dims: &[usize], regs: &[usize], perm: &[usize]) -> Vec<C64> {
    let st = strides(dims);
    let mut out = vec![C64::new(0.0, 0.0); amps.len()];
    let mut digits = vec![0usize; regs.len()];
    for (idx, &a) in amps.iter().enumerate() {
        let mut base = idx;
        for (slot, &r) in digits.iter_mut().zip(regs) {
            *slot = (idx / st[r]) % dims[r];
            base -= *slot * st[r];
        }
        let target = regs.iter().zip(perm).fold(base, |acc, (&r, &p)| acc + digits[p] * st[r]);
        out[target] = a;
    }
    out
}

/// Rotation `|Φ₀⟩|Φ₁⟩…|Φ_r⟩ ↦ |Φ₁⟩…|Φ_r⟩|Φ₀⟩` over the listed registers.
pub fn cyclic_shift(state: &AmplitudeVector, regs: &[usize]) -> Result<AmplitudeVector> {
    check_registers(state.dims(), regs)?;
    let perm: Vec<usize> = (0..regs.len()).map(|j| (j + 1) % regs.len()).collect();
    AmplitudeVector::new(state.dims().to_vec(), permute_raw(state.amps(), state.dims(), regs, &perm))
}

/// Inverse rotation `|Φ₁⟩…|Φ_r⟩|Φ₀⟩ ↦ |Φ₀⟩|Φ₁⟩…|Φ_r⟩`.
pub fn cyclic_shift_inverse(state: &AmplitudeVector, regs: &[usize]) -> Result<AmplitudeVector> {
    check_registers(state.dims(), regs)?;
    let r = regs.len();
    let perm: Vec<usize> = (0..r).map(|j| (j + r - 1) % r).collect();
    AmplitudeVector::new(state.dims().to_vec(), permute_raw(state.amps(), state.dims(), regs, &perm))
}
