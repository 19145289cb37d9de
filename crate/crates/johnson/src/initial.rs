//! Weight of the initial resource state outside `(H_I^{(N)} ⊕ H_I^{(N−1,1)})^{⊗M}`.

use nalgebra::DMatrix;

use crate::error::{JohnsonError, Result};
use crate::scheme::build_scheme;

pub const MAX_M: usize = 3;
pub const MAX_INITIAL_N: usize = 6;
pub const MAX_AMPLITUDES: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq)]
pub struct InitialBoundCheck {
    /// `Tr(ρ₀ Π_{I,b})`.
    pub p_b0: f64,
    /// `h²/(2M)`.
    pub bound: f64,
    /// Probability that `h` uniform draws from `M` values collide.
    pub collision_probability: f64,
}

/// Builds the normalized `Σ_z |z⟩_I ⊗ ⊗_ℓ (α_{ℓ,0}|ΣΨ(z)⟩ + α_{ℓ,1}|ΣΦ⟩)` with `|ΣΨ(z)⟩ = M^{-1/2} Σ_y |y⟩|Ψ(z_y)⟩`
/// and `|ΣΦ⟩ = M^{-1/2} Σ_y |y⟩|Φ⟩`, then measures its weight outside the low-irrep subspace.
/// Each register's coefficient pair is rescaled so that its factor has unit norm.
pub fn initialbound_check(m: usize, n: usize, k: usize, h: usize, alpha: &[[f64; 2]]) -> Result<InitialBoundCheck> {
    if m == 0 || m > MAX_M || n > MAX_INITIAL_N {
        return Err(JohnsonError::Budget(format!(
            "need 1 ≤ M ≤ {MAX_M} and N ≤ {MAX_INITIAL_N}, got M = {m}, N = {n}"
        )));
    }
    if alpha.len() != h {
        return Err(JohnsonError::Params(format!("{} coefficient pairs for {h} resource registers", alpha.len())));
    }
    let scheme = build_scheme(n, k)?;
    let d = scheme.dim();
    let reg = m * n;
    let amplitudes = d.pow(m as u32) * reg.pow(h as u32);
    if amplitudes > MAX_AMPLITUDES {
        return Err(JohnsonError::Budget(format!("{amplitudes} amplitudes exceed {MAX_AMPLITUDES}")));
    }
    let overlap = (k as f64 / n as f64).sqrt();
    let coeffs: Vec<[f64; 2]> = alpha
        .iter()
        .map(|&[a0, a1]| {
            let norm2 = a0 * a0 + a1 * a1 + 2.0 * a0 * a1 * overlap;
            if norm2 <= 0.0 {
                return Err(JohnsonError::Params("resource coefficients give a zero vector".into()));
            }
            Ok([a0 / norm2.sqrt(), a1 / norm2.sqrt()])
        })
        .collect::<Result<_>>()?;
    let phi = 1.0 / (n as f64).sqrt();
    let psi_amp = 1.0 / (k as f64).sqrt();
    let head = 1.0 / (d.pow(m as u32) as f64).sqrt() / (m.pow(h as u32) as f64).sqrt();
    let i_dims = vec![d; m];
    let mut state = vec![0.0; amplitudes];
    let r_count = reg.pow(h as u32);
    for (zi_flat, block) in state.chunks_mut(r_count).enumerate() {
        let zs = digits(zi_flat, &i_dims);
        for (ri, amp) in block.iter_mut().enumerate() {
            let rs = digits(ri, &vec![reg; h]);
            let mut value = head;
            for (l, &r) in rs.iter().enumerate() {
                let (y, x) = (r / n, r % n);
                let z = scheme.basis[zs[y]];
                let in_set = if z >> x & 1 == 1 { psi_amp } else { 0.0 };
                value *= coeffs[l][0] * in_set + coeffs[l][1] * phi;
            }
            *amp = value;
        }
    }
    let low = scheme.projector(0) + scheme.projector(1);
    for j in 0..m {
        apply_on_register(&mut state, &low, d, d.pow(j as u32), d.pow((m - 1 - j) as u32) * r_count);
    }
    let kept: f64 = state.iter().map(|v| v * v).sum();
    let no_collision: f64 = (0..h).map(|i| 1.0 - i as f64 / m as f64).product::<f64>().max(0.0);
    Ok(InitialBoundCheck {
        p_b0: (1.0 - kept).max(0.0),
        bound: (h * h) as f64 / (2 * m) as f64,
        collision_probability: 1.0 - no_collision,
    })
}

/// Mixed-radix digits of `index`, first digit most significant.
fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &dim) in out.iter_mut().zip(dims).rev() {
        *slot = index % dim;
        index /= dim;
    }
    out
}

/// Applies `op` to the register of dimension `dim` sitting between `outer` and `inner` blocks.
fn apply_on_register(state: &mut [f64], op: &DMatrix<f64>, dim: usize, outer: usize, inner: usize) {
    let mut scratch = vec![0.0; dim];
    for o in 0..outer {
        for i in 0..inner {
            let base = o * dim * inner + i;
            for (r, s) in scratch.iter_mut().enumerate() {
                *s = (0..dim).map(|c| op[(r, c)] * state[base + c * inner]).sum();
            }
            for (r, &s) in scratch.iter().enumerate() {
                state[base + r * inner] = s;
            }
        }
    }
}
