//! Reflection about the permutation-invariant subspace of `m + 1` equal registers.

use std::collections::HashMap;

use itertools::Itertools;
use nalgebra::DMatrix;
use pickone_core::{AmplitudeVector, Error, Result, C64};

use crate::registers::{check_registers, permute_raw};

/// Largest number of reference copies handled by explicit permutation averaging.
pub const MAX_TEST_COPIES: usize = 5;

fn check_budget(parties: usize) -> Result<()> {
    if parties == 0 || parties > MAX_TEST_COPIES + 1 {
        return Err(Error::Budget(format!(
            "permutation averaging supports 1..={} parties, got {parties}",
            MAX_TEST_COPIES + 1
        )));
    }
    Ok(())
}

/// `P_V v` as the average of `v` over all register permutations.
pub(crate) fn symmetrize_raw(amps: &[C64], dims: &[usize], regs: &[usize]) -> Vec<C64> {
    let mut acc = vec![C64::new(0.0, 0.0); amps.len()];
    let mut count = 0usize;
    for perm in (0..regs.len()).permutations(regs.len()) {
        for (a, b) in acc.iter_mut().zip(permute_raw(amps, dims, regs, &perm)) {
            *a += b;
        }
        count += 1;
    }
    let scale = 1.0 / count as f64;
    acc.iter_mut().for_each(|a| *a *= scale);
    acc
}

pub(crate) fn reflect_raw(amps: &mut [C64], dims: &[usize], regs: &[usize]) {
    let p = symmetrize_raw(amps, dims, regs);
    for (a, b) in amps.iter_mut().zip(p) {
        *a -= 2.0 * b;
    }
}

/// `U_V = I − 2P_V` on the listed registers, with `P_V` averaged over all `(m+1)!` permutations.
pub fn symmetric_reflection(state: &AmplitudeVector, regs: &[usize]) -> Result<AmplitudeVector> {
    check_registers(state.dims(), regs)?;
    check_budget(regs.len())?;
    let mut amps = state.amps().to_vec();
    reflect_raw(&mut amps, state.dims(), regs);
    AmplitudeVector::new(state.dims().to_vec(), amps)
}

/// Dense matrix of `P_V` on `parties` registers of dimension `d`.
pub fn symmetric_projector(d: usize, parties: usize) -> Result<DMatrix<C64>> {
    check_budget(parties)?;
    let size = d.pow(parties as u32);
    if size > 4096 {
        return Err(Error::Budget(format!("projector of dimension {size}")));
    }
    let dims = vec![d; parties];
    let regs: Vec<usize> = (0..parties).collect();
    let mut m = DMatrix::zeros(size, size);
    for col in 0..size {
        let mut e = vec![C64::new(0.0, 0.0); size];
        e[col] = C64::new(1.0, 0.0);
        for (row, v) in symmetrize_raw(&e, &dims, &regs).into_iter().enumerate() {
            m[(row, col)] = v;
        }
    }
    Ok(m)
}

/// Occupation-number basis of `Sym^m(C^d)`.
#[derive(Clone, Debug)]
pub struct SymmetricBasis {
    d: usize,
    m: usize,
    occupations: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl SymmetricBasis {
    pub fn new(d: usize, m: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Params("local dimension must be positive".into()));
        }
        let occupations: Vec<Vec<usize>> = (0..d)
            .combinations_with_replacement(m)
            .map(|c| {
                let mut occ = vec![0; d];
                c.into_iter().for_each(|x| occ[x] += 1);
                occ
            })
            .collect();
        let index = occupations.iter().enumerate().map(|(i, o)| (o.clone(), i)).collect();
        Ok(Self { d, m, occupations, index })
    }

    pub fn dim(&self) -> usize {
        self.occupations.len()
    }

    pub fn copies(&self) -> usize {
        self.m
    }

    pub fn occupation(&self, i: usize) -> &[usize] {
        &self.occupations[i]
    }

    pub fn index_of(&self, occupation: &[usize]) -> Option<usize> {
        self.index.get(occupation).copied()
    }

    /// Coordinates of `|ψ⟩^{⊗m}`: `√(m!/Π s_x!) Π ψ_x^{s_x}`.
    pub fn power_state(&self, psi: &[C64]) -> Result<Vec<C64>> {
        if psi.len() != self.d {
            return Err(Error::Shape { expected: vec![self.d], found: vec![psi.len()] });
        }
        Ok(self
            .occupations
            .iter()
            .map(|occ| {
                let mut amp = C64::new(multinomial(occ).sqrt(), 0.0);
                for (x, &s) in occ.iter().enumerate() {
                    amp *= psi[x].powu(s as u32);
                }
                amp
            })
            .collect())
    }

    /// The normalized symmetric state `|s⟩` written out over `m` registers of dimension `d`.
    pub fn embed(&self, i: usize) -> Vec<C64> {
        let occ = &self.occupations[i];
        let size = self.d.pow(self.m as u32);
        let mut out = vec![C64::new(0.0, 0.0); size];
        let amp = 1.0 / multinomial(occ).sqrt();
        for (idx, slot) in out.iter_mut().enumerate() {
            let mut counts = vec![0; self.d];
            let mut rest = idx;
            for _ in 0..self.m {
                counts[rest % self.d] += 1;
                rest /= self.d;
            }
            if &counts == occ {
                *slot = C64::new(amp, 0.0);
            }
        }
        out
    }
}

fn multinomial(occ: &[usize]) -> f64 {
    let total: usize = occ.iter().sum();
    let mut r = (1..=total).map(|i| i as f64).product::<f64>();
    for &s in occ {
        r /= (1..=s).map(|i| i as f64).product::<f64>();
    }
    r
}

/// `U_V` on `C^d ⊗ Sym^m(C^d)` via `|s⟩ = Σ_x √(s_x/(m+1)) |x⟩|s − e_x⟩` for `|s| = m + 1`.
#[derive(Clone, Debug)]
pub struct SymmetricReflector {
    t_dim: usize,
    vectors: Vec<Vec<(usize, usize, f64)>>,
}

impl SymmetricReflector {
    pub fn new(d: usize, m: usize) -> Result<Self> {
        let lower = SymmetricBasis::new(d, m)?;
        let upper = SymmetricBasis::new(d, m + 1)?;
        let vectors = upper
            .occupations
            .iter()
            .map(|occ| {
                (0..d)
                    .filter(|&x| occ[x] > 0)
                    .map(|x| {
                        let mut rest = occ.clone();
                        rest[x] -= 1;
                        let t = lower.index_of(&rest).expect("occupation of the smaller power");
                        (x, t, (occ[x] as f64 / (m + 1) as f64).sqrt())
                    })
                    .collect()
            })
            .collect();
        Ok(Self { t_dim: lower.dim(), vectors })
    }

    pub fn t_dim(&self) -> usize {
        self.t_dim
    }

    /// Applies `U_V` to every `(x, t)` block of a vector laid out as `[X, T, rest]`.
    pub(crate) fn apply_raw(&self, amps: &mut [C64], rest: usize) {
        for r in 0..rest {
            let at = |x: usize, t: usize| (x * self.t_dim + t) * rest + r;
            for v in &self.vectors {
                let c: C64 = v.iter().map(|&(x, t, w)| amps[at(x, t)] * w).sum();
                for &(x, t, w) in v {
                    amps[at(x, t)] -= 2.0 * w * c;
                }
            }
        }
    }
}
