//! Dense statevector kernel over composite registers.
//!
//! Joint indices are row-major: the first register is the most significant digit.

use std::ops::Range;

pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// Tolerance for normalization and idempotence checks.
pub const NORM_TOL: f64 = 1e-9;

/// Branch probabilities at or below this value are treated as empty.
pub const EMPTY_BRANCH: f64 = 1e-24;

/// A normalized complex amplitude vector with a register layout.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeVector {
    dims: Vec<usize>,
    amps: Vec<C64>,
}

/// Result of a projective or computational-basis measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementOutcome {
    pub outcome: usize,
    pub probability: f64,
    pub post_state: AmplitudeVector,
}

fn check_dims(dims: &[usize], len: usize) -> Result<()> {
    let prod: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || prod != len {
        return Err(Error::Shape { expected: dims.to_vec(), found: vec![len] });
    }
    Ok(())
}

fn norm_sqr(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

impl AmplitudeVector {
    /// Validates shape and normalization.
    pub fn new(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        check_dims(&dims, amps.len())?;
        let n = norm_sqr(&amps);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { dims, amps })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(dims: Vec<usize>, mut amps: Vec<C64>) -> Result<Self> {
        check_dims(&dims, amps.len())?;
        let n = norm_sqr(&amps);
        if n <= EMPTY_BRANCH {
            return Err(Error::EmptyBranch);
        }
        let s = 1.0 / n.sqrt();
        amps.iter_mut().for_each(|a| *a *= s);
        Ok(Self { dims, amps })
    }

    pub fn basis(dims: &[usize], index: usize) -> Result<Self> {
        let len: usize = dims.iter().product();
        check_dims(dims, len)?;
        if index >= len {
            return Err(Error::OutOfRange { value: index as u64, limit: len as u64 });
        }
        let mut amps = vec![C64::new(0.0, 0.0); len];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { dims: dims.to_vec(), amps })
    }

    pub fn uniform(dims: &[usize]) -> Result<Self> {
        let len: usize = dims.iter().product();
        check_dims(dims, len)?;
        let a = C64::new(1.0 / (len as f64).sqrt(), 0.0);
        Ok(Self { dims: dims.to_vec(), amps: vec![a; len] })
    }

    /// Uniform superposition over the given distinct joint indices.
    pub fn uniform_over(dims: &[usize], support: &[usize]) -> Result<Self> {
        let len: usize = dims.iter().product();
        check_dims(dims, len)?;
        let mut amps = vec![C64::new(0.0, 0.0); len];
        for &i in support {
            if i >= len {
                return Err(Error::OutOfRange { value: i as u64, limit: len as u64 });
            }
            amps[i] = C64::new(1.0, 0.0);
        }
        Self::normalized(dims.to_vec(), amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn registers(&self) -> usize {
        self.dims.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// Same amplitudes under a different register layout of equal total size.
    pub fn reshaped(self, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, self.amps.len())?;
        Ok(Self { dims, amps: self.amps })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.same_shape(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Euclidean norm of the difference.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.len() * other.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims, amps }
    }

    /// Per-register digits of a joint index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.dims).fold(0, |acc, (&x, &d)| acc * d + x)
    }

    /// Conditional state of the other registers given `register = value`, renormalized.
    pub fn condition(&self, register: usize, value: usize) -> Result<Self> {
        let (outer, d, inner) = self.split(register..register + 1)?;
        if value >= d {
            return Err(Error::OutOfRange { value: value as u64, limit: d as u64 });
        }
        let mut amps = Vec::with_capacity(outer * inner);
        for o in 0..outer {
            let base = (o * d + value) * inner;
            amps.extend_from_slice(&self.amps[base..base + inner]);
        }
        let mut dims = self.dims.clone();
        dims.remove(register);
        if dims.is_empty() {
            dims.push(1);
        }
        Self::normalized(dims, amps)
    }

    /// Applies a `d×d` row-major matrix to one register.
    pub fn apply_register_matrix(&self, register: usize, matrix: &[C64]) -> Result<Self> {
        let (outer, d, inner) = self.split(register..register + 1)?;
        if matrix.len() != d * d {
            return Err(Error::Shape { expected: vec![d, d], found: vec![matrix.len()] });
        }
        let mut amps = vec![C64::new(0.0, 0.0); self.len()];
        let mut col = vec![C64::new(0.0, 0.0); d];
        for o in 0..outer {
            for i in 0..inner {
                for (b, c) in col.iter_mut().enumerate() {
                    *c = self.amps[(o * d + b) * inner + i];
                }
                for a in 0..d {
                    let row = &matrix[a * d..(a + 1) * d];
                    amps[(o * d + a) * inner + i] = row.iter().zip(&col).map(|(m, c)| m * c).sum();
                }
            }
        }
        Ok(Self { dims: self.dims.clone(), amps })
    }

    /// `(outer, block, inner)` sizes around a consecutive register range.
    pub fn split(&self, range: Range<usize>) -> Result<(usize, usize, usize)> {
        if range.start >= range.end || range.end > self.dims.len() {
            return Err(Error::Register { index: range.end.saturating_sub(1), registers: self.dims.len() });
        }
        let outer = self.dims[..range.start].iter().product();
        let block = self.dims[range.clone()].iter().product();
        let inner = self.dims[range.end..].iter().product();
        Ok((outer, block, inner))
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::Shape { expected: self.dims.clone(), found: other.dims.clone() });
        }
        Ok(())
    }
}

/// `(I − 2|axis⟩⟨axis|)` on one register.
pub fn reflect_about(state: &AmplitudeVector, axis: &AmplitudeVector, target: usize) -> Result<AmplitudeVector> {
    reflect_about_block(state, axis, target..target + 1)
}

/// `(I − 2|axis⟩⟨axis|)` on a consecutive block of registers.
pub fn reflect_about_block(
    state: &AmplitudeVector,
    axis: &AmplitudeVector,
    block: Range<usize>,
) -> Result<AmplitudeVector> {
    let (outer, d, inner) = state.split(block.clone())?;
    if axis.len() != d {
        return Err(Error::Shape { expected: state.dims[block].to_vec(), found: axis.dims.clone() });
    }
    let mut amps = state.amps.clone();
    for o in 0..outer {
        for i in 0..inner {
            let ov: C64 = (0..d).map(|b| axis.amps[b].conj() * amps[(o * d + b) * inner + i]).sum();
            if ov.norm_sqr() == 0.0 {
                continue;
            }
            for b in 0..d {
                amps[(o * d + b) * inner + i] -= 2.0 * ov * axis.amps[b];
            }
        }
    }
    Ok(AmplitudeVector { dims: state.dims.clone(), amps })
}

/// Multiplies the amplitude at joint index `x` by `(−1)^{P(x)}`.
pub fn apply_phase_predicate(state: &AmplitudeVector, predicate: impl Fn(usize) -> bool) -> AmplitudeVector {
    let amps = state.amps.iter().enumerate().map(|(x, &a)| if predicate(x) { -a } else { a }).collect();
    AmplitudeVector { dims: state.dims.clone(), amps }
}

/// Deterministic projection onto the branch `outcome` of the projector given by `predicate`.
pub fn project(
    state: &AmplitudeVector,
    predicate: impl Fn(usize) -> bool,
    outcome: bool,
) -> Result<MeasurementOutcome> {
    let amps: Vec<C64> = state
        .amps
        .iter()
        .enumerate()
        .map(|(x, &a)| if predicate(x) == outcome { a } else { C64::new(0.0, 0.0) })
        .collect();
    let p = norm_sqr(&amps);
    if p <= EMPTY_BRANCH {
        return Err(Error::EmptyBranch);
    }
    let post_state = AmplitudeVector::normalized(state.dims.clone(), amps)?;
    Ok(MeasurementOutcome { outcome: outcome as usize, probability: p, post_state })
}

/// Both nonempty branches of a projective measurement, outcome 0 first.
pub fn projector_branches(state: &AmplitudeVector, predicate: impl Fn(usize) -> bool) -> Vec<MeasurementOutcome> {
    [false, true].into_iter().filter_map(|b| project(state, &predicate, b).ok()).collect()
}

/// Born-rule sample of a projective measurement.
pub fn measure_projector(
    state: &AmplitudeVector,
    predicate: impl Fn(usize) -> bool,
    rng: &mut RandomSource,
) -> Result<MeasurementOutcome> {
    let p1: f64 = state.amps.iter().enumerate().filter(|(x, _)| predicate(*x)).map(|(_, a)| a.norm_sqr()).sum();
    let outcome = rng.unit() * state.norm_sqr() < p1;
    project(state, predicate, outcome)
}

/// Marginal outcome probabilities of one register.
pub fn register_probabilities(state: &AmplitudeVector, register: usize) -> Result<Vec<f64>> {
    let (outer, d, inner) = state.split(register..register + 1)?;
    let mut p = vec![0.0; d];
    for o in 0..outer {
        for (b, pb) in p.iter_mut().enumerate() {
            let base = (o * d + b) * inner;
            *pb += norm_sqr(&state.amps[base..base + inner]);
        }
    }
    Ok(p)
}

fn collapse(state: &AmplitudeVector, register: usize, value: usize, p: f64) -> Result<MeasurementOutcome> {
    let (outer, d, inner) = state.split(register..register + 1)?;
    let mut amps = vec![C64::new(0.0, 0.0); state.len()];
    for o in 0..outer {
        let base = (o * d + value) * inner;
        amps[base..base + inner].copy_from_slice(&state.amps[base..base + inner]);
    }
    let post_state = AmplitudeVector::normalized(state.dims.clone(), amps)?;
    Ok(MeasurementOutcome { outcome: value, probability: p, post_state })
}

/// Born-rule sample of one register in the computational basis.
pub fn measure_computational(
    state: &AmplitudeVector,
    register: usize,
    rng: &mut RandomSource,
) -> Result<MeasurementOutcome> {
    let p = register_probabilities(state, register)?;
    let total: f64 = p.iter().sum();
    let mut u = rng.unit() * total;
    let mut chosen = None;
    for (v, &pv) in p.iter().enumerate() {
        if pv > EMPTY_BRANCH {
            chosen = Some(v);
            if u < pv {
                break;
            }
            u -= pv;
        }
    }
    let v = chosen.ok_or(Error::EmptyBranch)?;
    collapse(state, register, v, p[v])
}

/// Every nonempty computational-basis branch of one register.
pub fn computational_branches(state: &AmplitudeVector, register: usize) -> Result<Vec<MeasurementOutcome>> {
    let p = register_probabilities(state, register)?;
    p.iter().enumerate().filter(|(_, &pv)| pv > EMPTY_BRANCH).map(|(v, &pv)| collapse(state, register, v, pv)).collect()
}

/// `√(1 − |⟨a|b⟩|²)`.
pub fn trace_distance_pure(a: &AmplitudeVector, b: &AmplitudeVector) -> Result<f64> {
    let ov = a.inner(b)?.norm_sqr();
    Ok((1.0 - ov).max(0.0).sqrt())
}

/// `½ Σ |p_i − q_i|` over a common support.
pub fn statistical_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Support(p.len(), q.len()));
    }
    for d in [p, q] {
        let s: f64 = d.iter().sum();
        if (s - 1.0).abs() > NORM_TOL || d.iter().any(|&v| v < -NORM_TOL) {
            return Err(Error::NotDistribution(s));
        }
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}
