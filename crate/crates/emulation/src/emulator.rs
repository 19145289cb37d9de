//! The controlled-shift circuit that emulates `O_Ψ` from a reservoir state.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use pickone_core::sim::trace_distance_pure;
use pickone_core::{AmplitudeVector, Error, RandomSource, Result, C64};
use rand_distr::{Distribution, StandardNormal};

use crate::registers::permute_raw;
use crate::reservoir::{check_frame, interpolant, ReservoirState, MAX_AMPLITUDES};
use crate::symmetric::{reflect_raw, SymmetricBasis, SymmetricReflector, MAX_TEST_COPIES};

/// How the circuit's `O_Ref` stage is realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RefMode {
    /// `I − 2|Ψ⟩⟨Ψ|` applied directly.
    ExactRef,
    /// `I − 2P_V` on the work register and the `m` reference copies.
    SymmetricTest,
}

/// Storage of the `m` reference copies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopyLayout {
    /// `m` separate registers of dimension `d`.
    Registers,
    /// One register holding `Sym^m(C^d)` in the occupation basis.
    Symmetric,
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// `I − 2|a⟩⟨a|` as a row-major matrix.
pub fn reflection_matrix(axis: &[C64]) -> Vec<C64> {
    let d = axis.len();
    let mut m = vec![zero(); d * d];
    for i in 0..d {
        for j in 0..d {
            let id = if i == j { 1.0 } else { 0.0 };
            m[i * d + j] = C64::new(id, 0.0) - 2.0 * axis[i] * axis[j].conj();
        }
    }
    m
}

/// `O_Ψ`: swaps `|Ψ⟩` and `|⊥⟩`, identity on their orthogonal complement.
pub fn o_psi_matrix(psi: &[C64], bot: &[C64]) -> Vec<C64> {
    let d = psi.len();
    let mut m = vec![zero(); d * d];
    for i in 0..d {
        for j in 0..d {
            let id = if i == j { 1.0 } else { 0.0 };
            m[i * d + j] = C64::new(id, 0.0) - psi[i] * psi[j].conj() - bot[i] * bot[j].conj()
                + psi[i] * bot[j].conj()
                + bot[i] * psi[j].conj();
        }
    }
    m
}

fn apply_leading(amps: &mut [C64], d: usize, matrix: &[C64]) {
    let rest = amps.len() / d;
    let mut col = vec![zero(); d];
    for r in 0..rest {
        for (b, c) in col.iter_mut().enumerate() {
            *c = amps[b * rest + r];
        }
        for a in 0..d {
            amps[a * rest + r] = matrix[a * d..(a + 1) * d].iter().zip(&col).map(|(m, c)| m * c).sum();
        }
    }
}

/// Joint state of work register `X`, reference copies `T`, interpolants `R` and control qubit `Z`,
/// stored as the two `Z` branches.
#[derive(Clone, Debug)]
pub struct Emulator {
    d: usize,
    n: usize,
    layout: CopyLayout,
    dims: Vec<usize>,
    psi: Vec<C64>,
    bot: Vec<C64>,
    reflector: Option<SymmetricReflector>,
    tail: Vec<C64>,
    z0: Vec<C64>,
    z1: Vec<C64>,
}

impl Emulator {
    pub fn new(
        psi: &AmplitudeVector,
        bot: &AmplitudeVector,
        work: &AmplitudeVector,
        m: usize,
        n: usize,
        layout: CopyLayout,
    ) -> Result<Self> {
        check_frame(psi, bot)?;
        let d = psi.len();
        if work.dims() != psi.dims() {
            return Err(Error::Shape { expected: psi.dims().to_vec(), found: work.dims().to_vec() });
        }
        let (t_dims, t_state, reflector) = match layout {
            CopyLayout::Registers => {
                if m > MAX_TEST_COPIES {
                    return Err(Error::Budget(format!("{m} reference copies as separate registers")));
                }
                let mut t = vec![C64::new(1.0, 0.0)];
                for _ in 0..m {
                    t = t.iter().flat_map(|a| psi.amps().iter().map(move |p| a * p)).collect();
                }
                (vec![d; m], t, None)
            }
            CopyLayout::Symmetric => {
                let basis = SymmetricBasis::new(d, m)?;
                let t = basis.power_state(psi.amps())?;
                (vec![basis.dim()], t, Some(SymmetricReflector::new(d, m)?))
            }
        };
        let mut dims = vec![d];
        dims.extend(&t_dims);
        dims.extend(std::iter::repeat_n(d, n));
        let len: f64 = dims.iter().map(|&x| x as f64).product();
        if len > MAX_AMPLITUDES as f64 {
            return Err(Error::Budget(format!("emulator state of {len} amplitudes per branch")));
        }
        let mut tail = t_state;
        for j in 1..=n {
            let a = interpolant(psi, bot, j, n);
            tail = tail.iter().flat_map(|x| a.amps().iter().map(move |y| x * y)).collect();
        }
        let z0: Vec<C64> = work.amps().iter().flat_map(|w| tail.iter().map(move |t| w * t)).collect();
        let z1 = vec![zero(); z0.len()];
        Ok(Self { d, n, layout, dims, psi: psi.amps().to_vec(), bot: bot.amps().to_vec(), reflector, tail, z0, z1 })
    }

    /// Emulator whose copies and interpolants are taken from a dense reservoir state.
    pub fn from_reservoir(
        work: &AmplitudeVector,
        reservoir: &ReservoirState,
        psi: &AmplitudeVector,
        bot: &AmplitudeVector,
    ) -> Result<Self> {
        let mut em = Self::new(psi, bot, work, reservoir.m, reservoir.n, CopyLayout::Registers)?;
        if reservoir.state.len() != em.tail.len() {
            return Err(Error::Shape { expected: vec![em.tail.len()], found: vec![reservoir.state.len()] });
        }
        em.tail = reservoir.state.amps().to_vec();
        em.z0 = work.amps().iter().flat_map(|w| em.tail.iter().map(move |t| w * t)).collect();
        Ok(em)
    }

    fn t_registers(&self) -> usize {
        self.dims.len() - 1 - self.n
    }

    fn hadamard(&mut self) {
        for (a, b) in self.z0.iter_mut().zip(self.z1.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = (x + y) * FRAC_1_SQRT_2;
            *b = (x - y) * FRAC_1_SQRT_2;
        }
    }

    fn shift_regs(&self) -> Vec<usize> {
        let t = self.t_registers();
        std::iter::once(0).chain(1 + t..1 + t + self.n).collect()
    }

    fn controlled_shift(&mut self, inverse: bool) {
        let regs = self.shift_regs();
        let r = regs.len();
        let perm: Vec<usize> = (0..r).map(|j| if inverse { (j + r - 1) % r } else { (j + 1) % r }).collect();
        self.z1 = permute_raw(&self.z1, &self.dims, &regs, &perm);
    }

    fn controlled_ref(&mut self, mode: RefMode) {
        match (mode, self.layout) {
            (RefMode::ExactRef, _) => apply_leading(&mut self.z1, self.d, &reflection_matrix(&self.psi)),
            (RefMode::SymmetricTest, CopyLayout::Registers) => {
                let regs: Vec<usize> = (0..=self.t_registers()).collect();
                reflect_raw(&mut self.z1, &self.dims, &regs);
            }
            (RefMode::SymmetricTest, CopyLayout::Symmetric) => {
                let rest = self.d.pow(self.n as u32);
                self.reflector.as_ref().expect("symmetric layout").apply_raw(&mut self.z1, rest);
            }
        }
    }

    /// One emulated `O_Ψ` query on `X`: the eleven-stage controlled circuit on `Z`.
    pub fn query(&mut self, mode: RefMode) {
        let u_bot = reflection_matrix(&self.bot);
        self.hadamard();
        apply_leading(&mut self.z1, self.d, &u_bot);
        self.hadamard();
        self.controlled_shift(false);
        self.hadamard();
        self.controlled_ref(mode);
        self.hadamard();
        self.controlled_shift(true);
        self.hadamard();
        apply_leading(&mut self.z1, self.d, &u_bot);
        self.hadamard();
    }

    /// A `d×d` unitary applied to `X` by the emulated algorithm between queries.
    pub fn apply_work(&mut self, matrix: &[C64]) -> Result<()> {
        if matrix.len() != self.d * self.d {
            return Err(Error::Shape { expected: vec![self.d, self.d], found: vec![matrix.len()] });
        }
        apply_leading(&mut self.z0, self.d, matrix);
        apply_leading(&mut self.z1, self.d, matrix);
        Ok(())
    }

    /// State over `[X, T…, R…, Z]`.
    pub fn joint_state(&self) -> Result<AmplitudeVector> {
        let amps = self.z0.iter().zip(&self.z1).flat_map(|(a, b)| [*a, *b]).collect();
        let mut dims = self.dims.clone();
        dims.push(2);
        AmplitudeVector::new(dims, amps)
    }

    /// `φ ⊗ (initial T, R) ⊗ |0⟩`.
    pub fn ideal_joint(&self, phi: &AmplitudeVector) -> Result<AmplitudeVector> {
        if phi.len() != self.d {
            return Err(Error::Shape { expected: vec![self.d], found: phi.dims().to_vec() });
        }
        let amps = phi.amps().iter().flat_map(|w| self.tail.iter().flat_map(move |t| [w * t, zero()])).collect();
        let mut dims = self.dims.clone();
        dims.push(2);
        AmplitudeVector::new(dims, amps)
    }

    /// Reduced density matrix of `X`.
    pub fn work_density(&self) -> DMatrix<C64> {
        let rest = self.z0.len() / self.d;
        DMatrix::from_fn(self.d, self.d, |a, b| {
            let mut s = zero();
            for half in [&self.z0, &self.z1] {
                for r in 0..rest {
                    s += half[a * rest + r] * half[b * rest + r].conj();
                }
            }
            s
        })
    }

    /// `TD(ρ_X, |φ⟩⟨φ|)`.
    pub fn trace_distance_to(&self, phi: &AmplitudeVector) -> Result<f64> {
        if phi.len() != self.d {
            return Err(Error::Shape { expected: vec![self.d], found: phi.dims().to_vec() });
        }
        let p = phi.amps();
        let diff = self.work_density() - DMatrix::from_fn(self.d, self.d, |a, b| p[a] * p[b].conj());
        Ok(0.5 * diff.symmetric_eigenvalues().iter().map(|l| l.abs()).sum::<f64>())
    }

    /// `‖joint − φ ⊗ (initial T, R) ⊗ |0⟩‖`.
    pub fn purified_distance_to(&self, phi: &AmplitudeVector) -> Result<f64> {
        self.joint_state()?.distance(&self.ideal_joint(phi)?)
    }

    /// Probability of finding `Z` in `|1⟩`.
    pub fn ancilla_residue(&self) -> f64 {
        self.z1.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// One emulated query on `work` with a dense reservoir.
pub fn emulated_o_psi(
    work: &AmplitudeVector,
    reservoir: &ReservoirState,
    psi: &AmplitudeVector,
    bot: &AmplitudeVector,
    mode: RefMode,
) -> Result<Emulator> {
    let mut em = Emulator::from_reservoir(work, reservoir, psi, bot)?;
    em.query(mode);
    Ok(em)
}

fn gaussian_vector(len: usize, rng: &mut RandomSource) -> Vec<C64> {
    (0..len).map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))).collect()
}

/// A normalized Gaussian vector.
pub fn random_state(d: usize, rng: &mut RandomSource) -> AmplitudeVector {
    AmplitudeVector::normalized(vec![d], gaussian_vector(d, rng)).expect("nonzero Gaussian vector")
}

/// A Haar-random `d×d` unitary, row-major.
pub fn random_unitary(d: usize, rng: &mut RandomSource) -> Vec<C64> {
    let g = DMatrix::from_row_slice(d, d, &gaussian_vector(d * d, rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let u = DMatrix::from_fn(d, d, |i, j| q[(i, j)] * (r[(j, j)] / r[(j, j)].norm()));
    (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).map(|(i, j)| u[(i, j)]).collect()
}

/// Orthonormal `(Ψ, ⊥, χ)` inside the single-copy space; every emulation state stays in its span.
#[derive(Clone, Debug)]
pub struct Frame {
    pub psi: AmplitudeVector,
    pub bot: AmplitudeVector,
    pub chi: AmplitudeVector,
}

impl Frame {
    /// The frame as the standard basis of `C³`.
    pub fn standard() -> Self {
        let e = |i| AmplitudeVector::basis(&[3], i).expect("basis state");
        Self { psi: e(0), bot: e(1), chi: e(2) }
    }

    /// `Ψ` uniform over a random 2-subset of the first `d − 1` basis states, `⊥ = e_{d−1}`,
    /// `χ` a random unit vector orthogonal to both.
    pub fn random(d: usize, rng: &mut RandomSource) -> Result<Self> {
        if d < 4 {
            return Err(Error::Params(format!("need d ≥ 4, got {d}")));
        }
        let a = rng.index(d - 1);
        let b = (a + 1 + rng.index(d - 2)) % (d - 1);
        let psi = AmplitudeVector::uniform_over(&[d], &[a.min(b), a.max(b)])?;
        let bot = AmplitudeVector::basis(&[d], d - 1)?;
        let mut v = gaussian_vector(d, rng);
        for axis in [&psi, &bot] {
            let c: C64 = axis.amps().iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            v.iter_mut().zip(axis.amps()).for_each(|(y, x)| *y -= c * x);
        }
        Ok(Self { psi, bot, chi: AmplitudeVector::normalized(vec![d], v)? })
    }

    pub fn dim(&self) -> usize {
        self.psi.len()
    }

    fn columns(&self) -> [&[C64]; 3] {
        [self.psi.amps(), self.bot.amps(), self.chi.amps()]
    }

    /// `Σ_i c_i f_i` for frame coordinates `c`.
    pub fn vector(&self, coords: &[C64]) -> Result<AmplitudeVector> {
        let d = self.dim();
        let amps = (0..d).map(|x| self.columns().iter().zip(coords).map(|(f, c)| f[x] * c).sum()).collect();
        AmplitudeVector::new(vec![d], amps)
    }

    /// `F W F† + (I − F F†)` for a `3×3` unitary `W` in frame coordinates.
    pub fn matrix(&self, w: &[C64]) -> Vec<C64> {
        let d = self.dim();
        let f = self.columns();
        let mut out = vec![zero(); d * d];
        for a in 0..d {
            for b in 0..d {
                let mut s = if a == b { C64::new(1.0, 0.0) } else { zero() };
                for i in 0..3 {
                    s -= f[i][a] * f[i][b].conj();
                    for j in 0..3 {
                        s += f[i][a] * w[i * 3 + j] * f[j][b].conj();
                    }
                }
                out[a * d + b] = s;
            }
        }
        out
    }
}

/// Input state and the algorithm's between-query unitary, in frame coordinates.
#[derive(Clone, Debug)]
pub struct EmulationInstance {
    pub phi0: Vec<C64>,
    pub step: Vec<C64>,
}

impl EmulationInstance {
    pub fn random(rng: &mut RandomSource) -> Self {
        Self { phi0: random_state(3, rng).amps().to_vec(), step: random_unitary(3, rng) }
    }
}

/// Distances between the emulated run and the true run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmulationOutcome {
    /// Between the reduced state of `X` and the true work state.
    pub trace_distance: f64,
    /// Between the joint final state and the true work state with `T, R, Z` as initialized.
    pub joint_trace_distance: f64,
    pub purified_distance: f64,
}

/// Runs `q` queries of the emulated and the true `O_Ψ`, interleaved with the instance's unitary,
/// and compares the two after every query.
pub fn run_emulation(
    frame: &Frame,
    instance: &EmulationInstance,
    q: usize,
    n: usize,
    m: usize,
    layout: CopyLayout,
    mode: RefMode,
) -> Result<Vec<EmulationOutcome>> {
    let start = frame.vector(&instance.phi0)?;
    let step = frame.matrix(&instance.step);
    let o_psi = o_psi_matrix(frame.psi.amps(), frame.bot.amps());
    let mut em = Emulator::new(&frame.psi, &frame.bot, &start, m, n, layout)?;
    let mut ideal = start;
    let mut out = Vec::with_capacity(q);
    for i in 0..q {
        if i > 0 {
            ideal = ideal.apply_register_matrix(0, &step)?;
            em.apply_work(&step)?;
        }
        ideal = ideal.apply_register_matrix(0, &o_psi)?;
        em.query(mode);
        let (joint, target) = (em.joint_state()?, em.ideal_joint(&ideal)?);
        out.push(EmulationOutcome {
            trace_distance: em.trace_distance_to(&ideal)?,
            joint_trace_distance: trace_distance_pure(&joint, &target)?,
            purified_distance: joint.distance(&target)?,
        });
    }
    Ok(out)
}

/// Envelope factor for the lower-order terms of the shift error.
pub fn shift_slack(n: usize) -> f64 {
    if n < 16 {
        1.25
    } else {
        1.1
    }
}

/// `πq/(2√n)·slack + 2q/√(m+1)`, the second term only when `O_Ref` is emulated.
pub fn emulation_bound(q: usize, n: usize, m: usize, mode: RefMode) -> f64 {
    let shift = PI * q as f64 / (2.0 * (n as f64).sqrt()) * shift_slack(n);
    match mode {
        RefMode::ExactRef => shift,
        RefMode::SymmetricTest => shift + 2.0 * q as f64 / ((m + 1) as f64).sqrt(),
    }
}
