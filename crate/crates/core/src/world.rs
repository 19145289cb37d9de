//! The Two Values problem and the relativized oracle world built on it.
//!
//! A world fixes a hidden k-subset `S_y ⊆ X` for every `y ∈ Y`, a witness `w0` for the
//! single statement `s0 = 0`, and lazily sampled tables for `O_S` and `O_P`. Table entries
//! are derived from `(seed, oracle, arguments)` alone, so they do not depend on query order.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rand::seq::index::sample;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{key_bytes, keyed_rng};
use crate::sim::{AmplitudeVector, C64};

/// Schema tag written into world dumps.
pub const WORLD_SCHEMA: &str = "pickone-world/1";

/// Sizes of the Two Values problem: `|Y| = m`, `|X| = n`, `|S_y| = k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoValuesParams {
    pub m: usize,
    pub n: usize,
    pub k: usize,
}

impl TwoValuesParams {
    pub fn new(m: usize, n: usize, k: usize) -> Result<Self> {
        if m == 0 || k == 0 || k > n {
            return Err(Error::Params(format!("need M ≥ 1 and 1 ≤ k ≤ N, got M={m}, N={n}, k={k}")));
        }
        Ok(Self { m, n, k })
    }
}

/// One hidden sorted k-subset per `y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoValuesInstance {
    params: TwoValuesParams,
    sets: Vec<Vec<usize>>,
}

impl TwoValuesInstance {
    pub fn from_sets(params: TwoValuesParams, mut sets: Vec<Vec<usize>>) -> Result<Self> {
        if sets.len() != params.m {
            return Err(Error::Params(format!("expected {} sets, got {}", params.m, sets.len())));
        }
        for s in &mut sets {
            s.sort_unstable();
            s.dedup();
            if s.len() != params.k || s.last().is_some_and(|&x| x >= params.n) {
                return Err(Error::Params("each set must hold k distinct elements of X".into()));
            }
        }
        Ok(Self { params, sets })
    }

    pub fn params(&self) -> TwoValuesParams {
        self.params
    }

    pub fn set(&self, y: usize) -> &[usize] {
        &self.sets[y]
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Membership `x ∈ S_y` by binary search.
    pub fn contains(&self, y: usize, x: usize) -> bool {
        y < self.params.m && self.sets[y].binary_search(&x).is_ok()
    }

    fn check_y(&self, y: usize) -> Result<()> {
        if y >= self.params.m {
            return Err(Error::OutOfRange { value: y as u64, limit: self.params.m as u64 });
        }
        Ok(())
    }
}

/// Draws every `S_y` independently and uniformly among k-subsets.
pub fn sample_instance(params: TwoValuesParams, rng: &mut impl RngCore) -> Result<TwoValuesInstance> {
    let params = TwoValuesParams::new(params.m, params.n, params.k)?;
    let sets = (0..params.m).map(|_| sample(rng, params.n, params.k).into_vec()).collect();
    TwoValuesInstance::from_sets(params, sets)
}

/// `|Ψ(y)⟩`, uniform over `S_y`.
pub fn psi_y(instance: &TwoValuesInstance, y: usize) -> Result<AmplitudeVector> {
    instance.check_y(y)?;
    AmplitudeVector::uniform_over(&[instance.params.n], instance.set(y))
}

/// `|ΣΨ⟩ = Σ_y |y⟩|Ψ(y)⟩/√M` over registers `[M, N]`.
pub fn sigma_psi(instance: &TwoValuesInstance) -> AmplitudeVector {
    let TwoValuesParams { m, n, .. } = instance.params;
    let support: Vec<usize> = (0..m).flat_map(|y| instance.set(y).iter().map(move |&x| y * n + x)).collect();
    AmplitudeVector::uniform_over(&[m, n], &support).expect("nonempty support")
}

/// `|ΣΦ⟩`, uniform over `Y × X`.
pub fn sigma_phi(params: TwoValuesParams) -> AmplitudeVector {
    AmplitudeVector::uniform(&[params.m, params.n]).expect("positive dims")
}

/// Classical membership oracle `O_V(y, x)`.
pub fn oracle_v(instance: &TwoValuesInstance, y: usize, x: usize) -> bool {
    instance.contains(y, x)
}

fn expect_dims(state: &AmplitudeVector, dims: &[usize]) -> Result<()> {
    if state.dims() != dims {
        return Err(Error::Shape { expected: dims.to_vec(), found: state.dims().to_vec() });
    }
    Ok(())
}

/// XOR form of `O_V` on registers `[M, N, 2]`: flips the bit iff `x ∈ S_y`.
pub fn apply_o_v(instance: &TwoValuesInstance, state: &AmplitudeVector) -> Result<AmplitudeVector> {
    let TwoValuesParams { m, n, .. } = instance.params;
    expect_dims(state, &[m, n, 2])?;
    let mut amps = state.amps().to_vec();
    for y in 0..m {
        for &x in instance.set(y) {
            amps.swap(2 * (y * n + x), 2 * (y * n + x) + 1);
        }
    }
    AmplitudeVector::new(state.dims().to_vec(), amps)
}

/// Phase form of `O_V`: `|y,x,b⟩ ↦ (−1)^{b·[x∈S_y]}|y,x,b⟩`.
pub fn apply_o_v_phase(instance: &TwoValuesInstance, state: &AmplitudeVector) -> Result<AmplitudeVector> {
    let TwoValuesParams { m, n, .. } = instance.params;
    expect_dims(state, &[m, n, 2])?;
    let mut amps = state.amps().to_vec();
    for y in 0..m {
        for &x in instance.set(y) {
            amps[2 * (y * n + x) + 1] = -amps[2 * (y * n + x) + 1];
        }
    }
    AmplitudeVector::new(state.dims().to_vec(), amps)
}

fn reflect_block(amps: &mut [C64], set: &[usize], k: usize) {
    let scale = 1.0 / k as f64;
    let ov: C64 = set.iter().map(|&x| amps[x]).sum::<C64>() * scale;
    for &x in set {
        amps[x] -= 2.0 * ov;
    }
}

/// `O_F` on registers `[M, N]`: reflects each y-block about `|Ψ(y)⟩`.
pub fn apply_o_f(instance: &TwoValuesInstance, state: &AmplitudeVector) -> Result<AmplitudeVector> {
    let TwoValuesParams { m, n, k } = instance.params;
    expect_dims(state, &[m, n])?;
    let mut amps = state.amps().to_vec();
    for y in 0..m {
        reflect_block(&mut amps[y * n..(y + 1) * n], instance.set(y), k);
    }
    AmplitudeVector::new(state.dims().to_vec(), amps)
}

/// `O_F(y) = I − 2|Ψ(y)⟩⟨Ψ(y)|` on a single `[N]` register.
pub fn apply_o_f_y(instance: &TwoValuesInstance, y: usize, state: &AmplitudeVector) -> Result<AmplitudeVector> {
    instance.check_y(y)?;
    expect_dims(state, &[instance.params.n])?;
    let mut amps = state.amps().to_vec();
    reflect_block(&mut amps, instance.set(y), instance.params.k);
    AmplitudeVector::new(state.dims().to_vec(), amps)
}

/// `O_Ψ` on an `[M·N + 1]` register whose last index is `|⊥⟩`: swaps `|ΣΨ⟩ ↔ |⊥⟩`.
pub fn apply_o_psi(instance: &TwoValuesInstance, state: &AmplitudeVector) -> Result<AmplitudeVector> {
    let TwoValuesParams { m, n, k } = instance.params;
    let bot = m * n;
    expect_dims(state, &[bot + 1])?;
    let amp = 1.0 / ((m * k) as f64).sqrt();
    let support = || (0..m).flat_map(|y| instance.set(y).iter().map(move |&x| y * n + x));
    let mut amps = state.amps().to_vec();
    let a: C64 = support().map(|i| amps[i]).sum::<C64>() * amp;
    let b = amps[bot];
    let delta = b - a;
    for i in support() {
        amps[i] += delta * amp;
    }
    amps[bot] -= delta;
    AmplitudeVector::new(state.dims().to_vec(), amps)
}

/// Reflection access `O_F(y)` used by the Grover-style search.
pub trait ReflectionOracle {
    fn x_size(&self) -> usize;
    fn reflect(&self, y: usize, state: &AmplitudeVector) -> Result<AmplitudeVector>;
}

impl ReflectionOracle for TwoValuesInstance {
    fn x_size(&self) -> usize {
        self.params.n
    }

    fn reflect(&self, y: usize, state: &AmplitudeVector) -> Result<AmplitudeVector> {
        apply_o_f_y(self, y, state)
    }
}

/// Bit lengths of the protocol world; `l_rand` and `k` are derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorldParams {
    pub l_com: u32,
    pub l_ch: u32,
    pub l_resp: u32,
}

impl Default for WorldParams {
    fn default() -> Self {
        Self { l_com: 4, l_ch: 2, l_resp: 6 }
    }
}

impl WorldParams {
    pub fn new(l_com: u32, l_ch: u32, l_resp: u32) -> Result<Self> {
        if l_com > 16 || l_ch > 8 || l_resp == 0 || l_ch + l_resp > 20 || l_com + l_resp > 40 {
            return Err(Error::Params(format!(
                "bit lengths outside simulation budget: l_com={l_com}, l_ch={l_ch}, l_resp={l_resp}"
            )));
        }
        Ok(Self { l_com, l_ch, l_resp })
    }

    pub fn l_rand(&self) -> u32 {
        self.l_com + self.l_resp
    }

    pub fn k(&self) -> usize {
        1 << (self.l_ch + self.l_resp / 3)
    }

    pub fn x_size(&self) -> usize {
        1 << (self.l_ch + self.l_resp)
    }

    pub fn y_size(&self) -> usize {
        1 << self.l_com
    }

    pub fn challenges(&self) -> usize {
        1 << self.l_ch
    }

    pub fn positions(&self) -> u32 {
        self.l_ch + self.l_resp
    }

    pub fn two_values(&self) -> TwoValuesParams {
        TwoValuesParams { m: self.y_size(), n: self.x_size(), k: self.k() }
    }

    /// Packs `(ch, resp)` with `ch` in the low `l_ch` bits.
    pub fn pack(&self, ch: usize, resp: usize) -> usize {
        ch | (resp << self.l_ch)
    }

    pub fn unpack(&self, x: usize) -> (usize, usize) {
        (x & (self.challenges() - 1), x >> self.l_ch)
    }
}

/// `bit_p(x)` with position 1 the least significant bit.
pub fn bit(x: usize, p: u32) -> bool {
    (x >> (p - 1)) & 1 == 1
}

/// Which relation the world realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `R = {(s0, w0)}`.
    #[default]
    Statistical,
    /// `R' = ∅`.
    Computational,
}

/// Serialized form of a world.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorldDump {
    pub schema: String,
    pub seed: u64,
    pub variant: Variant,
    pub params: WorldParams,
    pub s0: u64,
    pub w0: u64,
    pub sets: Vec<Vec<usize>>,
    pub os_table: Vec<OsEntry>,
    pub op_table: Vec<OpEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OsEntry {
    pub z: u64,
    pub y: usize,
    pub x: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpEntry {
    pub com: usize,
    pub ch: usize,
    pub z: u64,
    pub resp: Option<usize>,
}

/// The full oracle world. Shareable across threads.
#[derive(Debug)]
pub struct OracleWorld {
    params: WorldParams,
    seed: u64,
    variant: Variant,
    instance: TwoValuesInstance,
    s0: u64,
    w0: u64,
    os_table: Mutex<BTreeMap<u64, (usize, usize)>>,
    op_table: Mutex<BTreeMap<(usize, usize, u64), Option<usize>>>,
    w0_reads: AtomicU64,
    oe_calls: AtomicU64,
}

impl OracleWorld {
    pub fn sample(params: WorldParams, variant: Variant, seed: u64) -> Result<Self> {
        let params = WorldParams::new(params.l_com, params.l_ch, params.l_resp)?;
        let instance = sample_instance(params.two_values(), &mut keyed_rng(seed, "instance", &[]))?;
        let w0 = keyed_rng(seed, "w0", &[]).random_range(0..1u64 << params.l_rand());
        Ok(Self::assemble(params, variant, seed, instance, w0))
    }

    fn assemble(params: WorldParams, variant: Variant, seed: u64, instance: TwoValuesInstance, w0: u64) -> Self {
        Self {
            params,
            seed,
            variant,
            instance,
            s0: 0,
            w0,
            os_table: Mutex::new(BTreeMap::new()),
            op_table: Mutex::new(BTreeMap::new()),
            w0_reads: AtomicU64::new(0),
            oe_calls: AtomicU64::new(0),
        }
    }

    pub fn params(&self) -> WorldParams {
        self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn s0(&self) -> u64 {
        self.s0
    }

    /// The hidden instance, for exact checkers and harness bookkeeping only.
    pub fn instance(&self) -> &TwoValuesInstance {
        &self.instance
    }

    /// The witness. Every call is counted by the access audit.
    pub fn w0(&self) -> u64 {
        self.w0_reads.fetch_add(1, Ordering::Relaxed);
        self.w0
    }

    pub fn w0_reads(&self) -> u64 {
        self.w0_reads.load(Ordering::Relaxed)
    }

    pub fn oe_calls(&self) -> u64 {
        self.oe_calls.load(Ordering::Relaxed)
    }

    pub fn public(&self) -> PublicOracles<'_> {
        PublicOracles { world: self }
    }

    pub fn extractor(&self) -> ExtractorOracles<'_> {
        ExtractorOracles { public: self.public() }
    }

    pub fn oracle_v(&self, y: usize, x: usize) -> bool {
        self.instance.contains(y, x)
    }

    /// `O_S(z) = (y, x)` with `y` uniform and `x` uniform in `S_y`.
    pub fn oracle_s(&self, z: u64) -> (usize, usize) {
        debug_assert!(z < 1 << self.params.l_rand());
        let mut table = self.os_table.lock().expect("table lock");
        *table.entry(z).or_insert_with(|| {
            let mut rng = keyed_rng(self.seed, "O_S", &key_bytes(&[z]));
            let y = rng.random_range(0..self.params.y_size());
            let set = self.instance.set(y);
            (y, set[rng.random_range(0..set.len())])
        })
    }

    /// Valid responses `{resp : (ch, resp) ∈ S_com}` in increasing order.
    pub fn valid_responses(&self, com: usize, ch: usize) -> Vec<usize> {
        let p = self.params;
        let mut out: Vec<usize> = self
            .instance
            .set(com)
            .iter()
            .filter_map(|&x| {
                let (c, r) = p.unpack(x);
                (c == ch).then_some(r)
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// `O_P(w, com, ch, z)`: a uniform valid response for `w = w0` (`None` is ⊥), and 0 otherwise.
    pub fn oracle_p(&self, w: u64, com: usize, ch: usize, z: u64) -> Option<usize> {
        if w != self.w0 {
            return Some(0);
        }
        let mut table = self.op_table.lock().expect("table lock");
        *table.entry((com, ch, z)).or_insert_with(|| {
            let valid = self.valid_responses(com, ch);
            if valid.is_empty() {
                return None;
            }
            let mut rng = keyed_rng(self.seed, "O_P", &key_bytes(&[com as u64, ch as u64, z]));
            Some(valid[rng.random_range(0..valid.len())])
        })
    }

    /// `O_E`: `w0` on two distinct members of `S_com`, else 0. Every call is counted.
    pub fn oracle_e(&self, com: usize, ch: usize, resp: usize, ch2: usize, resp2: usize) -> u64 {
        self.oe_calls.fetch_add(1, Ordering::Relaxed);
        let p = self.params;
        let distinct = (ch, resp) != (ch2, resp2);
        let in_range = com < p.y_size() && resp < (1 << p.l_resp) && resp2 < (1 << p.l_resp);
        let (a, b) = (p.pack(ch, resp), p.pack(ch2, resp2));
        if distinct
            && in_range
            && ch < p.challenges()
            && ch2 < p.challenges()
            && self.oracle_v(com, a)
            && self.oracle_v(com, b)
        {
            self.w0
        } else {
            0
        }
    }

    /// `O_R(s, w)`.
    pub fn oracle_r(&self, s: u64, w: u64) -> bool {
        self.variant == Variant::Statistical && s == self.s0 && w == self.w0
    }

    pub fn dump(&self) -> WorldDump {
        let os_table =
            self.os_table.lock().expect("table lock").iter().map(|(&z, &(y, x))| OsEntry { z, y, x }).collect();
        let op_table = self
            .op_table
            .lock()
            .expect("table lock")
            .iter()
            .map(|(&(com, ch, z), &resp)| OpEntry { com, ch, z, resp })
            .collect();
        WorldDump {
            schema: WORLD_SCHEMA.into(),
            seed: self.seed,
            variant: self.variant,
            params: self.params,
            s0: self.s0,
            w0: self.w0,
            sets: self.instance.sets.clone(),
            os_table,
            op_table,
        }
    }

    /// Restores a dumped world; entries not in the dump are sampled lazily from the seed as before.
    pub fn restore(dump: &WorldDump) -> Result<Self> {
        if dump.schema != WORLD_SCHEMA {
            return Err(Error::Params(format!("unknown world schema {}", dump.schema)));
        }
        let params = WorldParams::new(dump.params.l_com, dump.params.l_ch, dump.params.l_resp)?;
        let instance = TwoValuesInstance::from_sets(params.two_values(), dump.sets.clone())?;
        let world = Self::assemble(params, dump.variant, dump.seed, instance, dump.w0);
        {
            let mut os = world.os_table.lock().expect("table lock");
            for e in &dump.os_table {
                if !world.instance.contains(e.y, e.x) {
                    return Err(Error::Params(format!("O_S entry {} outside S_y", e.z)));
                }
                os.insert(e.z, (e.y, e.x));
            }
            let mut op = world.op_table.lock().expect("table lock");
            for e in &dump.op_table {
                op.insert((e.com, e.ch, e.z), e.resp);
            }
        }
        Ok(world)
    }
}

/// Oracle access granted to provers, verifiers, simulators and adversaries: everything
/// except the witness and `O_E`.
#[derive(Clone, Copy, Debug)]
pub struct PublicOracles<'a> {
    world: &'a OracleWorld,
}

impl<'a> PublicOracles<'a> {
    pub fn params(&self) -> WorldParams {
        self.world.params
    }

    pub fn s0(&self) -> u64 {
        self.world.s0
    }

    pub fn oracle_v(&self, y: usize, x: usize) -> bool {
        self.world.oracle_v(y, x)
    }

    pub fn oracle_s(&self, z: u64) -> (usize, usize) {
        self.world.oracle_s(z)
    }

    pub fn oracle_p(&self, w: u64, com: usize, ch: usize, z: u64) -> Option<usize> {
        self.world.oracle_p(w, com, ch, z)
    }

    pub fn oracle_r(&self, s: u64, w: u64) -> bool {
        self.world.oracle_r(s, w)
    }

    pub fn apply_o_v(&self, state: &AmplitudeVector) -> Result<AmplitudeVector> {
        apply_o_v(&self.world.instance, state)
    }

    pub fn apply_o_f(&self, state: &AmplitudeVector) -> Result<AmplitudeVector> {
        apply_o_f(&self.world.instance, state)
    }

    pub fn apply_o_f_y(&self, y: usize, state: &AmplitudeVector) -> Result<AmplitudeVector> {
        apply_o_f_y(&self.world.instance, y, state)
    }

    pub fn apply_o_psi(&self, state: &AmplitudeVector) -> Result<AmplitudeVector> {
        apply_o_psi(&self.world.instance, state)
    }

    /// One fresh copy of `|ΣΨ⟩` on `[M, N]`, produced as `O_Ψ|⊥⟩`.
    pub fn sigma_psi_copy(&self) -> AmplitudeVector {
        let tv = self.world.params.two_values();
        let bot = tv.m * tv.n;
        let out = self.apply_o_psi(&AmplitudeVector::basis(&[bot + 1], bot).expect("in range")).expect("shape");
        let mut amps = out.into_amps();
        amps.pop();
        AmplitudeVector::normalized(vec![tv.m, tv.n], amps).expect("O_Ψ|⊥⟩ = |ΣΨ⟩")
    }
}

impl ReflectionOracle for PublicOracles<'_> {
    fn x_size(&self) -> usize {
        self.world.params.x_size()
    }

    fn reflect(&self, y: usize, state: &AmplitudeVector) -> Result<AmplitudeVector> {
        self.apply_o_f_y(y, state)
    }
}

/// Public oracles plus `O_E`, granted to extractors only.
#[derive(Clone, Copy, Debug)]
pub struct ExtractorOracles<'a> {
    public: PublicOracles<'a>,
}

impl<'a> ExtractorOracles<'a> {
    pub fn public(&self) -> PublicOracles<'a> {
        self.public
    }

    pub fn oracle_e(&self, com: usize, ch: usize, resp: usize, ch2: usize, resp2: usize) -> u64 {
        self.public.world.oracle_e(com, ch, resp, ch2, resp2)
    }
}
