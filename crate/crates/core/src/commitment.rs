//! The bad commitment scheme, its equivocation attack, and the fixpoint commitment used
//! against Fischlin's construction.
//!
//! A commitment to bit `m_i` anchors an `O_S` sample `(y_i, x_i)` and publishes
//! `b_i = m_i ⊕ bit_{p_i}(x_i)`; the opening is `x_i`.

use serde::{Deserialize, Serialize};
use statrs::distribution::{Discrete, Hypergeometric};

use crate::error::{Error, Result};
use crate::pickone::{e1, e2, e2_exact_from, PickOneConfig};
use crate::rng::RandomSource;
use crate::sim::AmplitudeVector;
use crate::world::{bit, PublicOracles, WorldParams};

/// Promised predicate fraction used when opening a single bit.
pub const OPEN_DELTA_MIN: f64 = 1.0 / 3.0;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Commitment {
    pub positions: Vec<u32>,
    pub anchors: Vec<usize>,
    pub masks: Vec<bool>,
}

impl Commitment {
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    fn well_formed(&self) -> bool {
        self.positions.len() == self.masks.len() && self.anchors.len() == self.masks.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Opening {
    pub elements: Vec<usize>,
}

/// `len` bits of `value`, least significant first.
pub fn message_bits(value: usize, len: u32) -> Vec<bool> {
    (0..len).map(|i| (value >> i) & 1 == 1).collect()
}

/// Honest commitment: `z_i` uniform, `(y_i, x_i) = O_S(z_i)`, `p_i` uniform, `b_i = m_i ⊕ bit_{p_i}(x_i)`.
pub fn commit(m: &[bool], oracles: &PublicOracles<'_>, rng: &mut RandomSource) -> (Commitment, Opening) {
    let p = oracles.params();
    let mut c = Commitment { positions: vec![], anchors: vec![], masks: vec![] };
    let mut u = Opening { elements: vec![] };
    for &mi in m {
        let z = rng.below(1 << p.l_rand());
        let (y, x) = oracles.oracle_s(z);
        let pos = 1 + rng.below(p.positions() as u64) as u32;
        c.positions.push(pos);
        c.anchors.push(y);
        c.masks.push(mi ^ bit(x, pos));
        u.elements.push(x);
    }
    (c, u)
}

/// Accepts iff shapes match, every `x_i ∈ S_{y_i}` and every mask equation holds.
pub fn verify(c: &Commitment, m: &[bool], u: &Opening, oracles: &PublicOracles<'_>) -> bool {
    let p = oracles.params();
    if !c.well_formed() || m.len() != c.len() || u.elements.len() != c.len() {
        return false;
    }
    (0..c.len()).all(|i| {
        let (pos, y, x) = (c.positions[i], c.anchors[i], u.elements[i]);
        (1..=p.positions()).contains(&pos)
            && y < p.y_size()
            && x < p.x_size()
            && oracles.oracle_v(y, x)
            && c.masks[i] == (m[i] ^ bit(x, pos))
    })
}

/// Per-bit state the equivocating committer keeps between commit and open.
#[derive(Clone, Debug, PartialEq)]
pub struct BitEquivocation {
    pub anchor: usize,
    pub position: u32,
    pub mask: bool,
    pub state: AmplitudeVector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivocationState {
    pub bits: Vec<BitEquivocation>,
}

/// Commits to `len` unknown bits: `y_i` from splitting a fresh `|ΣΨ⟩`, `p_i` and `b_i` uniform.
pub fn attack_b1(
    len: usize,
    oracles: &PublicOracles<'_>,
    rng: &mut RandomSource,
) -> Result<(Commitment, EquivocationState)> {
    let p = oracles.params();
    let mut c = Commitment { positions: vec![], anchors: vec![], masks: vec![] };
    let mut bits = Vec::with_capacity(len);
    for _ in 0..len {
        let (y, state) = e1(&oracles.sigma_psi_copy(), rng)?;
        let position = 1 + rng.below(p.positions() as u64) as u32;
        let mask = rng.bit();
        c.positions.push(position);
        c.anchors.push(y);
        c.masks.push(mask);
        bits.push(BitEquivocation { anchor: y, position, mask, state });
    }
    Ok((c, EquivocationState { bits }))
}

/// Per-bit result of an equivocal opening; `None` marks a failed search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivocalOpening {
    pub elements: Vec<Option<usize>>,
}

impl EquivocalOpening {
    pub fn opening(&self) -> Option<Opening> {
        self.elements.iter().copied().collect::<Option<Vec<_>>>().map(|elements| Opening { elements })
    }

    pub fn failures(&self) -> usize {
        self.elements.iter().filter(|e| e.is_none()).count()
    }
}

fn open_config(p: WorldParams) -> PickOneConfig {
    PickOneConfig { n: p.l_com, delta_min: OPEN_DELTA_MIN }
}

fn open_predicate(b: &BitEquivocation, mi: bool) -> impl Fn(usize) -> bool {
    let (pos, target) = (b.position, b.mask ^ mi);
    move |x| bit(x, pos) == target
}

/// Opens to `m` by searching each `S_{y_i}` for `x` with `bit_{p_i}(x) = b_i ⊕ m_i`.
/// The per-bit states are consumed and replaced by the post-search states.
pub fn attack_b2(
    m: &[bool],
    state: &mut EquivocationState,
    oracles: &PublicOracles<'_>,
    rng: &mut RandomSource,
) -> Result<EquivocalOpening> {
    if m.len() != state.bits.len() {
        return Err(Error::Params(format!(
            "message length {} differs from committed length {}",
            m.len(),
            state.bits.len()
        )));
    }
    let config = open_config(oracles.params());
    let mut elements = Vec::with_capacity(m.len());
    for (b, &mi) in state.bits.iter_mut().zip(m) {
        let pred = open_predicate(b, mi);
        let start = std::mem::replace(&mut b.state, AmplitudeVector::basis(&[1], 0)?);
        let run = e2(config, b.anchor, start, &pred, oracles, rng)?;
        b.state = run.state;
        elements.push(run.found);
    }
    Ok(EquivocalOpening { elements })
}

/// Exact per-bit success probabilities of [`attack_b2`] from the current states.
pub fn attack_b2_exact(m: &[bool], state: &EquivocationState, oracles: &PublicOracles<'_>) -> Result<Vec<f64>> {
    if m.len() != state.bits.len() {
        return Err(Error::Params("message length differs from committed length".into()));
    }
    let config = open_config(oracles.params());
    state
        .bits
        .iter()
        .zip(m)
        .map(|(b, &mi)| e2_exact_from(config, b.anchor, &b.state, &open_predicate(b, mi), oracles))
        .collect()
}

/// Fixpoint commitment to an `l_resp`-bit message anchored at `com`: `p_i = l_ch + i`, `b_i = 0`.
pub fn comstar(com: usize, params: WorldParams) -> Commitment {
    let len = params.l_resp as usize;
    Commitment {
        positions: (1..=params.l_resp).map(|i| params.l_ch + i).collect(),
        anchors: vec![com; len],
        masks: vec![false; len],
    }
}

/// Opening of [`comstar`] to `resp`: every `x_i` is the packed `(ch, resp)`.
pub fn comopenstar(ch: usize, resp: usize, params: WorldParams) -> Opening {
    Opening { elements: vec![params.pack(ch, resp); params.l_resp as usize] }
}

/// Hiding bound `2|m|(μ1 + μ2)` for a one-bit message.
pub fn hiding_bound(params: WorldParams) -> f64 {
    let k = params.k() as f64;
    let mu1 = 2f64.powf((params.l_com as f64 - params.l_rand() as f64) / 2.0 - 1.0) * k.sqrt();
    let mu2 = 1.0 / (2.0 * k.sqrt());
    2.0 * (mu1 + mu2)
}

/// Exact `SD((O, c), (O, c'))` for one-bit commitments to 0 and 1, with the world
/// marginalized analytically.
///
/// Given the world, the distance is `(1/(L·Z)) Σ_{y,p} |n_{y,p,0} − n_{y,p,1}|`, where
/// `n_{y,p,v}` counts `z` with `O_S(z) = (y, x)` and `bit_p(x) = v`. Each `z` contributes
/// `±1` or 0 independently given the instance, and the number of elements of `S_y` with a
/// given bit is hypergeometric.
pub fn hiding_distance_exact(params: WorldParams) -> Result<f64> {
    if params.l_rand() > 12 {
        return Err(Error::Budget(format!("l_rand = {} exceeds exact hiding budget 12", params.l_rand())));
    }
    let tv = params.two_values();
    let (m, n, k) = (tv.m as f64, tv.n as u64, tv.k as u64);
    let z = 1usize << params.l_rand();
    let hyp = Hypergeometric::new(n, n / 2, k).map_err(|e| Error::Params(e.to_string()))?;
    let mut expected_abs = 0.0;
    for c in 0..=k {
        let w = hyp.pmf(c);
        if w == 0.0 {
            continue;
        }
        let f = c as f64 / k as f64;
        let (up, down) = ((1.0 - f) / m, f / m);
        let stay = 1.0 - up - down;
        let mut dist = vec![0.0f64; 2 * z + 1];
        dist[z] = 1.0;
        for step in 0..z {
            let mut next = vec![0.0f64; 2 * z + 1];
            for s in (z - step)..=(z + step) {
                let v = dist[s];
                if v == 0.0 {
                    continue;
                }
                next[s + 1] += v * up;
                next[s - 1] += v * down;
                next[s] += v * stay;
            }
            dist = next;
        }
        let e: f64 = dist.iter().enumerate().map(|(s, &v)| v * (s as f64 - z as f64).abs()).sum();
        expected_abs += w * e;
    }
    Ok(m * expected_abs / z as f64)
}

/// The same distance by brute-force enumeration of every instance and every `O_S` table.
pub fn hiding_distance_enumerated(params: WorldParams) -> Result<f64> {
    let tv = params.two_values();
    let z = 1usize << params.l_rand();
    let subsets: Vec<Vec<usize>> = k_subsets(tv.n, tv.k);
    let instances = (subsets.len() as f64).powi(tv.m as i32);
    let entries = (tv.m * tv.k) as f64;
    if instances * entries.powi(z as i32) > 2e6 {
        return Err(Error::Budget("world enumeration too large".into()));
    }
    let l = params.positions() as usize;
    let mut total = 0.0;
    let mut inst_idx = vec![0usize; tv.m];
    loop {
        let sets: Vec<&Vec<usize>> = inst_idx.iter().map(|&i| &subsets[i]).collect();
        let mut table = vec![0usize; z];
        loop {
            let mut diff = vec![0i64; tv.m * l];
            for &e in &table {
                let (y, x) = (e / tv.k, sets[e / tv.k][e % tv.k]);
                for p in 0..l {
                    diff[y * l + p] += if bit(x, p as u32 + 1) { -1 } else { 1 };
                }
            }
            total += diff.iter().map(|d| d.unsigned_abs() as f64).sum::<f64>() / (l * z) as f64;
            if !advance(&mut table, tv.m * tv.k) {
                break;
            }
        }
        if !advance(&mut inst_idx, subsets.len()) {
            break;
        }
    }
    Ok(total / (instances * entries.powi(z as i32)))
}

fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0usize..1 << n)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..n).filter(|i| (s >> i) & 1 == 1).collect())
        .collect()
}
