//! Fischlin's transform: `r` transcripts accepted when the per-transcript hashes sum to at
//! most `S`, and the attack built on the fixpoint commitment.

use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, DiscreteCDF};

use crate::commitment::{comopenstar, comstar};
use crate::error::{Error, Result};
use crate::pickone::{e1, e2, e2_exact_from, PickOneConfig};
use crate::protocol::oracle::{Encoder, RandomOracle};
use crate::protocol::sigma::{sigma_verify, ComStar, RespStar};
use crate::rng::RandomSource;
use crate::world::{PublicOracles, WorldParams};

/// Hash length `b`, repetitions `r`, sum bound `S`, challenge search length `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FischlinParams {
    pub b: u32,
    pub r: usize,
    pub s_bound: u64,
    pub t: u32,
}

impl FischlinParams {
    pub fn new(b: u32, r: usize, s_bound: u64, t: u32, world: WorldParams) -> Result<Self> {
        if b > t || t > world.l_ch || b > 63 {
            return Err(Error::Params(format!("need b ≤ t ≤ l_ch, got b={b}, t={t}, l_ch={}", world.l_ch)));
        }
        Ok(Self { b, r, s_bound, t })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FischlinProof {
    pub com_stars: Vec<ComStar>,
    pub challenges: Vec<usize>,
    pub resp_stars: Vec<RespStar>,
}

/// `H(s, (com*_j)_j, i, ch, resp*)` with `i` counted from 1.
pub fn fischlin_hash(
    s: u64,
    com_stars: &[ComStar],
    i: usize,
    ch: usize,
    resp_star: &RespStar,
    h: &RandomOracle,
) -> u64 {
    let mut enc = Encoder::new();
    enc.u64(s);
    enc.nested(|e| {
        for cs in com_stars {
            e.com_star(cs);
        }
    });
    enc.u64(i as u64).u64(ch as u64).resp_star(resp_star);
    h.query(&enc.finish())
}

/// Every transcript verifies and the hash values sum to at most `S`.
pub fn fischlin_verify(
    s: u64,
    proof: &FischlinProof,
    fp: &FischlinParams,
    h: &RandomOracle,
    oracles: &PublicOracles<'_>,
) -> bool {
    let r = fp.r;
    if h.out_bits() != fp.b || proof.com_stars.len() != r || proof.challenges.len() != r || proof.resp_stars.len() != r
    {
        return false;
    }
    let all_verify =
        (0..r).all(|i| sigma_verify(s, &proof.com_stars[i], proof.challenges[i], &proof.resp_stars[i], oracles));
    let sum: u64 =
        (0..r).map(|i| fischlin_hash(s, &proof.com_stars, i + 1, proof.challenges[i], &proof.resp_stars[i], h)).sum();
    all_verify && sum <= fp.s_bound
}

/// Search configuration for a zero hash: `n = l_com`, `δ_min = 2^{-b-1}`.
pub fn hash_search_config(world: WorldParams, fp: &FischlinParams) -> PickOneConfig {
    PickOneConfig { n: world.l_com, delta_min: 2f64.powi(-(fp.b as i32) - 1) }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FischlinAttackRun {
    pub proof: Option<FischlinProof>,
    pub accepted: bool,
    pub hash_sum: Option<u64>,
    pub exact_success: f64,
}

/// Fixes each `com_i` by splitting a `|ΣΨ⟩`, uses the fixpoint commitment in every slot, and
/// searches `S_{com_i}` for `(ch, resp)` whose hash is zero.
pub fn fischlin_attack(
    fp: &FischlinParams,
    h: &RandomOracle,
    oracles: &PublicOracles<'_>,
    rng: &mut RandomSource,
) -> Result<FischlinAttackRun> {
    let world = oracles.params();
    if h.out_bits() != fp.b {
        return Err(Error::Params(format!("H must output b = {} bits", fp.b)));
    }
    let s = oracles.s0();
    let mut anchors = Vec::with_capacity(fp.r);
    for _ in 0..fp.r {
        anchors.push(e1(&oracles.sigma_psi_copy(), rng)?);
    }
    let com_stars: Vec<ComStar> = anchors
        .iter()
        .map(|&(com, _)| ComStar { com, commitments: vec![comstar(com, world); world.challenges()] })
        .collect();
    let config = hash_search_config(world, fp);
    let tables: Vec<Vec<bool>> = (0..fp.r)
        .map(|i| {
            (0..world.x_size())
                .map(|x| {
                    let (ch, resp) = world.unpack(x);
                    let rs = RespStar { resp, opening: comopenstar(ch, resp, world) };
                    fischlin_hash(s, &com_stars, i + 1, ch, &rs, h) == 0
                })
                .collect()
        })
        .collect();
    let mut exact_success = 1.0;
    for (i, (com, psi)) in anchors.iter().enumerate() {
        let pred = |x: usize| tables[i][x];
        exact_success *= e2_exact_from(config, *com, psi, &pred, oracles)?;
    }
    let mut challenges = Vec::with_capacity(fp.r);
    let mut resp_stars = Vec::with_capacity(fp.r);
    for (i, (com, psi)) in anchors.into_iter().enumerate() {
        let pred = |x: usize| tables[i][x];
        let run = e2(config, com, psi, &pred, oracles, rng)?;
        let Some(x) = run.found else {
            return Ok(FischlinAttackRun { proof: None, accepted: false, hash_sum: None, exact_success });
        };
        let (ch, resp) = world.unpack(x);
        challenges.push(ch);
        resp_stars.push(RespStar { resp, opening: comopenstar(ch, resp, world) });
    }
    let proof = FischlinProof { com_stars, challenges, resp_stars };
    let hash_sum = (0..fp.r)
        .map(|i| fischlin_hash(s, &proof.com_stars, i + 1, proof.challenges[i], &proof.resp_stars[i], h))
        .sum();
    let accepted = fischlin_verify(s, &proof, fp, h, oracles);
    Ok(FischlinAttackRun { proof: Some(proof), accepted, hash_sum: Some(hash_sum), exact_success })
}

/// Lower bound `p_s = 1 − r·2^{-l_com} − r·P[Bin(k, 2^{-b}) < k·2^{-b-1}]` on the attack's
/// acceptance. The zero-hash count over `S_com` is binomial because `H` is independent per input.
pub fn fischlin_success_bound(world: WorldParams, fp: &FischlinParams) -> Result<f64> {
    let k = world.k() as u64;
    let q = 2f64.powi(-(fp.b as i32));
    let bin = Binomial::new(q, k).map_err(|e| Error::Params(e.to_string()))?;
    let threshold = k as f64 * q / 2.0;
    // P[X < threshold] = P[X ≤ ⌈threshold⌉ − 1].
    let below = if threshold <= 0.0 { 0.0 } else { bin.cdf(threshold.ceil() as u64 - 1) };
    let r = fp.r as f64;
    Ok(1.0 - r * 2f64.powi(-(world.l_com as i32)) - r * below)
}
