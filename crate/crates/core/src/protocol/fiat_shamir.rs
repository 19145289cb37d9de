//! Fiat-Shamir: `r` parallel repetitions with challenges `ch_1‖…‖ch_r = H(s, com*_1, …, com*_r)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::oracle::{Encoder, RandomOracle};
use crate::protocol::sigma::{
    sigma_attack_commit, sigma_attack_exact, sigma_attack_respond, sigma_prove_p1, sigma_prove_p2, sigma_verify,
    ComStar, RespStar,
};
use crate::rng::RandomSource;
use crate::world::PublicOracles;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FsProof {
    pub com_stars: Vec<ComStar>,
    pub resp_stars: Vec<RespStar>,
}

fn check_oracle(r: usize, h: &RandomOracle, oracles: &PublicOracles<'_>) -> Result<()> {
    let need = r as u32 * oracles.params().l_ch;
    if h.out_bits() != need {
        return Err(Error::Params(format!("H must output r·l_ch = {need} bits, has {}", h.out_bits())));
    }
    Ok(())
}

/// Challenges read from `H(s, com*_1, …, com*_r)`, `l_ch` bits each, first challenge lowest.
pub fn fs_challenges(s: u64, com_stars: &[ComStar], h: &RandomOracle, l_ch: u32) -> Vec<usize> {
    let mut enc = Encoder::new();
    enc.u64(s);
    for cs in com_stars {
        enc.com_star(cs);
    }
    let digest = h.query(&enc.finish());
    let mask = (1u64 << l_ch) - 1;
    (0..com_stars.len()).map(|i| ((digest >> (i as u32 * l_ch)) & mask) as usize).collect()
}

pub fn fs_prove(
    s: u64,
    w: u64,
    r: usize,
    h: &RandomOracle,
    oracles: &PublicOracles<'_>,
    rng: &mut RandomSource,
) -> Result<FsProof> {
    check_oracle(r, h, oracles)?;
    let (com_stars, states): (Vec<_>, Vec<_>) = (0..r).map(|_| sigma_prove_p1(s, w, oracles, rng)).unzip();
    let chs = fs_challenges(s, &com_stars, h, oracles.params().l_ch);
    let resp_stars =
        chs.iter().zip(&states).map(|(&ch, st)| sigma_prove_p2(ch, st).expect("challenge in range")).collect();
    Ok(FsProof { com_stars, resp_stars })
}

pub fn fs_verify(s: u64, proof: &FsProof, h: &RandomOracle, oracles: &PublicOracles<'_>) -> bool {
    let r = proof.com_stars.len();
    if proof.resp_stars.len() != r || check_oracle(r, h, oracles).is_err() {
        return false;
    }
    let chs = fs_challenges(s, &proof.com_stars, h, oracles.params().l_ch);
    (0..r).all(|i| sigma_verify(s, &proof.com_stars[i], chs[i], &proof.resp_stars[i], oracles))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FsAttackRun {
    pub proof: Option<FsProof>,
    pub accepted: bool,
    pub exact_success: f64,
}

/// Runs `A2` `r` times, derives the challenges from `H`, and answers each with `A3`.
pub fn fs_attack(
    r: usize,
    h: &RandomOracle,
    oracles: &PublicOracles<'_>,
    rng: &mut RandomSource,
) -> Result<FsAttackRun> {
    check_oracle(r, h, oracles)?;
    let s = oracles.s0();
    let (com_stars, mut advs): (Vec<_>, Vec<_>) =
        (0..r).map(|_| sigma_attack_commit(oracles, rng)).collect::<Result<Vec<_>>>()?.into_iter().unzip();
    let chs = fs_challenges(s, &com_stars, h, oracles.params().l_ch);
    let mut exact_success = 1.0;
    for (adv, &ch) in advs.iter().zip(&chs) {
        exact_success *= sigma_attack_exact(ch, adv, oracles)?;
    }
    let mut resp_stars = Vec::with_capacity(r);
    for (adv, &ch) in advs.iter_mut().zip(&chs) {
        match sigma_attack_respond(ch, adv, oracles, rng)? {
            Some(rs) => resp_stars.push(rs),
            None => return Ok(FsAttackRun { proof: None, accepted: false, exact_success }),
        }
    }
    let proof = FsProof { com_stars, resp_stars };
    let accepted = fs_verify(s, &proof, h, oracles);
    Ok(FsAttackRun { proof: Some(proof), accepted, exact_success })
}
