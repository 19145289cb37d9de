//! The sigma-protocol over the oracle world, its simulator and extractor, and the
//! pick-one attack that convinces the verifier without the witness.

use serde::{Deserialize, Serialize};

use crate::commitment::{
    attack_b1, attack_b2, attack_b2_exact, commit, message_bits, verify as com_verify, Commitment, EquivocationState,
    Opening,
};
use crate::error::{Error, Result};
use crate::pickone::{e1, e2, e2_exact_from, PickOneConfig};
use crate::protocol::oracle::Encoder;
use crate::rng::RandomSource;
use crate::sim::AmplitudeVector;
use crate::world::{ExtractorOracles, PublicOracles, WorldParams};

/// First message: `com` and one commitment per challenge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComStar {
    pub com: usize,
    pub commitments: Vec<Commitment>,
}

/// Third message: `resp` and the opening of `c_ch`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RespStar {
    pub resp: usize,
    pub opening: Opening,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaTranscript {
    pub com_star: ComStar,
    pub ch: usize,
    pub resp_star: RespStar,
}

impl Encoder {
    pub fn com_star(&mut self, cs: &ComStar) -> &mut Self {
        self.nested(|e| {
            e.u64(cs.com as u64).u64(cs.commitments.len() as u64);
            for c in &cs.commitments {
                e.commitment(c);
            }
        })
    }

    pub fn resp_star(&mut self, rs: &RespStar) -> &mut Self {
        self.nested(|e| {
            e.u64(rs.resp as u64).opening(&rs.opening);
        })
    }
}

/// Honest prover state between the first and third message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProverState {
    slots: Vec<RespStar>,
    missing: Vec<bool>,
}

impl ProverState {
    /// Challenges for which `O_P` returned ⊥ and a placeholder was committed.
    pub fn missing(&self) -> Vec<usize> {
        self.missing.iter().enumerate().filter_map(|(c, &m)| m.then_some(c)).collect()
    }
}

/// `P1`: `com` uniform; per challenge `resp_ch = O_P(w, com, ch, z_ch)` committed bitwise.
/// A ⊥ answer commits to the all-zero placeholder.
pub fn sigma_prove_p1(_s: u64, w: u64, oracles: &PublicOracles<'_>, rng: &mut RandomSource) -> (ComStar, ProverState) {
    let p = oracles.params();
    let com = rng.index(p.y_size());
    let mut commitments = Vec::with_capacity(p.challenges());
    let mut slots = Vec::with_capacity(p.challenges());
    let mut missing = Vec::with_capacity(p.challenges());
    for ch in 0..p.challenges() {
        let z = rng.below(1 << p.l_rand());
        let answer = oracles.oracle_p(w, com, ch, z);
        let resp = answer.unwrap_or(0);
        let (c, u) = commit(&message_bits(resp, p.l_resp), oracles, rng);
        commitments.push(c);
        slots.push(RespStar { resp, opening: u });
        missing.push(answer.is_none());
    }
    (ComStar { com, commitments }, ProverState { slots, missing })
}

/// `P2`: reveals the slot for `ch`.
pub fn sigma_prove_p2(ch: usize, state: &ProverState) -> Option<RespStar> {
    state.slots.get(ch).cloned()
}

/// `O_V(com, ch, resp) = 1`, `s = s0` and the opening of `c_ch` verifies for `resp`.
pub fn sigma_verify(s: u64, com_star: &ComStar, ch: usize, resp_star: &RespStar, oracles: &PublicOracles<'_>) -> bool {
    let p = oracles.params();
    s == oracles.s0()
        && ch < p.challenges()
        && com_star.com < p.y_size()
        && com_star.commitments.len() == p.challenges()
        && resp_star.resp < 1 << p.l_resp
        && oracles.oracle_v(com_star.com, p.pack(ch, resp_star.resp))
        && com_verify(&com_star.commitments[ch], &message_bits(resp_star.resp, p.l_resp), &resp_star.opening, oracles)
}

/// Special-soundness extractor: forwards the inner values to `O_E`; `None` when it answers 0.
pub fn sigma_extract(
    _s: u64,
    com_star: &ComStar,
    ch: usize,
    resp_star: &RespStar,
    ch2: usize,
    resp_star2: &RespStar,
    ext: &ExtractorOracles<'_>,
) -> Option<u64> {
    let w = ext.oracle_e(com_star.com, ch, resp_star.resp, ch2, resp_star2.resp);
    (w != 0).then_some(w)
}

/// HVZK simulator: `(com, ch, resp)` from `O_S`, the opened slot commits to `resp` and the
/// others to the all-zero string.
pub fn sigma_simulate(_s: u64, oracles: &PublicOracles<'_>, rng: &mut RandomSource) -> SigmaTranscript {
    let p = oracles.params();
    let z = rng.below(1 << p.l_rand());
    let (com, x) = oracles.oracle_s(z);
    let (ch, resp) = p.unpack(x);
    let mut commitments = Vec::with_capacity(p.challenges());
    let mut opened = None;
    for c in 0..p.challenges() {
        let value = if c == ch { resp } else { 0 };
        let (cm, u) = commit(&message_bits(value, p.l_resp), oracles, rng);
        if c == ch {
            opened = Some(u);
        }
        commitments.push(cm);
    }
    SigmaTranscript {
        com_star: ComStar { com, commitments },
        ch,
        resp_star: RespStar { resp, opening: opened.expect("challenge slot exists") },
    }
}

/// Search configuration for the challenge-matching step: `n = l_com`, `δ_min = 2^{-l_ch-1}`.
pub fn challenge_search_config(p: WorldParams) -> PickOneConfig {
    PickOneConfig { n: p.l_com, delta_min: 2f64.powi(-(p.l_ch as i32) - 1) }
}

fn challenge_predicate(p: WorldParams, ch: usize) -> impl Fn(usize) -> bool {
    move |x| p.unpack(x).0 == ch
}

/// Malicious prover state between its first message and the challenge.
#[derive(Clone, Debug)]
pub struct SigmaAdversary {
    com: usize,
    psi: AmplitudeVector,
    slots: Vec<EquivocationState>,
}

/// `A2`: split one `|ΣΨ⟩` to fix `com`; equivocal commitments for every challenge slot.
pub fn sigma_attack_commit(oracles: &PublicOracles<'_>, rng: &mut RandomSource) -> Result<(ComStar, SigmaAdversary)> {
    let p = oracles.params();
    let (com, psi) = e1(&oracles.sigma_psi_copy(), rng)?;
    let mut commitments = Vec::with_capacity(p.challenges());
    let mut slots = Vec::with_capacity(p.challenges());
    for _ in 0..p.challenges() {
        let (c, st) = attack_b1(p.l_resp as usize, oracles, rng)?;
        commitments.push(c);
        slots.push(st);
    }
    Ok((ComStar { com, commitments }, SigmaAdversary { com, psi, slots }))
}

/// Exact probability that [`sigma_attack_respond`] succeeds on `ch` from the current state.
pub fn sigma_attack_exact(ch: usize, adv: &SigmaAdversary, oracles: &PublicOracles<'_>) -> Result<f64> {
    let p = oracles.params();
    let slot = adv.slots.get(ch).ok_or(Error::OutOfRange { value: ch as u64, limit: p.challenges() as u64 })?;
    let search = e2_exact_from(challenge_search_config(p), adv.com, &adv.psi, &challenge_predicate(p, ch), oracles)?;
    if search == 0.0 {
        return Ok(0.0);
    }
    let len = p.l_resp as usize;
    let zeros = attack_b2_exact(&vec![false; len], slot, oracles)?;
    let ones = attack_b2_exact(&vec![true; len], slot, oracles)?;
    // Given success, the found element is uniform over S_com restricted to challenge ch.
    let support: Vec<usize> = (0..1usize << p.l_resp).filter(|&r| oracles.oracle_v(adv.com, p.pack(ch, r))).collect();
    let open: f64 = support
        .iter()
        .map(|&r| {
            message_bits(r, p.l_resp)
                .iter()
                .enumerate()
                .map(|(i, &b)| if b { ones[i] } else { zeros[i] })
                .product::<f64>()
        })
        .sum::<f64>()
        / support.len() as f64;
    Ok(search * open)
}

/// `A3`: find `(ch, resp) ∈ S_com` for the given challenge, then open `c_ch` to `resp`.
pub fn sigma_attack_respond(
    ch: usize,
    adv: &mut SigmaAdversary,
    oracles: &PublicOracles<'_>,
    rng: &mut RandomSource,
) -> Result<Option<RespStar>> {
    let p = oracles.params();
    if ch >= adv.slots.len() {
        return Ok(None);
    }
    let psi = std::mem::replace(&mut adv.psi, AmplitudeVector::basis(&[1], 0)?);
    let run = e2(challenge_search_config(p), adv.com, psi, &challenge_predicate(p, ch), oracles, rng)?;
    adv.psi = run.state;
    let Some(x) = run.found else { return Ok(None) };
    let resp = p.unpack(x).1;
    let opening = attack_b2(&message_bits(resp, p.l_resp), &mut adv.slots[ch], oracles, rng)?;
    Ok(opening.opening().map(|opening| RespStar { resp, opening }))
}

/// One interactive run of the attack against an honest verifier.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaAttackRun {
    pub com_star: ComStar,
    pub ch: usize,
    pub resp_star: Option<RespStar>,
    pub accepted: bool,
    pub exact_success: f64,
}

pub fn sigma_attack(oracles: &PublicOracles<'_>, rng: &mut RandomSource) -> Result<SigmaAttackRun> {
    let (com_star, mut adv) = sigma_attack_commit(oracles, rng)?;
    let ch = rng.index(oracles.params().challenges());
    let exact_success = sigma_attack_exact(ch, &adv, oracles)?;
    let resp_star = sigma_attack_respond(ch, &mut adv, oracles, rng)?;
    let accepted = resp_star.as_ref().is_some_and(|rs| sigma_verify(oracles.s0(), &com_star, ch, rs, oracles));
    Ok(SigmaAttackRun { com_star, ch, resp_star, accepted, exact_success })
}

/// Budgets for the naive extractor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractorBudget {
    pub q_v: u32,
    pub q_s: u32,
}

/// Naive extractor: keeps the prover's `(ch, resp)` if it lies in `S_com`, spends `q_s`
/// `O_S` samples and `q_v` uniform `O_V` probes looking for a second member of `S_com`,
/// and asks `O_E` once two distinct members are known.
pub fn naive_extract(
    com: usize,
    ch: usize,
    resp: usize,
    budget: ExtractorBudget,
    ext: &ExtractorOracles<'_>,
    rng: &mut RandomSource,
) -> Option<u64> {
    let public = ext.public();
    let p = public.params();
    let mut known: Vec<usize> = Vec::with_capacity(2);
    let note = |x: usize, known: &mut Vec<usize>| {
        if known.len() < 2 && !known.contains(&x) && public.oracle_v(com, x) {
            known.push(x);
        }
    };
    if ch < p.challenges() && resp < 1 << p.l_resp {
        note(p.pack(ch, resp), &mut known);
    }
    for _ in 0..budget.q_s {
        let (y, x) = public.oracle_s(rng.below(1 << p.l_rand()));
        if y == com {
            note(x, &mut known);
        }
    }
    for _ in 0..budget.q_v {
        note(rng.index(p.x_size()), &mut known);
    }
    if known.len() < 2 {
        return None;
    }
    let ((c1, r1), (c2, r2)) = (p.unpack(known[0]), p.unpack(known[1]));
    let w = ext.oracle_e(com, c1, r1, c2, r2);
    (w != 0).then_some(w)
}

/// Exact probability that [`naive_extract`] with `q_s = 0` reaches two distinct members of
/// `S_com`, given whether the prover's pair is already a member.
pub fn naive_extract_exact(prover_pair_valid: bool, k: usize, n: usize, q_v: u32) -> f64 {
    let (k, n, q) = (k as f64, n as f64, q_v as i32);
    if prover_pair_valid {
        1.0 - (1.0 - (k - 1.0) / n).powi(q)
    } else {
        let none = (1.0 - k / n).powi(q);
        let exactly_one = k * ((1.0 - (k - 1.0) / n).powi(q) - none);
        1.0 - none - exactly_one
    }
}
