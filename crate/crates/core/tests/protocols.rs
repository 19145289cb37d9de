use std::collections::HashMap;

use pickone_core::commitment::{commit, message_bits};
use pickone_core::pickone::{collision_experiment, e2_exact_success, CollisionStrategy};
use pickone_core::protocol::fiat_shamir::{fs_attack, fs_challenges, fs_prove, fs_verify};
use pickone_core::protocol::fischlin::{
    fischlin_attack, fischlin_hash, fischlin_success_bound, fischlin_verify, FischlinParams, FischlinProof,
};
use pickone_core::protocol::oracle::{Encoder, RandomOracle};
use pickone_core::protocol::sigma::{
    challenge_search_config, naive_extract, naive_extract_exact, sigma_attack, sigma_extract, sigma_prove_p1,
    sigma_prove_p2, sigma_simulate, sigma_verify, ComStar, ExtractorBudget, RespStar,
};
use pickone_core::protocol::total_break_metrics;
use pickone_core::report::{BreakClass, ExactRate};
use pickone_core::sim::statistical_distance;
use pickone_core::stats::chi_square_within_3sigma;
use pickone_core::world::{OracleWorld, Variant, WorldParams};
use pickone_core::RandomSource;

fn world(params: WorldParams, seed: u64) -> OracleWorld {
    OracleWorld::sample(params, Variant::Statistical, seed).unwrap()
}

/// A world whose witness is nonzero, so `O_E`'s answer cannot be confused with failure.
fn world_nonzero_witness(params: WorldParams, from: u64) -> OracleWorld {
    (from..).map(|s| world(params, s)).find(|w| w.w0() != 0).unwrap()
}

/// Accepting transcript for a given member `(ch, resp)` of `S_com`.
fn transcript(w: &OracleWorld, com: usize, ch: usize, resp: usize, rng: &mut RandomSource) -> (ComStar, RespStar) {
    let p = w.params();
    let mut commitments = Vec::new();
    let mut opening = None;
    for c in 0..p.challenges() {
        let (cm, u) = commit(&message_bits(if c == ch { resp } else { 0 }, p.l_resp), &w.public(), rng);
        if c == ch {
            opening = Some(u);
        }
        commitments.push(cm);
    }
    (ComStar { com, commitments }, RespStar { resp, opening: opening.unwrap() })
}

#[test]
fn honest_prover_meets_completeness_bound() {
    let params = WorldParams::default();
    let bound = 1.0 - (-(2f64.powi((params.l_resp / 3) as i32))).exp();
    let trials = 2000u64;
    let mut ok = 0u64;
    for t in 0..trials {
        let w = world(params, t);
        let mut rng = RandomSource::for_trial(1, t);
        let w0 = w.w0();
        let (cs, st) = sigma_prove_p1(w.s0(), w0, &w.public(), &mut rng);
        let ch = rng.index(params.challenges());
        let rs = sigma_prove_p2(ch, &st).unwrap();
        let accepted = sigma_verify(w.s0(), &cs, ch, &rs, &w.public());
        assert_eq!(accepted, !st.missing().contains(&ch));
        ok += accepted as u64;
    }
    let rate = ok as f64 / trials as f64;
    assert!(rate >= bound - 3.0 * (bound * (1.0 - bound) / trials as f64).sqrt(), "{rate} < {bound}");
}

#[test]
fn wrong_witness_commits_to_zero_response() {
    let params = WorldParams::default();
    for t in 0..200u64 {
        let w = world(params, t);
        let mut rng = RandomSource::for_trial(2, t);
        let wrong = w.w0() ^ 1;
        let (cs, st) = sigma_prove_p1(w.s0(), wrong, &w.public(), &mut rng);
        let ch = rng.index(params.challenges());
        let rs = sigma_prove_p2(ch, &st).unwrap();
        assert_eq!(rs.resp, 0);
        let accepted = sigma_verify(w.s0(), &cs, ch, &rs, &w.public());
        assert_eq!(accepted, w.oracle_v(cs.com, params.pack(ch, 0)));
    }
}

#[test]
fn prover_commitment_index_is_uniform() {
    let params = WorldParams::new(4, 1, 3).unwrap();
    let w = world(params, 3);
    let mut rng = RandomSource::new(3);
    let mut counts = vec![0u64; params.y_size()];
    for _ in 0..10_000 {
        counts[sigma_prove_p1(w.s0(), w.w0(), &w.public(), &mut rng).0.com] += 1;
    }
    assert!(chi_square_within_3sigma(&counts, &[1.0 / 16.0; 16]), "{counts:?}");
}

#[test]
fn verifier_rejects_forged_responses() {
    let params = WorldParams::default();
    let w = world(params, 4);
    let o = w.public();
    let mut rng = RandomSource::new(4);
    let com = 3;
    let members: Vec<usize> = w.instance().set(com).to_vec();
    let (ch, resp) = params.unpack(members[0]);
    let (cs, rs) = transcript(&w, com, ch, resp, &mut rng);
    assert!(sigma_verify(w.s0(), &cs, ch, &rs, &o));
    assert!(!sigma_verify(w.s0() + 1, &cs, ch, &rs, &o));

    let outside = (0..1 << params.l_resp).find(|&r| !w.oracle_v(com, params.pack(ch, r))).unwrap();
    assert!(!sigma_verify(w.s0(), &cs, ch, &RespStar { resp: outside, opening: rs.opening.clone() }, &o));

    let other = members.iter().map(|&x| params.unpack(x)).find(|&(c, r)| c == ch && r != resp);
    if let Some((_, r2)) = other {
        assert!(!sigma_verify(w.s0(), &cs, ch, &RespStar { resp: r2, opening: rs.opening.clone() }, &o));
    }
}

#[test]
fn extractor_recovers_witness_from_distinct_challenges() {
    let params = WorldParams::default();
    let w = world_nonzero_witness(params, 10);
    let mut rng = RandomSource::new(5);
    let w0 = w.w0();
    let mut done = 0;
    for t in 0..200u64 {
        let (cs, st) = sigma_prove_p1(w.s0(), w0, &w.public(), &mut RandomSource::for_trial(5, t));
        let (a, b) = (0, 1 + rng.index(params.challenges() - 1));
        if st.missing().contains(&a) || st.missing().contains(&b) {
            continue;
        }
        let (ra, rb) = (sigma_prove_p2(a, &st).unwrap(), sigma_prove_p2(b, &st).unwrap());
        assert!(sigma_verify(w.s0(), &cs, a, &ra, &w.public()) && sigma_verify(w.s0(), &cs, b, &rb, &w.public()));
        let out = sigma_extract(w.s0(), &cs, a, &ra, b, &rb, &w.extractor()).unwrap();
        assert!(w.oracle_r(w.s0(), out));
        assert_eq!(sigma_extract(w.s0(), &cs, a, &ra, a, &ra, &w.extractor()), None);
        done += 1;
    }
    assert!(done > 100);
}

#[test]
fn special_soundness_is_perfect_on_every_accepting_pair() {
    let params = WorldParams::new(3, 2, 4).unwrap();
    for seed in [0u64, 100, 200] {
        let w = world_nonzero_witness(params, seed);
        let mut rng = RandomSource::new(seed);
        let mut pairs = 0;
        for com in 0..params.y_size() {
            let members: Vec<(usize, usize)> = w.instance().set(com).iter().map(|&x| params.unpack(x)).collect();
            for &(c1, r1) in &members {
                for &(c2, r2) in members.iter().filter(|&&(c2, _)| c2 != c1) {
                    let (cs, rs1) = transcript(&w, com, c1, r1, &mut rng);
                    let (_, rs2) = transcript(&w, com, c2, r2, &mut rng);
                    assert!(sigma_verify(w.s0(), &cs, c1, &rs1, &w.public()));
                    assert_eq!(sigma_extract(w.s0(), &cs, c1, &rs1, c2, &rs2, &w.extractor()), Some(w.w0()));
                    pairs += 1;
                }
            }
        }
        assert!(pairs > 0);
    }
}

#[test]
fn extractor_never_outputs_witness_without_a_genuine_collision() {
    let params = WorldParams::new(3, 2, 4).unwrap();
    let w = world_nonzero_witness(params, 50);
    let mut rng = RandomSource::new(6);
    for _ in 0..2000 {
        let com = rng.index(params.y_size());
        let (c1, r1, c2, r2) = (rng.index(4), rng.index(16), rng.index(4), rng.index(16));
        let cs = ComStar { com, commitments: vec![] };
        let rs = |r| RespStar { resp: r, opening: pickone_core::commitment::Opening { elements: vec![] } };
        let out = sigma_extract(w.s0(), &cs, c1, &rs(r1), c2, &rs(r2), &w.extractor());
        let genuine =
            (c1, r1) != (c2, r2) && w.oracle_v(com, params.pack(c1, r1)) && w.oracle_v(com, params.pack(c2, r2));
        assert_eq!(out.is_some(), genuine);
    }
}

#[test]
fn simulated_transcripts_verify() {
    let params = WorldParams::default();
    for t in 0..300u64 {
        let w = world(params, t);
        let tr = sigma_simulate(w.s0(), &w.public(), &mut RandomSource::for_trial(7, t));
        assert!(sigma_verify(w.s0(), &tr.com_star, tr.ch, &tr.resp_star, &w.public()));
    }
}

/// Exact distributions of the `(com, ch, resp)` triple, real versus simulated, for one world.
fn triple_distributions(w: &OracleWorld) -> (Vec<f64>, Vec<f64>) {
    let p = w.params();
    let z = 1u64 << p.l_rand();
    let cells = p.y_size() * p.x_size() + 1;
    let (mut real, mut sim) = (vec![0.0; cells], vec![0.0; cells]);
    let w0 = w.w0();
    let unit = 1.0 / (p.y_size() * p.challenges()) as f64 / z as f64;
    for com in 0..p.y_size() {
        for ch in 0..p.challenges() {
            for zi in 0..z {
                match w.oracle_p(w0, com, ch, zi) {
                    Some(r) => real[com * p.x_size() + p.pack(ch, r)] += unit,
                    None => real[cells - 1] += unit,
                }
            }
        }
    }
    for zi in 0..z {
        let (com, x) = w.oracle_s(zi);
        sim[com * p.x_size() + x] += 1.0 / z as f64;
    }
    (real, sim)
}

#[test]
fn simulation_distance_is_within_bound() {
    let params = WorldParams::new(3, 1, 6).unwrap();
    let k = params.k() as f64;
    let (lc, lr, lrand) = (params.l_ch as f64, params.l_resp as f64, params.l_rand() as f64);
    let e1 = 0.5 * (2f64.powf(lr) / 2f64.powf(lrand)).sqrt();
    let e2 = 2.0 * k * k / 2f64.powf(lc + lr) + 2f64.powf(lc / 2.0) / (2.0 * k.sqrt());
    let e3 = (2f64.powf(params.l_com as f64) * k / 2f64.powf(lrand)).sqrt();
    let mut total = 0.0;
    let worlds = 20;
    for seed in 0..worlds {
        let (real, sim) = triple_distributions(&world(params, seed));
        total += statistical_distance(&real, &sim).unwrap();
    }
    let sd = total / worlds as f64;
    assert!(sd <= e1 + e2 + e3, "{sd} > {}", e1 + e2 + e3);
}

#[test]
fn simulated_challenges_follow_the_sample_table() {
    let params = WorldParams::default();
    let w = world(params, 8);
    let z = 1u64 << params.l_rand();
    let mut expect = vec![0.0; params.challenges()];
    for zi in 0..z {
        expect[params.unpack(w.oracle_s(zi).1).0] += 1.0 / z as f64;
    }
    let mut rng = RandomSource::new(8);
    let mut counts = vec![0u64; params.challenges()];
    for _ in 0..10_000 {
        counts[sigma_simulate(w.s0(), &w.public(), &mut rng).ch] += 1;
    }
    assert!(chi_square_within_3sigma(&counts, &expect), "{counts:?} vs {expect:?}");
}

#[test]
fn single_challenge_search_always_succeeds() {
    let params = WorldParams::new(4, 0, 6).unwrap();
    let w = world(params, 9);
    let config = challenge_search_config(params);
    for com in 0..params.y_size() {
        assert_eq!(e2_exact_success(config, w.instance(), com, &|_| true).unwrap(), 1.0);
    }
    let mut wins = 0;
    let mut exact = vec![];
    for t in 0..200u64 {
        let w = world(params, t);
        let run = sigma_attack(&w.public(), &mut RandomSource::for_trial(9, t)).unwrap();
        wins += run.accepted as u64;
        exact.push(run.exact_success);
    }
    let e = ExactRate::from_probabilities(&exact);
    assert!((wins as f64 / 200.0 - e.mean).abs() <= 3.0 * e.sigma.max(1.0 / 200.0));
}

#[test]
fn sigma_attack_convinces_the_verifier() {
    let params = WorldParams::new(4, 2, 9).unwrap();
    let trials = 150u64;
    let (mut wins, mut exact) = (0u64, vec![]);
    for t in 0..trials {
        let w = world(params, t);
        let run = sigma_attack(&w.public(), &mut RandomSource::for_trial(10, t)).unwrap();
        if let Some(rs) = &run.resp_star {
            assert_eq!(run.accepted, sigma_verify(w.s0(), &run.com_star, run.ch, rs, &w.public()));
        }
        wins += run.accepted as u64;
        exact.push(run.exact_success);
        assert_eq!(w.w0_reads(), 0);
        assert_eq!(w.oe_calls(), 0);
    }
    let e = ExactRate::from_probabilities(&exact);
    let rate = wins as f64 / trials as f64;
    assert!(rate >= 0.9 && e.mean >= 0.9);
    assert!((rate - e.mean).abs() <= 3.0 * e.sigma.max(1.0 / trials as f64));
}

#[test]
fn naive_extractor_matches_its_exact_rate() {
    let params = WorldParams::new(4, 2, 6).unwrap();
    let (k, n) = (params.k(), params.x_size());
    let budget = ExtractorBudget { q_v: 20, q_s: 0 };
    let trials = 4000u64;
    let (mut valid_hits, mut valid_n, mut invalid_hits, mut invalid_n) = (0u64, 0u64, 0u64, 0u64);
    for t in 0..trials {
        let w = world_nonzero_witness(params, t * 7);
        let mut rng = RandomSource::for_trial(11, t);
        let com = rng.index(params.y_size());
        let (ch, resp) = params.unpack(rng.index(n));
        let valid = w.oracle_v(com, params.pack(ch, resp));
        let got = naive_extract(com, ch, resp, budget, &w.extractor(), &mut rng);
        if let Some(out) = got {
            assert_eq!(out, w.w0());
        }
        if valid {
            valid_n += 1;
            valid_hits += got.is_some() as u64;
        } else {
            invalid_n += 1;
            invalid_hits += got.is_some() as u64;
        }
        assert_eq!(w.oe_calls(), got.is_some() as u64);
    }
    for (hits, count, flag) in [(valid_hits, valid_n, true), (invalid_hits, invalid_n, false)] {
        let p = naive_extract_exact(flag, k, n, budget.q_v);
        let sigma = (p * (1.0 - p) / count as f64).sqrt();
        assert!((hits as f64 / count as f64 - p).abs() <= 3.0 * sigma.max(1.0 / count as f64), "valid={flag}");
    }
    let guess =
        collision_experiment(CollisionStrategy::MeasureThenGuess, params.two_values(), budget.q_v, 1, 0).unwrap();
    assert!(naive_extract_exact(true, k, n, budget.q_v) <= guess.exact_adversary_rate.unwrap().mean + 1e-12);
}

#[test]
fn extractor_exact_rate_at_desk_budget() {
    let params = WorldParams::new(4, 2, 9).unwrap();
    let p = naive_extract_exact(true, params.k(), params.x_size(), 100);
    assert!((p - (1.0 - (1.0 - 31.0 / 2048.0f64).powi(100))).abs() < 1e-12);
    assert!(p > 0.7);
}

#[test]
fn random_oracle_has_function_semantics() {
    let h = RandomOracle::new(8, 1).unwrap();
    let first = h.query(b"fixed input");
    for _ in 0..1_000_000 {
        assert_eq!(h.query(b"fixed input"), first);
    }
    assert_eq!(h.table_len(), 1);
    let mut counts = vec![0u64; 256];
    for i in 0..20_000u64 {
        counts[h.query(&i.to_le_bytes()) as usize] += 1;
    }
    assert!(chi_square_within_3sigma(&counts, &vec![1.0 / 256.0; 256]));
    assert_eq!(RandomOracle::new(8, 1).unwrap().query(b"fixed input"), first);
    assert!(RandomOracle::new(65, 1).is_err());
}

#[test]
fn encoder_is_length_prefixed() {
    let mut e = Encoder::new();
    e.u64(5).bytes(b"ab");
    assert_eq!(e.finish(), vec![8, 0, 0, 0, 5, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, b'a', b'b']);
    let mut a = Encoder::new();
    a.bytes(b"a").bytes(b"bc");
    let mut b = Encoder::new();
    b.bytes(b"ab").bytes(b"c");
    assert_ne!(a.finish(), b.finish());
}

#[test]
fn honest_fiat_shamir_proofs_verify() {
    let params = WorldParams::default();
    let r = 3;
    for t in 0..100u64 {
        let w = world(params, t);
        let h = RandomOracle::new(r as u32 * params.l_ch, t).unwrap();
        let mut rng = RandomSource::for_trial(12, t);
        let proof = fs_prove(w.s0(), w.w0(), r, &h, &w.public(), &mut rng).unwrap();
        let chs = fs_challenges(w.s0(), &proof.com_stars, &h, params.l_ch);
        let complete = proof
            .com_stars
            .iter()
            .zip(&chs)
            .zip(&proof.resp_stars)
            .all(|((cs, &ch), rs)| w.oracle_v(cs.com, params.pack(ch, rs.resp)));
        assert_eq!(fs_verify(w.s0(), &proof, &h, &w.public()), complete);
    }
    let w = world(params, 0);
    assert!(fs_prove(0, 0, 3, &RandomOracle::new(5, 0).unwrap(), &w.public(), &mut RandomSource::new(0)).is_err());
}

#[test]
fn fiat_shamir_challenges_bind_the_commitments() {
    let params = WorldParams::default();
    let w = world(params, 13);
    let r = 3;
    let h = RandomOracle::new(r * params.l_ch, 13).unwrap();
    let mut rng = RandomSource::new(13);
    let trials = 4000;
    let mut changed = 0;
    for _ in 0..trials {
        let (cs, _): (Vec<_>, Vec<_>) = (0..r).map(|_| sigma_prove_p1(w.s0(), w.w0(), &w.public(), &mut rng)).unzip();
        let before = fs_challenges(w.s0(), &cs, &h, params.l_ch);
        let mut mutated = cs.clone();
        let i = rng.index(r as usize);
        mutated[i].com ^= 1 + rng.index(params.y_size() - 1);
        changed += (fs_challenges(w.s0(), &mutated, &h, params.l_ch) != before) as u64;
    }
    let p = 1.0 - 2f64.powi(-((r * params.l_ch) as i32));
    let rate = changed as f64 / trials as f64;
    assert!((rate - p).abs() <= 3.0 * (p * (1.0 - p) / trials as f64).sqrt(), "{rate} vs {p}");
}

#[test]
fn fiat_shamir_attack_failure_is_bounded_by_repetitions() {
    let params = WorldParams::new(4, 2, 9).unwrap();
    let trials = 100u64;
    let (mut one, mut three) = (vec![], vec![]);
    let (mut wins1, mut wins3) = (0u64, 0u64);
    for t in 0..trials {
        let w = world(params, t);
        let h1 = RandomOracle::new(params.l_ch, t).unwrap();
        let h3 = RandomOracle::new(3 * params.l_ch, t).unwrap();
        let a = fs_attack(1, &h1, &w.public(), &mut RandomSource::for_trial(14, t)).unwrap();
        let b = fs_attack(3, &h3, &w.public(), &mut RandomSource::for_trial(15, t)).unwrap();
        wins1 += a.accepted as u64;
        wins3 += b.accepted as u64;
        one.push(a.exact_success);
        three.push(b.exact_success);
        assert_eq!(w.w0_reads(), 0);
    }
    let (e1, e3) = (ExactRate::from_probabilities(&one), ExactRate::from_probabilities(&three));
    let se =
        |v: &[f64], m: f64| (v.iter().map(|p| (p - m).powi(2)).sum::<f64>() / (v.len() * (v.len() - 1)) as f64).sqrt();
    let slack = 3.0 * (3.0 * se(&one, e1.mean) + se(&three, e3.mean));
    assert!(1.0 - e3.mean <= 3.0 * (1.0 - e1.mean) + slack, "{} vs {}", 1.0 - e3.mean, 1.0 - e1.mean);
    let f3 = 1.0 - wins3 as f64 / trials as f64;
    let f1 = 1.0 - wins1 as f64 / trials as f64;
    assert!(f3 <= 3.0 * f1 + 3.0 * e3.sigma.max(1.0 / trials as f64));
}

#[test]
fn fischlin_verifier_checks_transcripts_and_sum() {
    let params = WorldParams::default();
    let w = world(params, 16);
    let o = w.public();
    let fp = FischlinParams::new(0, 2, 0, 0, params).unwrap();
    let h = RandomOracle::new(0, 16).unwrap();
    let mut rng = RandomSource::new(16);
    let members = w.instance().set(5).to_vec();
    let mut proof = FischlinProof { com_stars: vec![], challenges: vec![], resp_stars: vec![] };
    for &x in &members[..2] {
        let (ch, resp) = params.unpack(x);
        let (cs, rs) = transcript(&w, 5, ch, resp, &mut rng);
        proof.com_stars.push(cs);
        proof.challenges.push(ch);
        proof.resp_stars.push(rs);
    }
    assert!(fischlin_verify(w.s0(), &proof, &fp, &h, &o));
    let outside = (0..1 << params.l_resp).find(|&r| !w.oracle_v(5, params.pack(proof.challenges[1], r))).unwrap();
    proof.resp_stars[1].resp = outside;
    assert!(!fischlin_verify(w.s0(), &proof, &fp, &h, &o));
    assert!(FischlinParams::new(3, 1, 0, 2, params).is_err());
    assert!(FischlinParams::new(1, 1, 0, 3, params).is_err());
}

#[test]
fn fischlin_attack_produces_zero_sum_proofs() {
    let params = WorldParams::new(4, 2, 9).unwrap();
    let fp = FischlinParams::new(2, 3, 0, 2, params).unwrap();
    let bound = fischlin_success_bound(params, &fp).unwrap();
    assert!((bound - 0.737).abs() < 1e-3, "{bound}");
    let trials = 40u64;
    let (mut wins, mut exact) = (0u64, vec![]);
    for t in 0..trials {
        let w = world(params, t);
        let h = RandomOracle::new(fp.b, 1000 + t).unwrap();
        let run = fischlin_attack(&fp, &h, &w.public(), &mut RandomSource::for_trial(17, t)).unwrap();
        if run.accepted {
            assert_eq!(run.hash_sum, Some(0));
            let proof = run.proof.as_ref().unwrap();
            for i in 0..fp.r {
                let v = fischlin_hash(w.s0(), &proof.com_stars, i + 1, proof.challenges[i], &proof.resp_stars[i], &h);
                assert_eq!(v, 0);
            }
        }
        wins += run.accepted as u64;
        exact.push(run.exact_success);
        assert_eq!(w.w0_reads(), 0);
    }
    let e = ExactRate::from_probabilities(&exact);
    assert!(e.mean >= bound);
    assert!(wins as f64 / trials as f64 >= bound - 3.0 * e.sigma.max(1.0 / trials as f64));
}

#[test]
fn trivial_hash_reduces_fischlin_to_completeness() {
    let params = WorldParams::new(3, 2, 6).unwrap();
    let fp = FischlinParams::new(0, 2, 0, 2, params).unwrap();
    let h = RandomOracle::new(0, 0).unwrap();
    let mut wins = 0;
    for t in 0..30u64 {
        let w = world(params, t);
        let run = fischlin_attack(&fp, &h, &w.public(), &mut RandomSource::for_trial(18, t)).unwrap();
        assert_eq!(run.exact_success, 1.0);
        wins += run.accepted as u64;
    }
    assert_eq!(wins, 30);
}

#[test]
fn break_metrics_follow_the_variant() {
    let zero = total_break_metrics(&[true; 1000], &[false; 1000], Variant::Statistical, serde_json::json!({}));
    let ext = zero.extractor_success_rate.unwrap();
    assert_eq!(ext.rate, 0.0);
    assert!(ext.lower < 1e-12);
    assert!(ext.upper < 0.004);
    assert_eq!(zero.break_class, Some(BreakClass::TotalKnowledgeBreak));
    let comp = total_break_metrics(&[true], &[false], Variant::Computational, serde_json::json!({}));
    assert_eq!(comp.break_class.unwrap().to_string(), "total break");
}

#[test]
fn computational_variant_gives_identical_attack_runs() {
    let params = WorldParams::default();
    for t in 0..30u64 {
        let a = OracleWorld::sample(params, Variant::Statistical, t).unwrap();
        let b = OracleWorld::sample(params, Variant::Computational, t).unwrap();
        let ra = sigma_attack(&a.public(), &mut RandomSource::for_trial(19, t)).unwrap();
        let rb = sigma_attack(&b.public(), &mut RandomSource::for_trial(19, t)).unwrap();
        assert_eq!((ra.accepted, ra.ch, &ra.com_star), (rb.accepted, rb.ch, &rb.com_star));
    }
}

#[test]
fn honest_prover_with_witness_is_a_sanity_anchor() {
    let params = WorldParams::default();
    let mut outcomes = vec![];
    let mut per_com: HashMap<usize, u64> = HashMap::new();
    for t in 0..500u64 {
        let w = world(params, t);
        let mut rng = RandomSource::for_trial(20, t);
        let (cs, st) = sigma_prove_p1(w.s0(), w.w0(), &w.public(), &mut rng);
        let ch = rng.index(params.challenges());
        outcomes.push(sigma_verify(w.s0(), &cs, ch, &sigma_prove_p2(ch, &st).unwrap(), &w.public()));
        *per_com.entry(cs.com).or_default() += 1;
    }
    let report = total_break_metrics(&outcomes, &vec![false; 500], Variant::Statistical, serde_json::json!({}));
    assert!(report.adversary_success_rate.upper >= 1.0 - (-4f64).exp());
    assert_eq!(per_com.values().sum::<u64>(), 500);
}
