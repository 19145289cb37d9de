use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use pickone_core::sim::trace_distance_pure;
use pickone_core::stats::chi_square_within_3sigma;
use pickone_core::{AmplitudeVector, Error, RandomSource, C64};
use pickone_emulation::{
    cyclic_shift, cyclic_shift_inverse, emulated_o_psi, emulation_bound, random_state, reflection_matrix,
    run_emulation, shift_overlap, shift_quality, shift_quality_leading, small_range_sample, symmetric_projector,
    symmetric_reflection, CopyLayout, EmulationInstance, Emulator, Frame, RefMode, ReservoirState, SymmetricBasis,
};
use proptest::prelude::*;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn power(psi: &AmplitudeVector, m: usize) -> AmplitudeVector {
    let mut t = AmplitudeVector::basis(&[1], 0).unwrap();
    for _ in 0..m {
        t = t.tensor(psi);
    }
    t.reshaped(vec![psi.len(); m.max(1)]).unwrap()
}

fn close(a: &AmplitudeVector, b: &AmplitudeVector, tol: f64) -> bool {
    a.distance(b).unwrap() <= tol
}

#[test]
fn cyclic_shift_rotates_product_states() {
    let mut rng = RandomSource::new(1);
    let (a, b, d) = (random_state(3, &mut rng), random_state(3, &mut rng), random_state(3, &mut rng));
    let abc = a.tensor(&b).tensor(&d);
    let out = cyclic_shift(&abc, &[0, 1, 2]).unwrap();
    assert!(close(&out, &b.tensor(&d).tensor(&a), 1e-12));
    assert!(close(&cyclic_shift_inverse(&out, &[0, 1, 2]).unwrap(), &abc, 1e-12));
    let mut s = abc.clone();
    for _ in 0..3 {
        s = cyclic_shift(&s, &[0, 1, 2]).unwrap();
    }
    assert!(close(&s, &abc, 1e-12));
    let mixed = a.tensor(&AmplitudeVector::uniform(&[2]).unwrap());
    assert!(matches!(cyclic_shift(&mixed, &[0, 1]), Err(Error::Shape { .. })));
}

#[test]
fn shift_overlap_matches_closed_form() {
    let mut rng = RandomSource::new(2);
    for n in [2usize, 4, 8] {
        let frame = Frame::random(4, &mut rng).unwrap();
        let r = ReservoirState::new(&frame.psi, &frame.bot, 0, n).unwrap();
        let regs: Vec<usize> = (0..=n).collect();
        let bot_r = frame.bot.tensor(&r.state).reshaped(vec![4; n + 1]).unwrap();
        let psi_r = frame.psi.tensor(&r.state).reshaped(vec![4; n + 1]).unwrap();
        let overlap = cyclic_shift(&bot_r, &regs).unwrap().inner(&psi_r).unwrap();
        assert!((overlap - c(shift_overlap(n))).norm() < 1e-12, "n={n}: {overlap}");
        let dist = cyclic_shift(&bot_r, &regs).unwrap().distance(&psi_r).unwrap();
        assert!((dist - shift_quality(n).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn shift_quality_examples() {
    assert!((shift_quality(1).unwrap() - SQRT_2).abs() < 1e-12);
    let sweep: Vec<f64> = (0..=6).map(|e| shift_quality(1 << e).unwrap()).collect();
    assert!(sweep.windows(2).all(|w| w[1] < w[0]), "{sweep:?}");
    assert!(shift_quality(64).unwrap() <= PI / 16.0 * 1.1);
    for n in [16usize, 32, 64, 128] {
        assert!(shift_quality(n).unwrap() <= shift_quality_leading(n) * 1.1);
    }
    assert!(shift_quality(0).is_err());
}

#[test]
fn reservoir_is_built_from_interpolants() {
    let frame = Frame::standard();
    let r = ReservoirState::new(&frame.psi, &frame.bot, 2, 2).unwrap();
    assert_eq!(r.state.dims(), &[3, 3, 3, 3]);
    let h = FRAC_1_SQRT_2;
    // Ψ⊗Ψ⊗α₁⊗α₂ with α₁ = (Ψ+⊥)/√2 and α₂ = ⊥.
    let expect = power(&frame.psi, 2)
        .tensor(&AmplitudeVector::new(vec![3], vec![c(h), c(h), c(0.0)]).unwrap())
        .tensor(&frame.bot)
        .reshaped(vec![3; 4])
        .unwrap();
    assert!(close(&r.state, &expect, 1e-12));
    assert!(ReservoirState::new(&frame.psi, &frame.psi, 1, 1).is_err());
}

#[test]
fn orthogonal_inputs_pass_through_unchanged() {
    let mut rng = RandomSource::new(3);
    let frame = Frame::random(5, &mut rng).unwrap();
    let r = ReservoirState::new(&frame.psi, &frame.bot, 0, 3).unwrap();
    let em = emulated_o_psi(&frame.chi, &r, &frame.psi, &frame.bot, RefMode::ExactRef).unwrap();
    assert!(em.purified_distance_to(&frame.chi).unwrap() < 1e-7);
    assert!(em.ancilla_residue() < 1e-14);
}

#[test]
fn bottom_and_psi_inputs_are_swapped_within_shift_error() {
    let frame = Frame { psi: basis2(0), bot: basis2(1), chi: basis2(0) };
    let n = 16;
    let eps = shift_quality(n).unwrap();
    for (input, target) in [(&frame.bot, &frame.psi), (&frame.psi, &frame.bot)] {
        let mut em = Emulator::new(&frame.psi, &frame.bot, input, 0, n, CopyLayout::Registers).unwrap();
        em.query(RefMode::ExactRef);
        let joint = trace_distance_pure(&em.joint_state().unwrap(), &em.ideal_joint(target).unwrap()).unwrap();
        assert!(joint <= eps + 1e-9, "{joint} > {eps}");
        assert!(em.purified_distance_to(target).unwrap() <= eps + 1e-9);
    }
}

fn basis2(i: usize) -> AmplitudeVector {
    AmplitudeVector::basis(&[2], i).unwrap()
}

#[test]
fn frame_reduction_matches_dense_simulation() {
    let mut rng = RandomSource::new(4);
    for (n, m) in [(1, 1), (2, 2), (3, 2), (2, 3), (1, 4)] {
        let frame = Frame::random(5, &mut rng).unwrap();
        let inst = EmulationInstance::random(&mut rng);
        for mode in [RefMode::ExactRef, RefMode::SymmetricTest] {
            let dense = run_emulation(&frame, &inst, 2, n, m, CopyLayout::Registers, mode).unwrap();
            let sym5 = run_emulation(&frame, &inst, 2, n, m, CopyLayout::Symmetric, mode).unwrap();
            let reduced = run_emulation(&Frame::standard(), &inst, 2, n, m, CopyLayout::Symmetric, mode).unwrap();
            for ((a, b), r) in dense.iter().zip(&sym5).zip(&reduced) {
                for (x, y, z) in [
                    (a.trace_distance, b.trace_distance, r.trace_distance),
                    (a.joint_trace_distance, b.joint_trace_distance, r.joint_trace_distance),
                    (a.purified_distance, b.purified_distance, r.purified_distance),
                ] {
                    assert!((x - y).abs() < 1e-9 && (x - z).abs() < 1e-9, "n={n} m={m}: {x} {y} {z}");
                }
            }
        }
    }
}

#[test]
fn sequential_queries_stay_within_emulation_bound() {
    let mut rng = RandomSource::new(5);
    let frame = Frame::standard();
    for _ in 0..3 {
        let inst = EmulationInstance::random(&mut rng);
        for mode in [RefMode::ExactRef, RefMode::SymmetricTest] {
            let run = run_emulation(&frame, &inst, 3, 8, 8, CopyLayout::Symmetric, mode).unwrap();
            for (i, o) in run.iter().enumerate() {
                let bound = emulation_bound(i + 1, 8, 8, mode);
                assert!(o.trace_distance <= o.joint_trace_distance + 1e-12);
                assert!(o.joint_trace_distance <= bound, "q={} {mode:?}: {}", i + 1, o.joint_trace_distance);
            }
        }
    }
}

#[test]
fn emulated_oracle_is_nearly_self_inverse() {
    let mut rng = RandomSource::new(6);
    let frame = Frame::standard();
    for (n, m) in [(2, 2), (4, 4), (8, 2)] {
        let start = random_state(3, &mut rng);
        let per_query = shift_quality(n).unwrap() + 2.0 / ((m + 1) as f64).sqrt();
        let mut em = Emulator::new(&frame.psi, &frame.bot, &start, m, n, CopyLayout::Symmetric).unwrap();
        em.query(RefMode::SymmetricTest);
        em.query(RefMode::SymmetricTest);
        assert!(em.purified_distance_to(&start).unwrap() <= 2.0 * per_query, "n={n} m={m}");
    }
}

#[test]
#[allow(clippy::needless_range_loop)]
fn distance_decreases_along_doubling_sweep() {
    let insts: Vec<_> = (0..40).map(|i| EmulationInstance::random(&mut RandomSource::for_trial(7, i))).collect();
    let frame = Frame::standard();
    let sweep = [1usize, 2, 4];
    let mut mean = vec![vec![[0.0; 3]; 3]; 3];
    for inst in &insts {
        for (a, &n) in sweep.iter().enumerate() {
            for (b, &m) in sweep.iter().enumerate() {
                let run = run_emulation(&frame, inst, 3, n, m, CopyLayout::Symmetric, RefMode::SymmetricTest).unwrap();
                for (q, o) in run.iter().enumerate() {
                    mean[a][b][q] += o.joint_trace_distance / insts.len() as f64;
                }
            }
        }
    }
    for q in 0..3 {
        for (i, &size) in sweep.iter().enumerate() {
            for j in 0..2 {
                assert!(mean[j + 1][i][q] <= mean[j][i][q], "n sweep q={} m={size}", q + 1);
                assert!(mean[i][j + 1][q] <= mean[i][j][q], "m sweep q={} n={size}", q + 1);
            }
        }
    }
}

#[test]
fn symmetric_reflection_negates_symmetric_inputs() {
    let mut rng = RandomSource::new(8);
    let frame = Frame::random(5, &mut rng).unwrap();
    for m in [1usize, 2, 4] {
        let s = frame.psi.tensor(&power(&frame.psi, m)).reshaped(vec![5; m + 1]).unwrap();
        let regs: Vec<usize> = (0..=m).collect();
        let out = symmetric_reflection(&s, &regs).unwrap();
        let neg = AmplitudeVector::new(s.dims().to_vec(), s.amps().iter().map(|a| -a).collect()).unwrap();
        assert!(close(&out, &neg, 1e-7));
    }
    let big = AmplitudeVector::uniform(&[2; 7]).unwrap();
    assert!(matches!(symmetric_reflection(&big, &[0, 1, 2, 3, 4, 5, 6]), Err(Error::Budget(_))));
}

#[test]
fn orthogonal_inputs_overlap_symmetric_space_by_one_over_m_plus_one() {
    let mut rng = RandomSource::new(9);
    let frame = Frame::random(5, &mut rng).unwrap();
    for m in [1usize, 2, 3, 4] {
        let regs: Vec<usize> = (0..=m).collect();
        let t = power(&frame.psi, m);
        let s = frame.chi.tensor(&t).reshaped(vec![5; m + 1]).unwrap();
        let out = symmetric_reflection(&s, &regs).unwrap();
        // ⟨v|U_V|v⟩ = 1 − 2⟨v|P_V|v⟩.
        let pv = (1.0 - s.inner(&out).unwrap().re) / 2.0;
        assert!((pv - 1.0 / (m + 1) as f64).abs() < 1e-12, "m={m}: {pv}");
    }
}

#[test]
fn symmetric_test_approximates_reflection() {
    let mut rng = RandomSource::new(10);
    for m in [1usize, 2, 4] {
        let regs: Vec<usize> = (0..=m).collect();
        let bound = 2.0 / ((m + 1) as f64).sqrt();
        for k in 0..100 {
            let frame = Frame::random(5, &mut rng).unwrap();
            let phi = if k % 2 == 0 { frame.chi.clone() } else { random_state(5, &mut rng) };
            let t = power(&frame.psi, m);
            let s = phi.tensor(&t).reshaped(vec![5; m + 1]).unwrap();
            let ideal = phi
                .apply_register_matrix(0, &reflection_matrix(frame.psi.amps()))
                .unwrap()
                .tensor(&t)
                .reshaped(vec![5; m + 1])
                .unwrap();
            let dev = symmetric_reflection(&s, &regs).unwrap().distance(&ideal).unwrap();
            assert!(dev <= bound + 1e-9, "m={m}: {dev} > {bound}");
            if k % 2 == 0 {
                assert!((dev - bound).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn symmetric_projector_is_orthogonal_projector() {
    for (d, parties, dim) in [(2usize, 3usize, 4usize), (3, 3, 10), (3, 2, 6), (4, 2, 10)] {
        let p = symmetric_projector(d, parties).unwrap();
        assert!((&p * &p - &p).norm() < 1e-9);
        assert!((p.adjoint() - &p).norm() < 1e-9);
        assert!((p.trace().re - dim as f64).abs() < 1e-9);
        assert_eq!(SymmetricBasis::new(d, parties).unwrap().dim(), dim);
    }
}

#[test]
fn occupation_basis_reproduces_dense_symmetric_states() {
    let mut rng = RandomSource::new(11);
    let psi = random_state(3, &mut rng);
    for m in 1..=4usize {
        let basis = SymmetricBasis::new(3, m).unwrap();
        let coords = basis.power_state(psi.amps()).unwrap();
        let mut dense = vec![c(0.0); 3usize.pow(m as u32)];
        for (i, a) in coords.iter().enumerate() {
            for (x, e) in dense.iter_mut().zip(basis.embed(i)) {
                *x += a * e;
            }
        }
        let got = AmplitudeVector::new(vec![3; m], dense).unwrap();
        assert!(close(&got, &power(&psi, m), 1e-12), "m={m}");
    }
}

#[test]
fn small_range_functions() {
    let mut rng = RandomSource::new(12);
    let dist = [0.1, 0.2, 0.3, 0.4];
    let mut f = small_range_sample(1, &dist, &mut rng).unwrap();
    let v = f.eval(0);
    assert!((1..100).all(|z| f.eval(z) == v));
    for s in [2usize, 5, 64] {
        let mut g = small_range_sample(s, &dist, &mut rng).unwrap();
        let outs: std::collections::BTreeSet<usize> = (0..1000).map(|z| g.eval(z)).collect();
        assert!(outs.len() <= s && g.image().len() <= s);
        assert!(outs.is_subset(&g.image()));
        assert_eq!(g.eval(17), g.eval(17));
    }
    let mut counts = [0u64; 4];
    for _ in 0..10_000 {
        counts[small_range_sample(64, &dist, &mut rng).unwrap().eval(42)] += 1;
    }
    assert!(chi_square_within_3sigma(&counts, &dist), "{counts:?}");
    assert!(small_range_sample(0, &dist, &mut rng).is_err());
}

#[test]
fn small_range_lookups_are_order_independent() {
    let build = || small_range_sample(8, &[0.5, 0.5], &mut RandomSource::new(13)).unwrap();
    let (mut a, mut b) = (build(), build());
    let fwd: Vec<usize> = (0..50).map(|z| a.eval(z)).collect();
    let mut back: Vec<usize> = (0..50).rev().map(|z| b.eval(z)).collect();
    back.reverse();
    assert_eq!(fwd, back);
}

proptest! {
    #[test]
    fn shift_and_reflection_are_unitary(seed in any::<u64>(), r in 2usize..5) {
        let mut rng = RandomSource::new(seed);
        let s = random_state(3usize.pow(r as u32), &mut rng).reshaped(vec![3; r]).unwrap();
        let regs: Vec<usize> = (0..r).collect();
        let mut t = cyclic_shift(&s, &regs).unwrap();
        prop_assert!((t.norm_sqr() - 1.0).abs() < 1e-9);
        for _ in 1..r {
            t = cyclic_shift(&t, &regs).unwrap();
        }
        prop_assert!(close(&t, &s, 1e-9));
        let u = symmetric_reflection(&s, &regs).unwrap();
        prop_assert!((u.norm_sqr() - 1.0).abs() < 1e-9);
        prop_assert!(close(&symmetric_reflection(&u, &regs).unwrap(), &s, 1e-9));
    }
}
