use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use pickone_johnson::combinatorics::{
    binom, character, class_size, factorial, hook_dimension, partitions, tensor_multiplicity, two_row,
};
use pickone_johnson::decomposition::{orthonormal_span, s_vectors, DENSE_BUDGET};
use pickone_johnson::scheme::{c_eigenvalue, to_f64};
use pickone_johnson::{
    build_scheme, decompose, finalbound_ratios, identity_rows, initialbound_check, main_trace_dense, main_trace_exact,
    main_trace_identity, overlap_traces, stepbound_condition_traces, sweep_points, JohnsonError, PrintedMatch, Sector,
};
use proptest::prelude::*;

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn rank(p: &DMatrix<f64>) -> usize {
    p.trace().round() as usize
}

#[test]
fn smallest_scheme_by_hand() {
    let s = build_scheme(2, 1).unwrap();
    assert_eq!(s.basis, vec![0b01, 0b10]);
    assert_eq!(s.a[1], DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
    assert!((&s.projectors[0] - DMatrix::from_element(2, 2, 0.5)).amax() < 1e-12);
    let complement = DMatrix::from_row_slice(2, 2, &[0.5, -0.5, -0.5, 0.5]);
    assert!((&s.projectors[1] - complement).amax() < 1e-12);
}

#[test]
fn scheme_invariants_and_projector_algebra() {
    for (n, k) in [(4, 2), (5, 2), (6, 3), (7, 2), (7, 4), (8, 3)] {
        let s = build_scheme(n, k).unwrap();
        assert!(s.invariant_deviation() < 1e-9, "N={n} k={k}");
        for (a, pa) in s.projectors.iter().enumerate() {
            for (b, pb) in s.projectors.iter().enumerate() {
                let target = if a == b { pa.clone() } else { DMatrix::zeros(s.dim(), s.dim()) };
                assert!((pa * pb - target).amax() < 1e-9);
            }
            assert_eq!(rank(pa) as u128, hook_dimension(&two_row(n, a)));
        }
    }
}

#[test]
fn build_errors() {
    assert!(matches!(build_scheme(13, 3), Err(JohnsonError::Budget(_))));
    assert!(matches!(build_scheme(6, 0), Err(JohnsonError::Params(_))));
    assert!(matches!(build_scheme(6, 7), Err(JohnsonError::Params(_))));
}

#[test]
fn c_eigenvalues_on_explicit_eigenvectors() {
    let s = build_scheme(7, 3).unwrap();
    assert!(s.c_spectral_deviation() < 1e-9);
    for h in 0..=s.top() {
        let p = &s.projectors[h];
        let col = (0..s.dim()).map(|c| p.column(c).into_owned()).max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
        for j in 0..=s.k {
            let c = s.c_integer(j).map(|v| v as f64);
            let lambda = c_eigenvalue(7, 3, j, h) as f64;
            assert!((&c * &col - &col * lambda).amax() < 1e-9, "j={j} h={h}");
        }
    }
    assert_eq!(c_eigenvalue(7, 3, 0, 0), binom(7, 3));
    assert_eq!(c_eigenvalue(7, 3, 3, 0), 1);
    assert!(s.c_integer(0).iter().all(|&v| v == 1));
    assert_eq!(s.c_integer(3), DMatrix::identity(s.dim(), s.dim()));
}

#[test]
fn a_from_c_is_exact() {
    for (n, k) in [(5, 2), (6, 3), (8, 4), (9, 7)] {
        let s = build_scheme(n, k).unwrap();
        for i in 0..=k {
            assert_eq!(s.a_from_c(i), s.a_integer(i), "N={n} k={k} i={i}");
        }
    }
}

#[test]
fn psi_overlap_from_explicit_vectors() {
    let s = build_scheme(4, 2).unwrap();
    let raw = |x: usize| DVector::from_iterator(6, s.basis.iter().map(|&z| f64::from((z >> x & 1) as u8)));
    let (a, b) = (raw(0), raw(3));
    let explicit = a.dot(&b) / (a.norm() * b.norm());
    assert!((explicit - 1.0 / 3.0).abs() < 1e-12);
    assert!((s.psi(&[0]).dot(&s.psi(&[3])) - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn c_expansion_projectors() {
    let s = build_scheme(6, 2).unwrap();
    let p0 = s.projector_via_pviac(0).unwrap();
    assert!((p0 - DMatrix::from_element(15, 15, 1.0 / 15.0)).amax() < 1e-12);
    assert!((s.projector_via_pviac(1).unwrap().trace() - 5.0).abs() < 1e-12);
    assert!((s.projector_via_pviac(2).unwrap() - &s.projectors[2]).amax() < 1e-9);
    assert!(matches!(s.projector_via_pviac(3), Err(JohnsonError::Params(_))));
    for (n, k) in [(7, 3), (8, 2), (9, 4), (9, 6)] {
        let s = build_scheme(n, k).unwrap();
        for h in 0..=2 {
            assert!((s.projector_via_pviac(h).unwrap() - &s.projectors[h]).amax() < 1e-9, "N={n} k={k} h={h}");
        }
        assert!((s.combine_a(&s.passoc1_coefficients()) - &s.projectors[2]).amax() < 1e-9);
    }
}

#[test]
fn overlap_table() {
    let s = build_scheme(6, 3).unwrap();
    let t = overlap_traces(&s);
    assert_eq!(t.computed, t.closed_form);
    let zero = BigRational::from_integer(BigInt::from(0));
    for i in 0..=3 {
        for ip in 0..=3 {
            if i != ip {
                assert_eq!(t.computed[i][ip], zero);
            }
        }
    }
    assert_eq!(t.computed[0][0], rational(20, 1));
    assert_eq!(t.computed[1][1], rational(120, 1));
    let closed_by_hand = 20 * 3 * 3 * 2 / 3;
    assert_eq!(closed_by_hand, 120);
    for (n, k) in [(5, 2), (7, 4), (8, 3)] {
        let s = build_scheme(n, k).unwrap();
        let t = overlap_traces(&s);
        assert_eq!(t.computed, t.closed_form, "N={n} k={k}");
    }
}

#[test]
fn main_trace_examples() {
    let s = build_scheme(6, 2).unwrap();
    let (computed, closed) = main_trace_identity(&s).unwrap();
    assert!((closed - 0.5 * 6.0 * 3.0 / 4.0).abs() < 1e-12);
    assert!((computed - 2.25).abs() < 1e-9);
    assert!((computed / 5.0 - 0.45).abs() < 1e-9);
    assert_eq!(main_trace_exact(&s).unwrap(), rational(9, 4));
    assert!((main_trace_dense(&s).unwrap() - 2.25).abs() < 1e-9);
    let s = build_scheme(7, 6).unwrap();
    let (computed, closed) = main_trace_identity(&s).unwrap();
    assert_eq!(closed, 0.0);
    assert!(computed.abs() < 1e-12);
    assert!(matches!(main_trace_identity(&build_scheme(6, 1).unwrap()), Err(JohnsonError::Params(_))));
    assert!(matches!(main_trace_identity(&build_scheme(4, 2).unwrap()), Err(JohnsonError::Params(_))));
}

#[test]
fn main_trace_three_ways() {
    for (n, k) in [(5, 2), (6, 3), (7, 3), (8, 2)] {
        let s = build_scheme(n, k).unwrap();
        let (computed, closed) = main_trace_identity(&s).unwrap();
        let exact = main_trace_exact(&s).unwrap();
        let kk = k as i64;
        let nn = n as i64;
        assert_eq!(exact, rational((kk - 1) * nn * (nn - kk - 1), kk * (nn - 2)), "N={n} k={k}");
        assert!((computed - closed).abs() < 1e-9);
        assert!((main_trace_dense(&s).unwrap() - closed).abs() < 1e-9);
    }
}

#[test]
fn step_condition_traces() {
    for (n, k) in [(5, 2), (6, 3), (8, 4), (9, 7)] {
        let s = build_scheme(n, k).unwrap();
        let t = stepbound_condition_traces(&s).unwrap();
        let formula = (k - 1) as f64 / k as f64 * (n * (n - k - 1)) as f64 / ((n - 1) * (n - 2)) as f64;
        assert!((t.r1 - formula).abs() < 1e-9);
        assert!((t.r1_instance - formula).abs() < 1e-9);
        assert!(t.r2 >= t.r1 - 1e-9);
        assert!(1.0 - t.r1 <= t.gap_bound);
        assert!((t.diagonal_trace - (k * (n - 1) * (n - 1)) as f64 / n as f64).abs() < 1e-9);
    }
}

#[test]
fn instance_projector_matches_dense_decomposition() {
    let s = build_scheme(6, 3).unwrap();
    let d = decompose(&s).unwrap();
    let basis = pickone_johnson::decomposition::standard_instance_basis(&s, 2);
    let instance = &basis * basis.transpose();
    let theta = two_row(6, 1);
    let iso = d.isotypic(&theta).unwrap();
    assert!((iso * &instance - &instance).amax() < 1e-9);
    let one = d.sector(Sector::OneS) + d.sector(Sector::OneT);
    let r2 = (&instance * one).trace() / 5.0;
    assert!((r2 - stepbound_condition_traces(&s).unwrap().r2).abs() < 1e-9);
}

#[test]
fn sectors_partition_the_space() {
    for (n, k) in [(5, 2), (6, 3), (7, 3)] {
        let s = build_scheme(n, k).unwrap();
        let d = decompose(&s).unwrap();
        let id = DMatrix::<f64>::identity(d.dim, d.dim);
        let total = Sector::ALL.iter().fold(DMatrix::zeros(d.dim, d.dim), |acc, &sec| acc + d.sector(sec));
        assert!((total - &id).amax() < 1e-12);
        for &a in &Sector::ALL {
            for &b in &Sector::ALL {
                let prod = d.sector(a) * d.sector(b);
                let target = if a == b { d.sector(a).clone() } else { DMatrix::zeros(d.dim, d.dim) };
                assert!((prod - target).amax() < 1e-12, "{} {}", a.label(), b.label());
            }
        }
        let sv = s_vectors(&s);
        assert!((d.sector(Sector::OneS) * &sv - &sv).amax() < 1e-12);
        assert_eq!(rank(d.sector(Sector::OneS)), s.dim());
        assert_eq!(orthonormal_span(&sv).ncols(), s.dim());
    }
}

#[test]
fn irrep_instances_per_sector() {
    for (n, k) in [(6, 3), (7, 3)] {
        let s = build_scheme(n, k).unwrap();
        let d = decompose(&s).unwrap();
        let thetas = [two_row(n, 1), two_row(n, 2), vec![n - 2, 1, 1]];
        let present = [[true; 4], [true; 4], [false, true, false, true]];
        for (theta, row) in thetas.iter().zip(present) {
            for (&sector, expected) in Sector::ALL.iter().zip(row) {
                let p = d.irrep_sector(theta, sector).unwrap();
                assert!((&p * &p - &p).amax() < 1e-9);
                let dim = if expected { hook_dimension(theta) as usize } else { 0 };
                assert_eq!(rank(&p), dim, "N={n} k={k} θ={theta:?} {}", sector.label());
            }
        }
    }
}

#[test]
fn a_expansion_on_one_s_is_the_standard_instance() {
    let s = build_scheme(6, 3).unwrap();
    let d = decompose(&s).unwrap();
    let sv = s_vectors(&s);
    let via_a = &sv * s.combine_a(&s.passoc2_coefficients()) * sv.transpose();
    let via_characters = d.irrep_sector(&two_row(6, 1), Sector::OneS).unwrap();
    assert!((via_a - via_characters).amax() < 1e-9);
}

#[test]
fn multiplicities_characters_vs_dense() {
    for (n, k) in [(5, 2), (6, 2), (6, 3), (7, 3), (7, 5)] {
        let s = build_scheme(n, k).unwrap();
        let d = decompose(&s).unwrap();
        for theta in [vec![n], two_row(n, 1), two_row(n, 2), vec![n - 2, 1, 1]] {
            let dense = d.multiplicity(&theta).unwrap();
            let chars = tensor_multiplicity(&theta, k) as f64;
            assert!((dense - chars).abs() < 1e-9, "N={n} k={k} θ={theta:?}: {dense} vs {chars}");
        }
    }
    assert_eq!(tensor_multiplicity(&[9, 1], 4), 4);
    assert_eq!(tensor_multiplicity(&[8, 2], 4), 4);
    assert_eq!(tensor_multiplicity(&[8, 1, 1], 4), 2);
    assert_eq!(tensor_multiplicity(&[8, 2], 2), 3);
    assert_eq!(tensor_multiplicity(&[8, 2], 8), 3);
}

#[test]
fn decomposition_budget() {
    let s = build_scheme(10, 5).unwrap();
    assert!(s.n * s.dim() > DENSE_BUDGET);
    assert!(matches!(decompose(&s), Err(JohnsonError::Budget(_))));
}

#[test]
fn characters_match_known_values() {
    for n in 2..=8usize {
        let parts = partitions(n);
        let dims: u128 = parts.iter().map(|l| hook_dimension(l).pow(2)).sum();
        assert_eq!(dims, factorial(n));
        let identity = vec![1; n];
        for l in &parts {
            assert_eq!(character(l, &identity) as u128, hook_dimension(l));
        }
        for mu in &parts {
            let fixed = mu.iter().filter(|&&p| p == 1).count() as i64;
            let two = mu.iter().filter(|&&p| p == 2).count() as i64;
            assert_eq!(character(&[n], mu), 1);
            assert_eq!(character(&vec![1; n], mu), if (n - mu.len()) % 2 == 0 { 1 } else { -1 });
            if n >= 2 {
                assert_eq!(character(&two_row(n, 1), mu), fixed - 1);
            }
            if n >= 4 {
                assert_eq!(character(&two_row(n, 2), mu), fixed * (fixed - 3) / 2 + two);
                assert_eq!(character(&[n - 2, 1, 1], mu), (fixed - 1) * (fixed - 2) / 2 - two);
            }
        }
        let order: u128 = parts.iter().map(|mu| class_size(mu)).sum();
        assert_eq!(order, factorial(n));
    }
    assert_eq!(hook_dimension(&[10, 2]), 12 * 9 / 2);
    assert_eq!(hook_dimension(&[10, 1, 1]), 11 * 10 / 2);
}

#[test]
fn finalbound_examples() {
    let s = build_scheme(6, 2).unwrap();
    let f = finalbound_ratios(&s).unwrap();
    let alpha_only = (4.0 / 5.0) / (2.0 + 2.0 / 5.0);
    assert!((f.alpha_only - alpha_only).abs() < 1e-12);
    assert!(f.alpha_only <= f.bound);
    assert!(f.case2_norm < 1e-12);
    assert_eq!(f.matches, PrintedMatch::Both);
    for (n, k) in [(5, 2), (6, 3), (8, 4), (9, 7), (10, 3)] {
        let s = build_scheme(n, k).unwrap();
        let f = finalbound_ratios(&s).unwrap();
        assert!(f.grid_max <= f.bound + 1e-9 && f.exact_max <= f.bound + 1e-9, "N={n} k={k}");
        assert!(f.grid_max <= f.exact_max + 1e-12 && f.exact_max - f.grid_max < 1e-6);
        assert!(f.case2_norm < 1e-12);
        assert!((f.psi34_norm2 - 2.0 * (n - k) as f64 / (n - 1) as f64).abs() < 1e-12);
        assert!((f.psi34_ratio - to_f64(&f.psi34_ratio_exact)).abs() < 1e-12);
        let expected = rational(((k - 1) * (k - 2)) as i64, ((n - 2) * (n - 3)) as i64);
        assert_eq!(f.psi34_ratio_exact, expected);
        let expected_match = if k == 2 { PrintedMatch::Both } else { PrintedMatch::Intermediate };
        assert_eq!(f.matches, expected_match, "N={n} k={k}");
    }
    assert!(matches!(finalbound_ratios(&build_scheme(4, 2).unwrap()), Err(JohnsonError::Params(_))));
}

#[test]
fn initial_bound_trivial_cases() {
    for m in 1..=3 {
        let r = initialbound_check(m, 4, 2, 0, &[]).unwrap();
        assert!(r.p_b0 < 1e-12);
        let r = initialbound_check(m, 5, 2, 1, &[[0.6, 0.8]]).unwrap();
        assert!(r.p_b0 < 1e-12);
        assert!(r.p_b0 < r.bound);
    }
    assert!(matches!(initialbound_check(4, 4, 2, 1, &[[1.0, 1.0]]), Err(JohnsonError::Budget(_))));
    assert!(matches!(initialbound_check(2, 7, 2, 1, &[[1.0, 1.0]]), Err(JohnsonError::Budget(_))));
    assert!(matches!(initialbound_check(2, 4, 2, 2, &[[1.0, 1.0]]), Err(JohnsonError::Params(_))));
}

fn initial_state_density_oracle(alpha: [f64; 2]) -> f64 {
    let s = build_scheme(4, 2).unwrap();
    let raw: Vec<DVector<f64>> =
        (0..4).map(|x| DVector::from_iterator(6, s.basis.iter().map(|&z| f64::from((z >> x & 1) as u8)))).collect();
    let span = orthonormal_span(&DMatrix::from_columns(&raw));
    let low = &span * span.transpose();
    let overlap = (2.0f64 / 4.0).sqrt();
    let norm = (alpha[0] * alpha[0] + alpha[1] * alpha[1] + 2.0 * alpha[0] * alpha[1] * overlap).sqrt();
    let (a0, a1) = (alpha[0] / norm, alpha[1] / norm);
    let factor = |z: &[u32; 2], y: usize, x: usize| {
        let psi = if z[y] >> x & 1 == 1 { 1.0 / 2f64.sqrt() } else { 0.0 };
        (a0 * psi + a1 * 0.5) / 2f64.sqrt()
    };
    let mut state = DMatrix::zeros(36, 64);
    for (i1, &z1) in s.basis.iter().enumerate() {
        for (i2, &z2) in s.basis.iter().enumerate() {
            for r1 in 0..8 {
                for r2 in 0..8 {
                    let z = [z1, z2];
                    state[(i1 * 6 + i2, r1 * 8 + r2)] = factor(&z, r1 / 4, r1 % 4) * factor(&z, r2 / 4, r2 % 4) / 6.0;
                }
            }
        }
    }
    let rho = &state * state.transpose();
    let pa = low.kronecker(&low);
    1.0 - (rho * pa).trace()
}

#[test]
fn initial_bound_example_against_density_oracle() {
    let r = initialbound_check(2, 4, 2, 2, &[[1.0, 1.0], [1.0, 1.0]]).unwrap();
    let oracle = initial_state_density_oracle([1.0, 1.0]);
    assert!((r.p_b0 - oracle).abs() < 1e-12, "{} vs {oracle}", r.p_b0);
    assert!(r.p_b0 < r.bound && r.bound == 1.0);
    assert!(r.p_b0 <= r.collision_probability + 1e-12);
    let skew = initialbound_check(2, 4, 2, 2, &[[1.0, 0.0], [1.0, 0.0]]).unwrap();
    assert!((skew.p_b0 - initial_state_density_oracle([1.0, 0.0])).abs() < 1e-12);
    assert!(skew.p_b0 <= skew.collision_probability + 1e-12);
}

#[test]
fn identity_rows_pass_up_to_ten() {
    for (n, k) in sweep_points(10) {
        for row in identity_rows(n, k).unwrap() {
            assert!(row.passes(), "{row:?}");
        }
    }
    assert!(matches!(identity_rows(6, 5), Err(JohnsonError::Params(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn projectors_resolve_the_identity(n in 2usize..=8, kf in 0.0f64..1.0) {
        let k = 1 + ((n - 1) as f64 * kf) as usize;
        let s = build_scheme(n, k).unwrap();
        prop_assert!(s.invariant_deviation() < 1e-9);
        prop_assert!(s.c_spectral_deviation() < 1e-9);
        let traces: usize = s.projectors.iter().map(rank).sum();
        prop_assert_eq!(traces as u64, binom(n as i64, k as i64));
    }

    #[test]
    fn tensor_character_decomposes_fully(n in 4usize..=9, kf in 0.0f64..1.0) {
        let k = 1 + ((n - 1) as f64 * kf) as usize;
        let total: u128 = partitions(n)
            .iter()
            .map(|l| tensor_multiplicity(l, k) as u128 * hook_dimension(l))
            .sum();
        prop_assert_eq!(total, n as u128 * binom(n as i64, k as i64) as u128);
    }
}
