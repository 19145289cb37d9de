//! Trace identities and ratio bounds checked against their closed forms.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::combinatorics::{binom_q, expected_tensor_multiplicity, partition_label, tensor_multiplicity, two_row};
use crate::decomposition::{q_projectors, s_coefficients, standard_instance_basis, weight_on_one};
use crate::error::{JohnsonError, Result};
use crate::scheme::{build_scheme, half_distance, to_f64, JohnsonScheme};

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `Tr((Id ⊗ A_i)·A_{i'}^{(1,s)})` computed from the integer matrices, next to
/// `δ_{ii'} binom(N,k) binom(k,i) binom(N−k,i) (k−i)/k`.
#[derive(Clone, Debug)]
pub struct OverlapTable {
    pub computed: Vec<Vec<BigRational>>,
    pub closed_form: Vec<Vec<BigRational>>,
}

impl OverlapTable {
    pub fn max_abs_error(&self) -> BigRational {
        let mut worst = BigRational::zero();
        for (row_c, row_f) in self.computed.iter().zip(&self.closed_form) {
            for (c, f) in row_c.iter().zip(row_f) {
                let diff = if c > f { c - f } else { f - c };
                if diff > worst {
                    worst = diff;
                }
            }
        }
        worst
    }
}

pub fn overlap_traces(scheme: &JohnsonScheme) -> OverlapTable {
    let k = scheme.k;
    let a: Vec<DMatrix<i64>> = (0..=k).map(|i| scheme.a_integer(i)).collect();
    let d = scheme.dim();
    let common = DMatrix::from_fn(d, d, |r, c| i64::from((scheme.basis[r] & scheme.basis[c]).count_ones()));
    let mut computed = vec![vec![BigRational::zero(); k + 1]; k + 1];
    for i in 0..=k {
        for ip in 0..=k {
            let sum: i64 =
                a[i].iter().zip(a[ip].transpose().iter()).zip(common.iter()).map(|((x, y), g)| x * y * g).sum();
            computed[i][ip] = q(sum) / q(k as i64);
        }
    }
    let (n, kk) = (scheme.n as i64, k as i64);
    let closed_form = (0..=kk)
        .map(|i| {
            (0..=kk)
                .map(|ip| {
                    if i != ip {
                        return BigRational::zero();
                    }
                    binom_q(n, kk) * binom_q(kk, i) * binom_q(n - kk, i) * q(kk - i) / q(kk)
                })
                .collect()
        })
        .collect();
    OverlapTable { computed, closed_form }
}

/// `(k−1)/k · N(N−k−1)/(N−2)`.
pub fn main_trace_closed_form(n: usize, k: usize) -> BigRational {
    let (n, k) = (n as i64, k as i64);
    q(k - 1) / q(k) * q(n * (n - k - 1)) / q(n - 2)
}

fn check_main_params(n: usize, k: usize) -> Result<()> {
    if n < 5 || k < 2 || k + 1 > n {
        return Err(JohnsonError::Params(format!("need N ≥ 5 and 2 ≤ k ≤ N−1, got N = {n}, k = {k}")));
    }
    Ok(())
}

/// `Tr((Id_Q ⊗ Π_I^{(N−2,2)})·Π^{(1,s)}_{(N−1,1)})` from the spectral projectors, and its closed form.
///
/// On `H^{(1,s)}` with orthonormal basis `|s_z⟩ = |Ψ(z)⟩|z⟩`, the operator
/// `Π^{(1,s)}_{(N−1,1)}` has the matrix of `Π_I^{(N−1,1)}` and `Id ⊗ Π_I^{(N−2,2)}` compresses to
/// `⟨Ψ(z)|Ψ(z')⟩ Π_I^{(N−2,2)}[z, z']`.
pub fn main_trace_identity(scheme: &JohnsonScheme) -> Result<(f64, f64)> {
    check_main_params(scheme.n, scheme.k)?;
    let p1 = scheme.projector(1);
    let p2 = scheme.projector(2);
    let k = scheme.k as f64;
    let mut trace = 0.0;
    for r in 0..scheme.dim() {
        for c in 0..scheme.dim() {
            let overlap = f64::from((scheme.basis[r] & scheme.basis[c]).count_ones()) / k;
            trace += overlap * p2[(r, c)] * p1[(c, r)];
        }
    }
    Ok((trace, to_f64(&main_trace_closed_form(scheme.n, scheme.k))))
}

/// The same trace assembled exactly from the `A_i` expansions of both projectors and the overlap table.
pub fn main_trace_exact(scheme: &JohnsonScheme) -> Result<BigRational> {
    check_main_params(scheme.n, scheme.k)?;
    let c1 = scheme.passoc1_coefficients();
    let c2 = scheme.passoc2_coefficients();
    let table = overlap_traces(scheme);
    Ok((0..=scheme.k).map(|i| &c1[i] * &c2[i] * &table.closed_form[i][i]).sum())
}

/// Dense `N·|D|`-dimensional evaluation of the main trace with `Π^{(1,s)}_{(N−1,1)}` built from
/// its `A^{(1,s)}` expansion.
pub fn main_trace_dense(scheme: &JohnsonScheme) -> Result<f64> {
    check_main_params(scheme.n, scheme.k)?;
    let (n, d) = (scheme.n, scheme.dim());
    if n * d > crate::decomposition::DENSE_BUDGET {
        return Err(JohnsonError::Budget(format!("N·|D| = {} exceeds {}", n * d, crate::decomposition::DENSE_BUDGET)));
    }
    let coeffs: Vec<f64> = scheme.passoc2_coefficients().iter().map(to_f64).collect();
    let psis: Vec<DVector<f64>> = scheme.basis.iter().map(|&z| scheme.big_psi(z)).collect();
    let dim = n * d;
    let pi1s = DMatrix::from_fn(dim, dim, |r, c| {
        let (x, z, xp, zp) = (r % n, r / n, c % n, c / n);
        coeffs[half_distance(scheme.basis[z], scheme.basis[zp])] * psis[z][x] * psis[zp][xp]
    });
    let p2 = scheme.projector(2);
    let lifted = DMatrix::from_fn(dim, dim, |r, c| if r % n == c % n { p2[(r / n, c / n)] } else { 0.0 });
    Ok(lifted.component_mul(&pi1s.transpose()).sum())
}

/// The normalized traces behind the step condition for the irrep `(N−1,1)`.
#[derive(Clone, Debug)]
pub struct StepBoundTraces {
    /// Main trace divided by `N − 1`.
    pub r1: f64,
    pub r1_closed: f64,
    /// `Tr(Π_{(N−1,1)}^{(N−1,1)_Q⊗(N−2,2)_I} Π^{(1,s)}_{(N−1,1)})/(N−1)` from an explicit basis of the instance.
    pub r1_instance: f64,
    /// `Tr(Π_{(N−1,1)}^{(N−1,1)_Q⊗(N−2,2)_I} Π^{(1)})/(N−1)`.
    pub r2: f64,
    /// `Tr((Π_Q^{(N−1,1)} ⊗ Π_I^{(N−1,1)}) Π^{(1)})`.
    pub diagonal_trace: f64,
    pub diagonal_closed: f64,
    /// `C·max(k/N, 1/k)` with `C = 4`.
    pub gap_bound: f64,
}

pub const STEP_CONSTANT: f64 = 4.0;

pub fn stepbound_condition_traces(scheme: &JohnsonScheme) -> Result<StepBoundTraces> {
    let (n, k) = (scheme.n, scheme.k);
    let (main, _) = main_trace_identity(scheme)?;
    let r1_closed = to_f64(&(main_trace_closed_form(n, k) / q(n as i64 - 1)));
    let basis = standard_instance_basis(scheme, 2);
    let expected_rank = if scheme.top() >= 2 { n - 1 } else { 0 };
    if basis.ncols() != expected_rank {
        return Err(JohnsonError::Spectral(format!(
            "(N−1,1) instance in (N−1,1)⊗(N−2,2) has rank {}, expected {expected_rank}",
            basis.ncols()
        )));
    }
    let coeffs = s_coefficients(scheme, &basis);
    let p1 = scheme.projector(1);
    let r1_instance = (coeffs.transpose() * &p1 * &coeffs).trace() / (n - 1) as f64;
    let r2 = weight_on_one(scheme, &basis) / (n - 1) as f64;
    let (_, pq) = q_projectors(n);
    let mut diagonal_trace = 0.0;
    for (zi, &z) in scheme.basis.iter().enumerate() {
        for x in (0..n).filter(|&x| z >> x & 1 == 1) {
            diagonal_trace += pq[(x, x)] * p1[(zi, zi)];
        }
    }
    Ok(StepBoundTraces {
        r1: main / (n - 1) as f64,
        r1_closed,
        r1_instance,
        r2,
        diagonal_trace,
        diagonal_closed: (k * (n - 1) * (n - 1)) as f64 / n as f64,
        gap_bound: STEP_CONSTANT * (k as f64 / n as f64).max(1.0 / k as f64),
    })
}

/// Which printed closed form the true `(ψ₃−ψ₄)` ratio equals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrintedMatch {
    Both,
    Intermediate,
    Final,
    Neither,
}

#[derive(Clone, Debug)]
pub struct FinalBoundRatios {
    /// `2(k−1)/(N−1)`.
    pub bound: f64,
    /// Largest `‖Π̂ψ(α,β)‖²/‖ψ(α,β)‖²` over the grid of directions.
    pub grid_max: f64,
    /// The same maximum from the 2×2 generalized eigenproblem.
    pub exact_max: f64,
    /// The ratio at `α = 1, β = 0`.
    pub alpha_only: f64,
    pub psi_overlap: f64,
    pub case2_norm: f64,
    pub psi34_norm2: f64,
    pub psi34_norm2_closed: f64,
    pub psi34_ratio: f64,
    pub psi34_ratio_exact: BigRational,
    /// `2(k−1)(k−2)(N−k)/((N−1)(N−2)(N−3))` divided by `2(N−k)/(N−1)`.
    pub printed_intermediate: BigRational,
    /// `(k−2)(k−3)/((N−2)(N−3))`.
    pub printed_final: BigRational,
    pub matches: PrintedMatch,
}

pub const GRID_POINTS: usize = 20_000;

pub fn finalbound_ratios(scheme: &JohnsonScheme) -> Result<FinalBoundRatios> {
    let (n, k) = (scheme.n, scheme.k);
    if n < 5 || k < 2 || k > n {
        return Err(JohnsonError::Params(format!("need N ≥ 5 and k ≥ 2, got N = {n}, k = {k}")));
    }
    let mask = DVector::from_iterator(scheme.dim(), scheme.basis.iter().map(|&z| f64::from(u8::from(z & 3 == 3))));
    let hat = |v: &DVector<f64>| v.component_mul(&mask);
    let psi: Vec<DVector<f64>> = (0..n).map(|x| scheme.psi(&[x])).collect();
    let u1 = &psi[0] + &psi[1];
    let u2 = psi[2..].iter().fold(DVector::zeros(scheme.dim()), |acc, v| acc + v);
    let (h1, h2) = (hat(&u1), hat(&u2));
    let a = [[h1.dot(&h1), h1.dot(&h2)], [h2.dot(&h1), h2.dot(&h2)]];
    let b = [[u1.dot(&u1), u1.dot(&u2)], [u2.dot(&u1), u2.dot(&u2)]];
    let ratio = |al: f64, be: f64| {
        let num = a[0][0] * al * al + 2.0 * a[0][1] * al * be + a[1][1] * be * be;
        let den = b[0][0] * al * al + 2.0 * b[0][1] * al * be + b[1][1] * be * be;
        num / den
    };
    let grid_max = (0..GRID_POINTS)
        .map(|i| {
            let theta = std::f64::consts::PI * i as f64 / GRID_POINTS as f64;
            ratio(theta.cos(), theta.sin())
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let qa = b[0][0] * b[1][1] - b[0][1] * b[0][1];
    let qb = -(a[0][0] * b[1][1] + a[1][1] * b[0][0] - 2.0 * a[0][1] * b[0][1]);
    let qc = a[0][0] * a[1][1] - a[0][1] * a[0][1];
    let exact_max = (-qb + (qb * qb - 4.0 * qa * qc).max(0.0).sqrt()) / (2.0 * qa);
    let diff12 = &psi[0] - &psi[1];
    let diff34 = &psi[2] - &psi[3];
    let psi34_norm2 = diff34.norm_squared();
    let psi34_ratio = hat(&diff34).norm_squared() / psi34_norm2;
    let (nn, kk) = (n as i64, k as i64);
    let hat_norm = q(2) * binom_q(nn - 4, kk - 3) / binom_q(nn - 1, kk - 1);
    let psi34_ratio_exact = hat_norm / (q(2) * q(nn - k as i64) / q(nn - 1));
    let intermediate_num = q(2 * (kk - 1) * (kk - 2) * (nn - kk)) / q((nn - 1) * (nn - 2) * (nn - 3));
    let printed_intermediate = intermediate_num / (q(2) * q(nn - kk) / q(nn - 1));
    let printed_final = q((kk - 2) * (kk - 3)) / q((nn - 2) * (nn - 3));
    let matches = match (psi34_ratio_exact == printed_intermediate, psi34_ratio_exact == printed_final) {
        (true, true) => PrintedMatch::Both,
        (true, false) => PrintedMatch::Intermediate,
        (false, true) => PrintedMatch::Final,
        (false, false) => PrintedMatch::Neither,
    };
    Ok(FinalBoundRatios {
        bound: 2.0 * (k - 1) as f64 / (n - 1) as f64,
        grid_max,
        exact_max,
        alpha_only: ratio(1.0, 0.0),
        psi_overlap: psi[0].dot(&psi[1]),
        case2_norm: hat(&diff12).norm(),
        psi34_norm2,
        psi34_norm2_closed: 2.0 * (n - k) as f64 / (n - 1) as f64,
        psi34_ratio,
        psi34_ratio_exact,
        printed_intermediate,
        printed_final,
        matches,
    })
}

/// How a row's computed value is compared with its closed form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Relation {
    /// `|computed − closed_form| ≤ tol`.
    Equal(f64),
    /// `computed ≤ closed_form + tol`.
    AtMost(f64),
    /// Reported only.
    Report,
}

#[derive(Clone, Debug)]
pub struct IdentityRow {
    pub n: usize,
    pub k: usize,
    pub identity: String,
    pub computed: f64,
    pub closed_form: f64,
    /// `|computed − closed_form|` for equalities, the excess over the bound for inequalities.
    pub abs_err: f64,
    pub relation: Relation,
}

impl IdentityRow {
    fn new(n: usize, k: usize, identity: &str, computed: f64, closed_form: f64, relation: Relation) -> Self {
        let abs_err = match relation {
            Relation::AtMost(_) => (computed - closed_form).max(0.0),
            _ => (computed - closed_form).abs(),
        };
        Self { n, k, identity: identity.to_string(), computed, closed_form, abs_err, relation }
    }

    pub fn passes(&self) -> bool {
        match self.relation {
            Relation::Equal(tol) | Relation::AtMost(tol) => self.abs_err <= tol,
            Relation::Report => true,
        }
    }
}

pub const TOL: f64 = 1e-9;

/// Every identity for one `(N, k)` with `N ≥ 5` and `2 ≤ k ≤ N − 2`.
pub fn identity_rows(n: usize, k: usize) -> Result<Vec<IdentityRow>> {
    if n < 5 || k < 2 || k + 2 > n {
        return Err(JohnsonError::Params(format!("need N ≥ 5 and 2 ≤ k ≤ N−2, got N = {n}, k = {k}")));
    }
    let scheme = build_scheme(n, k)?;
    let mut rows = Vec::new();
    let mut push = |id: &str, computed: f64, closed: f64, rel: Relation| {
        rows.push(IdentityRow::new(n, k, id, computed, closed, rel))
    };

    push("scheme_invariants_max_dev", scheme.invariant_deviation(), 0.0, Relation::Equal(TOL));
    for h in 0..=2 {
        let label = format!("trace_projector_{}", partition_label(&two_row(n, h)));
        let expected = crate::combinatorics::hook_dimension(&two_row(n, h)) as f64;
        push(&label, scheme.projector(h).trace(), expected, Relation::Equal(TOL));
    }
    push("c_eigenvalues_max_dev", scheme.c_spectral_deviation(), 0.0, Relation::Equal(TOL));
    let mismatches = (0..=k).filter(|&i| scheme.a_from_c(i) != scheme.a_integer(i)).count();
    push("a_from_c_mismatches", mismatches as f64, 0.0, Relation::Equal(0.0));
    for h in 0..=2 {
        let dev = (scheme.projector_via_pviac(h)? - scheme.projector(h)).amax();
        push(&format!("c_expansion_h{h}_max_dev"), dev, 0.0, Relation::Equal(TOL));
    }
    let dev = (scheme.combine_a(&scheme.passoc1_coefficients()) - scheme.projector(2)).amax();
    push("a_expansion_(N-2,2)_max_dev", dev, 0.0, Relation::Equal(TOL));
    let dev = (scheme.combine_a(&scheme.passoc2_coefficients()) - scheme.projector(1)).amax();
    push("a_expansion_(1,s)_(N-1,1)_max_dev", dev, 0.0, Relation::Equal(TOL));

    let overlaps = overlap_traces(&scheme);
    push("overlap_traces_max_dev", to_f64(&overlaps.max_abs_error()), 0.0, Relation::Equal(0.0));

    let (main, closed) = main_trace_identity(&scheme)?;
    push("main_trace", main, closed, Relation::Equal(TOL));
    push("main_trace_exact", to_f64(&main_trace_exact(&scheme)?), closed, Relation::Equal(0.0));

    let step = stepbound_condition_traces(&scheme)?;
    push("r1_normalized_main_trace", step.r1, step.r1_closed, Relation::Equal(TOL));
    push("r1_instance_trace", step.r1_instance, step.r1_closed, Relation::Equal(TOL));
    push("r1_at_most_r2", step.r1, step.r2, Relation::AtMost(TOL));
    push("step_gap_1_minus_r1", 1.0 - step.r1, step.gap_bound, Relation::AtMost(TOL));
    push("diagonal_trace_q1_i1_on_one", step.diagonal_trace, step.diagonal_closed, Relation::Equal(TOL));

    let fin = finalbound_ratios(&scheme)?;
    push("psi_overlap", fin.psi_overlap, (k - 1) as f64 / (n - 1) as f64, Relation::Equal(TOL));
    push("final_case1_exact_max", fin.exact_max, fin.bound, Relation::AtMost(TOL));
    push("final_case1_grid_max", fin.grid_max, fin.bound, Relation::AtMost(TOL));
    push("final_case2_norm", fin.case2_norm, 0.0, Relation::Equal(TOL));
    push("psi34_norm2", fin.psi34_norm2, fin.psi34_norm2_closed, Relation::Equal(TOL));
    push("psi34_ratio_vs_intermediate", fin.psi34_ratio, to_f64(&fin.printed_intermediate), Relation::Equal(TOL));
    push("psi34_ratio_vs_printed_final", fin.psi34_ratio, to_f64(&fin.printed_final), Relation::Report);

    for theta in [two_row(n, 1), two_row(n, 2), vec![n - 2, 1, 1]] {
        let label = format!("multiplicity_{}", partition_label(&theta));
        let computed = tensor_multiplicity(&theta, k) as f64;
        let expected = expected_tensor_multiplicity(&theta, n, k) as f64;
        push(&label, computed, expected, Relation::Equal(0.0));
    }
    Ok(rows)
}

/// The `(N, k)` points of the sweep `N ∈ {5 … nmax}`, `2 ≤ k ≤ N − 2`.
pub fn sweep_points(nmax: usize) -> Vec<(usize, usize)> {
    (5..=nmax).flat_map(|n| (2..=n - 2).map(move |k| (n, k))).collect()
}
