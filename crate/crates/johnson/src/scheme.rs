//! The Johnson scheme on weight-`k` strings and its eigenspace projectors.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::combinatorics::{binom, binom_q, weight_k_masks};
use crate::error::{JohnsonError, Result};

pub const MAX_N: usize = 12;

/// Association scheme `A_0 … A_k` on `D = {z ∈ {0,1}^N : |z| = k}` with the projectors
/// `Π^{(N−h,h)}` for `h = 0 … min(k, N−k)` obtained from the spectrum of `A_1`.
#[derive(Clone, Debug)]
pub struct JohnsonScheme {
    pub n: usize,
    pub k: usize,
    /// Bit `x` of `basis[i]` is `z_x`.
    pub basis: Vec<u32>,
    index: HashMap<u32, usize>,
    pub a: Vec<DMatrix<f64>>,
    pub projectors: Vec<DMatrix<f64>>,
    eigenvectors: Vec<DMatrix<f64>>,
}

/// Eigenvalue of `A_1` on `Π^{(N−h,h)}`.
pub fn a1_eigenvalue(n: usize, k: usize, h: usize) -> f64 {
    ((k - h) * (n - k - h)) as f64 - h as f64
}

/// `dim (N−h, h) = binom(N, h) − binom(N, h−1)`.
pub fn two_row_dimension(n: usize, h: usize) -> usize {
    (binom(n as i64, h as i64) - binom(n as i64, h as i64 - 1)) as usize
}

/// Eigenvalue of `C_j` on `Π^{(N−h,h)}`: `binom(N−j−h, N−k−h)·binom(k−h, j−h)`.
pub fn c_eigenvalue(n: usize, k: usize, j: usize, h: usize) -> u64 {
    let (n, k, j, h) = (n as i64, k as i64, j as i64, h as i64);
    binom(n - j - h, n - k - h) * binom(k - h, j - h)
}

pub fn build_scheme(n: usize, k: usize) -> Result<JohnsonScheme> {
    if n > MAX_N {
        return Err(JohnsonError::Budget(format!("N = {n} exceeds {MAX_N}")));
    }
    if k < 1 || k > n {
        return Err(JohnsonError::Params(format!("need 1 ≤ k ≤ N, got N = {n}, k = {k}")));
    }
    let basis = weight_k_masks(n, k);
    let index = basis.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let dim = basis.len();
    let a = (0..=k)
        .map(|i| DMatrix::from_fn(dim, dim, |r, c| f64::from(u8::from(half_distance(basis[r], basis[c]) == i))))
        .collect::<Vec<_>>();
    let top = k.min(n - k);
    let eigen = a[1].clone().symmetric_eigen();
    let mut columns: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
    for (col, &lambda) in eigen.eigenvalues.iter().enumerate() {
        let h = (0..=top)
            .min_by(|&x, &y| {
                let dx = (a1_eigenvalue(n, k, x) - lambda).abs();
                let dy = (a1_eigenvalue(n, k, y) - lambda).abs();
                dx.total_cmp(&dy)
            })
            .expect("at least one eigenspace");
        if (a1_eigenvalue(n, k, h) - lambda).abs() > 1e-6 {
            return Err(JohnsonError::Spectral(format!("eigenvalue {lambda} of A_1 matches no (N−h,h)")));
        }
        columns[h].push(col);
    }
    let mut eigenvectors = Vec::with_capacity(top + 1);
    let mut projectors = Vec::with_capacity(top + 1);
    for (h, cols) in columns.iter().enumerate() {
        if cols.len() != two_row_dimension(n, h) {
            return Err(JohnsonError::Spectral(format!(
                "eigenspace h = {h} has dimension {}, expected {}",
                cols.len(),
                two_row_dimension(n, h)
            )));
        }
        let v = eigen.eigenvectors.select_columns(cols);
        projectors.push(&v * v.transpose());
        eigenvectors.push(v);
    }
    let scheme = JohnsonScheme { n, k, basis, index, a, projectors, eigenvectors };
    let residual = scheme.spectral_residual();
    if residual > 1e-9 {
        return Err(JohnsonError::Spectral(format!("A_1 − Σ λ_h Π_h has entry {residual}")));
    }
    Ok(scheme)
}

/// Half the Hamming distance between two weight-`k` strings.
pub fn half_distance(z: u32, w: u32) -> usize {
    ((z ^ w).count_ones() / 2) as usize
}

impl JohnsonScheme {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Largest `h` with a nonzero `Π^{(N−h,h)}`.
    pub fn top(&self) -> usize {
        self.k.min(self.n - self.k)
    }

    pub fn index_of(&self, mask: u32) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    /// `Π^{(N−h,h)}`, or the zero matrix when `h` exceeds `min(k, N−k)`.
    pub fn projector(&self, h: usize) -> DMatrix<f64> {
        self.projectors.get(h).cloned().unwrap_or_else(|| DMatrix::zeros(self.dim(), self.dim()))
    }

    fn spectral_residual(&self) -> f64 {
        let mut recon = DMatrix::zeros(self.dim(), self.dim());
        for (h, p) in self.projectors.iter().enumerate() {
            recon += p * a1_eigenvalue(self.n, self.k, h);
        }
        (&self.a[1] - recon).amax()
    }

    /// Largest entry deviation among `A_0 = I`, `Σ A_i = J`, `Π_a Π_b = δ_ab Π_a` and `Σ Π_h = I`.
    pub fn invariant_deviation(&self) -> f64 {
        let d = self.dim();
        let mut dev = (&self.a[0] - DMatrix::identity(d, d)).amax();
        let sum_a = self.a.iter().fold(DMatrix::zeros(d, d), |acc, m| acc + m);
        dev = dev.max((sum_a - DMatrix::from_element(d, d, 1.0)).amax());
        let sum_p = self.projectors.iter().fold(DMatrix::zeros(d, d), |acc, m| acc + m);
        dev = dev.max((sum_p - DMatrix::identity(d, d)).amax());
        for (a, va) in self.eigenvectors.iter().enumerate() {
            for (b, vb) in self.eigenvectors.iter().enumerate().skip(a) {
                let gram = va.transpose() * vb;
                let target = if a == b {
                    DMatrix::identity(va.ncols(), vb.ncols())
                } else {
                    DMatrix::zeros(va.ncols(), vb.ncols())
                };
                dev = dev.max((gram - target).amax());
            }
        }
        dev
    }

    /// Integer `A_i`.
    pub fn a_integer(&self, i: usize) -> DMatrix<i64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |r, c| i64::from(half_distance(self.basis[r], self.basis[c]) == i))
    }

    /// `C_j = Σ_{i=0}^{k−j} binom(k−i, j) A_i` in integers.
    pub fn c_integer(&self, j: usize) -> DMatrix<i64> {
        let d = self.dim();
        let k = self.k as i64;
        DMatrix::from_fn(d, d, |r, c| {
            let i = half_distance(self.basis[r], self.basis[c]) as i64;
            if i <= k - j as i64 {
                binom(k - i, j as i64) as i64
            } else {
                0
            }
        })
    }

    /// `A_i = Σ_{j=k−i}^{k} (−1)^{j−k+i} binom(j, k−i) C_j` in integers.
    pub fn a_from_c(&self, i: usize) -> DMatrix<i64> {
        let d = self.dim();
        let k = self.k;
        let mut out = DMatrix::zeros(d, d);
        for j in (k - i)..=k {
            let sign = if (j + i - k).is_multiple_of(2) { 1 } else { -1 };
            out += self.c_integer(j) * (sign * binom(j as i64, (k - i) as i64) as i64);
        }
        out
    }

    /// Largest entry of `C_j − Σ_h binom(N−j−h, N−k−h) binom(k−h, j−h) Π_h` over all `j`.
    pub fn c_spectral_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for j in 0..=self.k {
            let c = self.c_integer(j).map(|v| v as f64);
            let mut recon = DMatrix::zeros(self.dim(), self.dim());
            for (h, p) in self.projectors.iter().enumerate() {
                recon += p * c_eigenvalue(self.n, self.k, j, h) as f64;
            }
            dev = dev.max((c - recon).amax());
        }
        dev
    }

    /// Coefficients of `C_0 … C_h` in `Π^{(N−h,h)} = (N−2h+1) Σ_j (−1)^{j−h} binom(k−j, h−j) / ((k−j+1) binom(N−j−h+1, N−k−h)) C_j`.
    pub fn pviac_coefficients(&self, h: usize) -> Result<Vec<BigRational>> {
        if h > 2 {
            return Err(JohnsonError::Params(format!("the C-expansion is only available for h ≤ 2, got {h}")));
        }
        if h > self.top() {
            return Err(JohnsonError::Params(format!("Π^(N−{h},{h}) vanishes for N = {}, k = {}", self.n, self.k)));
        }
        let (n, k, hh) = (self.n as i64, self.k as i64, h as i64);
        let lead = BigRational::from_integer(BigInt::from(n - 2 * hh + 1));
        Ok((0..=hh)
            .map(|j| {
                let sign = if (hh - j) % 2 == 0 { 1 } else { -1 };
                let num = binom_q(k - j, hh - j) * BigInt::from(sign);
                let den = binom_q(n - j - hh + 1, n - k - hh) * BigInt::from(k - j + 1);
                &lead * num / den
            })
            .collect())
    }

    pub fn projector_via_pviac(&self, h: usize) -> Result<DMatrix<f64>> {
        let coeffs = self.pviac_coefficients(h)?;
        let d = self.dim();
        let mut out = DMatrix::zeros(d, d);
        for (j, c) in coeffs.iter().enumerate() {
            out += self.c_integer(j).map(|v| v as f64) * to_f64(c);
        }
        Ok(out)
    }

    /// Coefficients of `A_0 … A_k` in the expanded form of `Π^{(N−2,2)}`.
    pub fn passoc1_coefficients(&self) -> Vec<BigRational> {
        let (n, k) = (self.n as i64, self.k as i64);
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        let norm = binom_q(n - 4, k - 2);
        (0..=k)
            .map(|i| {
                let t = binom_q(k - i, 2) - q((k - 1) * (k - 1)) / q(n - 2) * q(k - i)
                    + q(k * k * (k - 1) * (k - 1)) / q(2 * (n - 1) * (n - 2));
                if norm.is_zero() {
                    BigRational::zero()
                } else {
                    t / &norm
                }
            })
            .collect()
    }

    /// Coefficients of `A_0^{(1,s)} … A_k^{(1,s)}` in `Π^{(1,s)}_{(N−1,1)}`.
    pub fn passoc2_coefficients(&self) -> Vec<BigRational> {
        let (n, k) = (self.n as i64, self.k as i64);
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        let norm = binom_q(n - 2, k - 1);
        if norm.is_zero() {
            return vec![BigRational::zero(); self.k + 1];
        }
        (0..=k).map(|i| (q(k - i) - q(k * k) / q(n)) / &norm).collect()
    }

    /// `Σ_i c_i A_i` for rational coefficients.
    pub fn combine_a(&self, coeffs: &[BigRational]) -> DMatrix<f64> {
        let d = self.dim();
        let values: Vec<f64> = coeffs.iter().map(to_f64).collect();
        DMatrix::from_fn(d, d, |r, c| values[half_distance(self.basis[r], self.basis[c])])
    }

    /// `|ψ_{x_1…x_i}⟩`: normalized sum of the `z` with `z_x = 1` for every listed `x`.
    pub fn psi(&self, xs: &[usize]) -> DVector<f64> {
        let mask: u32 = xs.iter().map(|&x| 1u32 << x).sum();
        let mut v =
            DVector::from_iterator(self.dim(), self.basis.iter().map(|&z| f64::from(u8::from(z & mask == mask))));
        let norm = v.norm();
        if norm > 0.0 {
            v /= norm;
        }
        v
    }

    /// `|Ψ(z)⟩ = Σ_{x: z_x = 1} |x⟩ / √k` on `H_Q`.
    pub fn big_psi(&self, z: u32) -> DVector<f64> {
        let amp = 1.0 / (self.k as f64).sqrt();
        DVector::from_fn(self.n, |x, _| if z >> x & 1 == 1 { amp } else { 0.0 })
    }
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().expect("finite rational")
}
