//! The space `H_Q ⊗ H_I`, its query-invariant sectors and its isotypic components.
//!
//! Vectors are stored as `N × |D|` matrices: entry `(x, z)` is the amplitude of `|x⟩|z⟩`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::combinatorics::{hook_dimension, two_row};
use crate::error::{JohnsonError, Result};
use crate::scheme::JohnsonScheme;

/// Largest `N·|D|` for which dense operators on `H_Q ⊗ H_I` are built.
pub const DENSE_BUDGET: usize = 1200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sector {
    ZeroS,
    ZeroT,
    OneS,
    OneT,
}

impl Sector {
    pub const ALL: [Sector; 4] = [Sector::ZeroS, Sector::ZeroT, Sector::OneS, Sector::OneT];

    pub fn label(self) -> &'static str {
        match self {
            Sector::ZeroS => "(0,s)",
            Sector::ZeroT => "(0,t)",
            Sector::OneS => "(1,s)",
            Sector::OneT => "(1,t)",
        }
    }
}

/// Which point stabilizer generates an isotypic span.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stabilizer {
    /// All of `S_N`: invariants only, giving the `(N)` component.
    Whole,
    /// Stabilizer of one point: adds `(N−1,1)`.
    Point,
    /// Setwise stabilizer of a pair: adds `(N−2,2)`.
    Pair,
    /// Pointwise stabilizer of a pair: adds `(N−2,1,1)`.
    OrderedPair,
}

/// Flattened index of `|x⟩|z⟩`.
pub fn flat(scheme: &JohnsonScheme, x: usize, z: usize) -> usize {
    z * scheme.n + x
}

/// Orbit indicator vectors of the chosen stabilizer, over every choice of stabilized points,
/// as the columns of an `N·|D|`-row matrix.
pub fn orbit_sums(scheme: &JohnsonScheme, stabilizer: Stabilizer) -> DMatrix<f64> {
    let n = scheme.n;
    let tuples: Vec<Vec<usize>> = match stabilizer {
        Stabilizer::Whole => vec![vec![]],
        Stabilizer::Point => (0..n).map(|a| vec![a]).collect(),
        Stabilizer::Pair => (0..n).flat_map(|a| (a + 1..n).map(move |b| vec![a, b])).collect(),
        Stabilizer::OrderedPair => {
            (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| vec![a, b])).collect()
        }
    };
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for points in &tuples {
        let mut orbits: BTreeMap<(usize, Vec<u8>, u8), Vec<f64>> = BTreeMap::new();
        for (zi, &z) in scheme.basis.iter().enumerate() {
            for x in 0..n {
                let mut sig = signature(points, x, z);
                if stabilizer == Stabilizer::Pair {
                    let swapped = signature(&[points[1], points[0]], x, z);
                    sig = sig.min(swapped);
                }
                let col = orbits.entry(sig).or_insert_with(|| vec![0.0; n * scheme.dim()]);
                col[flat(scheme, x, zi)] = 1.0;
            }
        }
        columns.extend(orbits.into_values());
    }
    let rows = n * scheme.dim();
    DMatrix::from_fn(rows, columns.len(), |r, c| columns[c][r])
}

fn signature(points: &[usize], x: usize, z: u32) -> (usize, Vec<u8>, u8) {
    let pos = points.iter().position(|&p| p == x).unwrap_or(points.len());
    let bits = points.iter().map(|&p| (z >> p & 1) as u8).collect();
    let own = if pos == points.len() { (z >> x & 1) as u8 } else { 2 };
    (pos, bits, own)
}

/// Orthonormal basis of the column span, via the eigenvectors of the Gram matrix.
pub fn orthonormal_span(vectors: &DMatrix<f64>) -> DMatrix<f64> {
    if vectors.ncols() == 0 {
        return DMatrix::zeros(vectors.nrows(), 0);
    }
    let gram = vectors.transpose() * vectors;
    let eigen = gram.symmetric_eigen();
    let max = eigen.eigenvalues.amax();
    let keep: Vec<usize> =
        (0..eigen.eigenvalues.len()).filter(|&i| eigen.eigenvalues[i] > 1e-9 * max.max(1e-300)).collect();
    let mut basis = vectors * eigen.eigenvectors.select_columns(&keep);
    for (c, &i) in keep.iter().enumerate() {
        let scale = eigen.eigenvalues[i].sqrt();
        basis.column_mut(c).unscale_mut(scale);
    }
    basis
}

/// Applies `pq ⊗ pi` to each column, reading columns as `N × |D|` matrices.
pub fn apply_product(
    scheme: &JohnsonScheme,
    pq: &DMatrix<f64>,
    pi: &DMatrix<f64>,
    vectors: &DMatrix<f64>,
) -> DMatrix<f64> {
    let (n, d) = (scheme.n, scheme.dim());
    let count = vectors.ncols();
    let mut stacked = DMatrix::zeros(n * count, d);
    for c in 0..count {
        let block = DMatrix::from_column_slice(n, d, vectors.column(c).as_slice());
        stacked.rows_mut(c * n, n).copy_from(&(pq * block));
    }
    let right = stacked * pi.transpose();
    let mut out = DMatrix::zeros(n * d, count);
    for c in 0..count {
        let block = right.rows(c * n, n).into_owned();
        out.column_mut(c).copy_from_slice(block.as_slice());
    }
    out
}

/// `Π_Q^{(N)}` and `Π_Q^{(N−1,1)}`.
pub fn q_projectors(n: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let uniform = DMatrix::from_element(n, n, 1.0 / n as f64);
    let rest = DMatrix::identity(n, n) - &uniform;
    (uniform, rest)
}

/// Orthonormal basis of the unique `(N−1,1)` instance inside `(N−1,1)_Q ⊗ (N−h,h)_I`.
pub fn standard_instance_basis(scheme: &JohnsonScheme, h: usize) -> DMatrix<f64> {
    let (_, pq) = q_projectors(scheme.n);
    let spread = apply_product(scheme, &pq, &scheme.projector(h), &orbit_sums(scheme, Stabilizer::Point));
    orthonormal_span(&spread)
}

/// `|s_z⟩ = |Ψ(z)⟩|z⟩` as columns.
pub fn s_vectors(scheme: &JohnsonScheme) -> DMatrix<f64> {
    let (n, d) = (scheme.n, scheme.dim());
    let mut out = DMatrix::zeros(n * d, d);
    for (zi, &z) in scheme.basis.iter().enumerate() {
        let psi = scheme.big_psi(z);
        for x in 0..n {
            out[(flat(scheme, x, zi), zi)] = psi[x];
        }
    }
    out
}

/// Coefficients `⟨s_z|v⟩` of each column's component in `H^{(1,s)}`.
pub fn s_coefficients(scheme: &JohnsonScheme, vectors: &DMatrix<f64>) -> DMatrix<f64> {
    let d = scheme.dim();
    let amp = 1.0 / (scheme.k as f64).sqrt();
    DMatrix::from_fn(d, vectors.ncols(), |zi, c| {
        let z = scheme.basis[zi];
        (0..scheme.n).filter(|&x| z >> x & 1 == 1).map(|x| vectors[(flat(scheme, x, zi), c)]).sum::<f64>() * amp
    })
}

/// Squared weight of each column on `H^{(1)}`, summed.
pub fn weight_on_one(scheme: &JohnsonScheme, vectors: &DMatrix<f64>) -> f64 {
    let mut total = 0.0;
    for (zi, &z) in scheme.basis.iter().enumerate() {
        for x in (0..scheme.n).filter(|&x| z >> x & 1 == 1) {
            total += vectors.row(flat(scheme, x, zi)).norm_squared();
        }
    }
    total
}

/// Dense sector and isotypic projectors on `H_Q ⊗ H_I` for small `N·|D|`.
#[derive(Clone, Debug)]
pub struct SubspaceDecomposition {
    pub n: usize,
    pub k: usize,
    pub dim: usize,
    pub sectors: Vec<(Sector, DMatrix<f64>)>,
    /// `Π̂_θ` for `θ = (N), (N−1,1), (N−2,2), (N−2,1,1)`.
    pub isotypic: Vec<(Vec<usize>, DMatrix<f64>)>,
}

pub fn decompose(scheme: &JohnsonScheme) -> Result<SubspaceDecomposition> {
    let (n, k, d) = (scheme.n, scheme.k, scheme.dim());
    let dim = n * d;
    if dim > DENSE_BUDGET {
        return Err(JohnsonError::Budget(format!("N·|D| = {dim} exceeds {DENSE_BUDGET}")));
    }
    if n < 4 {
        return Err(JohnsonError::Params(format!("the (N−2,1,1) component needs N ≥ 4, got {n}")));
    }
    let one = DMatrix::from_fn(dim, dim, |r, c| {
        let (x, zi) = (r % n, r / n);
        f64::from(u8::from(r == c && scheme.basis[zi] >> x & 1 == 1))
    });
    let zero = DMatrix::identity(dim, dim) - &one;
    let s = s_vectors(scheme);
    let one_s = &s * s.transpose();
    let mut u = DMatrix::zeros(dim, d);
    if n > k {
        let amp = 1.0 / ((n - k) as f64).sqrt();
        for (zi, &z) in scheme.basis.iter().enumerate() {
            for x in (0..n).filter(|&x| z >> x & 1 == 0) {
                u[(flat(scheme, x, zi), zi)] = amp;
            }
        }
    }
    let zero_s = &u * u.transpose();
    let sectors = vec![
        (Sector::ZeroS, zero_s.clone()),
        (Sector::ZeroT, &zero - &zero_s),
        (Sector::OneS, one_s.clone()),
        (Sector::OneT, &one - &one_s),
    ];
    let levels = [Stabilizer::Whole, Stabilizer::Point, Stabilizer::Pair, Stabilizer::OrderedPair];
    let thetas = [vec![n], two_row(n, 1), two_row(n, 2), vec![n - 2, 1, 1]];
    let mut isotypic = Vec::new();
    let mut previous = DMatrix::zeros(dim, dim);
    for (level, theta) in levels.iter().zip(thetas) {
        let basis = orthonormal_span(&orbit_sums(scheme, *level));
        let cumulative = &basis * basis.transpose();
        isotypic.push((theta, &cumulative - &previous));
        previous = cumulative;
    }
    Ok(SubspaceDecomposition { n, k, dim, sectors, isotypic })
}

impl SubspaceDecomposition {
    pub fn sector(&self, sector: Sector) -> &DMatrix<f64> {
        &self.sectors.iter().find(|(s, _)| *s == sector).expect("all sectors present").1
    }

    pub fn isotypic(&self, theta: &[usize]) -> Option<&DMatrix<f64>> {
        self.isotypic.iter().find(|(t, _)| t.as_slice() == theta).map(|(_, p)| p)
    }

    /// `Π_θ^σ = Π̂_θ Π^σ`.
    pub fn irrep_sector(&self, theta: &[usize], sector: Sector) -> Option<DMatrix<f64>> {
        self.isotypic(theta).map(|p| p * self.sector(sector))
    }

    /// Multiplicity of `θ` as `Tr(Π̂_θ)/dim θ`.
    pub fn multiplicity(&self, theta: &[usize]) -> Option<f64> {
        self.isotypic(theta).map(|p| p.trace() / hook_dimension(theta) as f64)
    }
}
