//! Binomials, partitions and symmetric-group characters.

use num_bigint::BigInt;
use num_rational::BigRational;

/// `binom(n, r)` with the convention that it vanishes for `r < 0` or `r > n`.
pub fn binom(n: i64, r: i64) -> u64 {
    if r < 0 || n < 0 || r > n {
        return 0;
    }
    let r = r.min(n - r) as u64;
    let n = n as u64;
    (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn binom_q(n: i64, r: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(binom(n, r)))
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// All weight-`k` subsets of `{0, …, n−1}` as bitmasks, in increasing numeric order.
pub fn weight_k_masks(n: usize, k: usize) -> Vec<u32> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).collect()
}

/// Partitions of `n` in non-increasing part order, lexicographically decreasing.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn extend(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            extend(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(n, n, &mut Vec::new(), &mut out);
    out
}

/// Size of the conjugacy class of permutations with cycle type `mu`.
pub fn class_size(mu: &[usize]) -> u128 {
    let n: usize = mu.iter().sum();
    let mut denom = 1u128;
    for len in 1..=n {
        let m = mu.iter().filter(|&&p| p == len).count();
        denom *= (len as u128).pow(m as u32) * factorial(m);
    }
    factorial(n) / denom
}

/// Dimension of the irrep `lambda` by the hook-length formula.
pub fn hook_dimension(lambda: &[usize]) -> u128 {
    let n: usize = lambda.iter().sum();
    let conj = conjugate(lambda);
    let mut hooks = 1u128;
    for (i, &row) in lambda.iter().enumerate() {
        for (j, &col) in conj.iter().enumerate().take(row) {
            hooks *= (row - j + col - i - 1) as u128;
        }
    }
    factorial(n) / hooks
}

pub fn conjugate(lambda: &[usize]) -> Vec<usize> {
    let width = lambda.first().copied().unwrap_or(0);
    (0..width).map(|j| lambda.iter().filter(|&&r| r > j).count()).collect()
}

/// Character `χ_λ(μ)` by the Murnaghan–Nakayama rule on beta-sets.
pub fn character(lambda: &[usize], mu: &[usize]) -> i64 {
    let len = lambda.len();
    let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
    let mut cycles = mu.to_vec();
    cycles.sort_unstable_by(|a, b| b.cmp(a));
    mn_beta(&beta, &cycles)
}

fn mn_beta(beta: &[usize], cycles: &[usize]) -> i64 {
    let Some((&r, rest)) = cycles.split_first() else {
        return 1;
    };
    let mut total = 0;
    for (pos, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let crossed = beta.iter().filter(|&&c| c > target && c < b).count();
        let mut next = beta.to_vec();
        next[pos] = target;
        let sign = if crossed % 2 == 0 { 1 } else { -1 };
        total += sign * mn_beta(&next, rest);
    }
    total
}

/// Character of `U = U_Q ⊗ U_I` at cycle type `mu`: fixed points times fixed `k`-subsets.
pub fn tensor_character(mu: &[usize], k: usize) -> i64 {
    let fixed_points = mu.iter().filter(|&&p| p == 1).count() as i64;
    fixed_points * fixed_subsets(mu, k)
}

/// Number of `k`-subsets fixed by a permutation of cycle type `mu`.
pub fn fixed_subsets(mu: &[usize], k: usize) -> i64 {
    let mut poly = vec![0i64; k + 1];
    poly[0] = 1;
    for &len in mu {
        for w in (len..=k).rev() {
            poly[w] += poly[w - len];
        }
    }
    poly[k]
}

/// Multiplicity `⟨χ_θ, χ⟩` of `theta` in a representation of `S_n` with character `chi`.
pub fn multiplicity(theta: &[usize], chi: impl Fn(&[usize]) -> i64) -> u64 {
    let n: usize = theta.iter().sum();
    let total: i128 =
        partitions(n).iter().map(|mu| class_size(mu) as i128 * character(theta, mu) as i128 * chi(mu) as i128).sum();
    let order = factorial(n) as i128;
    assert!(total % order == 0 && total >= 0, "inner product {total} not a multiple of {order}");
    (total / order) as u64
}

/// Multiplicity of `theta` in `H_Q ⊗ H_I` for weight-`k` strings of length `n`.
pub fn tensor_multiplicity(theta: &[usize], k: usize) -> u64 {
    multiplicity(theta, |mu| tensor_character(mu, k))
}

/// Multiplicity of `theta` read off the tensor-product decomposition
/// `(N−1,1) ⊗ (N−j,j) = (N−j+1,j−1) ⊕ (N−j,j) ⊕ (N−j,j−1,1) ⊕ (N−j−1,j+1) ⊕ (N−j−1,j,1)`.
pub fn expected_tensor_multiplicity(theta: &[usize], n: usize, k: usize) -> u64 {
    let top = k.min(n - k);
    let mut count = 0;
    for j in 0..=top {
        if theta == two_row(n, j).as_slice() {
            count += 1;
        }
        let mut pieces = Vec::new();
        if j == 0 {
            pieces.push(two_row(n, 1));
        } else {
            pieces.push(two_row(n, j - 1));
            pieces.push(two_row(n, j));
            if j >= 2 {
                pieces.push(vec![n - j, j - 1, 1]);
            }
            pieces.push(two_row(n, j + 1));
            pieces.push(vec![n - j - 1, j, 1]);
        }
        count += pieces.iter().filter(|p| p.as_slice() == theta && is_partition(p)).count() as u64;
    }
    count
}

/// `(n − j, j)` with trailing zeros removed.
pub fn two_row(n: usize, j: usize) -> Vec<usize> {
    if j == 0 {
        vec![n]
    } else {
        vec![n - j, j]
    }
}

fn is_partition(p: &[usize]) -> bool {
    p.windows(2).all(|w| w[0] >= w[1]) && p.iter().all(|&x| x > 0)
}

pub fn partition_label(lambda: &[usize]) -> String {
    let parts: Vec<String> = lambda.iter().map(|p| p.to_string()).collect();
    format!("({})", parts.join(","))
}
