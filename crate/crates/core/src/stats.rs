//! Exact finite-sample quantities behind the statistical lemmas, and goodness-of-fit helpers.

use statrs::distribution::{Binomial, Discrete};
use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};
use crate::rng::RandomSource;

pub fn binomial_pmf(n: u64, p: f64, j: u64) -> f64 {
    Binomial::new(p, n).map(|b| b.pmf(j)).unwrap_or(0.0)
}

/// `P[J = j]` when drawing `draws` items without replacement from `population` items of which
/// `successes` are marked.
pub fn hypergeometric_pmf(population: u64, successes: u64, draws: u64, j: u64) -> f64 {
    if successes > population || draws > population || j > successes || j > draws || draws - j > population - successes
    {
        return 0.0;
    }
    (ln_binomial(successes, j) + ln_binomial(population - successes, draws - j) - ln_binomial(population, draws)).exp()
}

fn check_distribution(d: &[f64]) -> Result<()> {
    let s: f64 = d.iter().sum();
    if (s - 1.0).abs() > 1e-9 || d.iter().any(|&p| p < 0.0) {
        return Err(Error::NotDistribution(s));
    }
    Ok(())
}

/// `SD((O, y1), (O, y2))` with `O : X → Y` i.i.d. from `D`, `y1 ← D`, `y2 = O(x)` for uniform `x`.
/// Given `O`, the distance is `½ Σ_y |c_y/|X| − D(y)|` with `c_y ~ Bin(|X|, D(y))`.
pub fn empirical_sd_exact(x_size: u64, dist: &[f64]) -> Result<f64> {
    check_distribution(dist)?;
    let n = x_size as f64;
    let mut total = 0.0;
    for &p in dist {
        let e: f64 = (0..=x_size).map(|c| binomial_pmf(x_size, p, c) * (c as f64 / n - p).abs()).sum();
        total += e;
    }
    Ok(0.5 * total)
}

/// Average over `samples` drawn oracles of the exact conditional distance.
pub fn empirical_sd_sampled(x_size: u64, dist: &[f64], samples: u64, rng: &mut RandomSource) -> Result<f64> {
    check_distribution(dist)?;
    let mut acc = 0.0;
    for _ in 0..samples {
        let mut counts = vec![0u64; dist.len()];
        for _ in 0..x_size {
            let mut u = rng.unit();
            let mut y = dist.len() - 1;
            for (i, &p) in dist.iter().enumerate() {
                if u < p {
                    y = i;
                    break;
                }
                u -= p;
            }
            counts[y] += 1;
        }
        acc += 0.5 * counts.iter().zip(dist).map(|(&c, &p)| (c as f64 / x_size as f64 - p).abs()).sum::<f64>();
    }
    Ok(acc / samples as f64)
}

/// `(2^{H_{1/2}(D)/2} / (2√|X|), ½√(|Y|/|X|))`.
pub fn empirical_bounds(x_size: u64, dist: &[f64]) -> (f64, f64) {
    let n = x_size as f64;
    let renyi: f64 = dist.iter().map(|p| p.sqrt()).sum::<f64>() / (2.0 * n.sqrt());
    (renyi, 0.5 * (dist.len() as f64 / n).sqrt())
}

/// `SD((S, bit_p(x)), (S, b*))` for a uniform k-subset `S ⊆ {0,1}^ℓ`, `x ← S`, `b*` uniform.
/// Given `S` the distance is `|P/k − ½|` with `P ~ Hypergeom(2^ℓ, 2^{ℓ−1}, k)`.
pub fn slsb_sd_exact(ell: u32, k: u64) -> Result<f64> {
    let n = 1u64 << ell;
    if k == 0 || k > n {
        return Err(Error::Params(format!("need 1 ≤ k ≤ 2^ℓ, got k={k}")));
    }
    Ok((0..=k).map(|j| hypergeometric_pmf(n, n / 2, k, j) * (j as f64 / k as f64 - 0.5).abs()).sum())
}

/// The same distance by enumerating every k-subset, for tiny `ℓ`.
pub fn slsb_sd_enumerated(ell: u32, k: u32, p: u32) -> Result<f64> {
    if ell > 5 || p == 0 || p > ell {
        return Err(Error::Budget("enumeration limited to ℓ ≤ 5".into()));
    }
    let n = 1u64 << ell;
    let (mut total, mut count) = (0.0, 0u64);
    for s in 0u64..1 << n {
        if s.count_ones() != k {
            continue;
        }
        let ones = (0..n).filter(|&x| (s >> x) & 1 == 1 && (x >> (p - 1)) & 1 == 1).count();
        let q = ones as f64 / k as f64;
        total += 0.5 * ((q - 0.5).abs() + ((1.0 - q) - 0.5).abs());
        count += 1;
    }
    Ok(total / count as f64)
}

pub fn slsb_bound(k: u64) -> f64 {
    1.0 / (2.0 * (k as f64).sqrt())
}

/// `SD((S, c', r'), (S, c'', r''))` for a uniform k-subset `S ⊆ C × R`. Given `S` the distance is
/// `½ Σ_c |1/|C| − n_c/k|` with `n_c = |S_{|c}| ~ Hypergeom(|C||R|, |R|, k)`.
pub fn pick_dep_sd_exact(c: u64, r: u64, k: u64) -> Result<f64> {
    if k == 0 || k > c * r {
        return Err(Error::Params(format!("need 1 ≤ k ≤ |C×R|, got k={k}")));
    }
    let e: f64 =
        (0..=k.min(r)).map(|j| hypergeometric_pmf(c * r, r, k, j) * (1.0 / c as f64 - j as f64 / k as f64).abs()).sum();
    Ok(0.5 * c as f64 * e)
}

/// The same distance by enumerating every k-subset of `C × R`, for tiny sets.
pub fn pick_dep_sd_enumerated(c: u64, r: u64, k: u32) -> Result<f64> {
    let n = c * r;
    if n > 20 {
        return Err(Error::Budget("enumeration limited to |C×R| ≤ 20".into()));
    }
    let (mut total, mut count) = (0.0, 0u64);
    for s in 0u64..1 << n {
        if s.count_ones() != k {
            continue;
        }
        let mut sd = 0.0;
        for ci in 0..c {
            let nc = (0..r).filter(|ri| (s >> (ci * r + ri)) & 1 == 1).count() as f64;
            if nc == 0.0 {
                sd += 1.0 / c as f64;
            } else {
                sd += nc * (1.0 / (c as f64 * nc) - 1.0 / k as f64).abs();
            }
        }
        total += 0.5 * sd;
        count += 1;
    }
    Ok(total / count as f64)
}

pub fn pick_dep_bound(c: u64, r: u64, k: u64) -> f64 {
    2.0 * (k * k) as f64 / (c * r) as f64 + (c as f64).sqrt() / (2.0 * (k as f64).sqrt())
}

/// `P[|P ∩ S|/k < δ_min]` for a uniform k-subset `S` of an `n`-set containing `marked` elements of `P`.
pub fn p_fraction_tail(n: u64, marked: u64, k: u64, delta_min: f64) -> f64 {
    (0..=k.min(marked))
        .filter(|&j| (j as f64) < delta_min * k as f64)
        .map(|j| hypergeometric_pmf(n, marked, k, j))
        .sum()
}

pub fn p_fraction_bound(k: u64, phi: f64, delta_min: f64) -> f64 {
    (-2.0 * k as f64 * (phi - delta_min).powi(2)).exp()
}

/// Best classical `q`-query advantage at telling a `γ`-biased random predicate from the zero one:
/// the distinguisher wins only by seeing a 1.
pub fn grover_dist_classical(gamma: f64, q: u32) -> f64 {
    1.0 - (1.0 - gamma).powi(q as i32)
}

pub fn grover_dist_bound(gamma: f64, q: u32) -> f64 {
    2.0 * q as f64 * gamma.sqrt()
}

/// Pearson statistic of observed counts against expected probabilities, with its degrees of freedom.
pub fn chi_square(observed: &[u64], probs: &[f64]) -> (f64, usize) {
    let total: u64 = observed.iter().sum();
    let stat = observed
        .iter()
        .zip(probs)
        .filter(|(_, &p)| p > 0.0)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    (stat, probs.iter().filter(|&&p| p > 0.0).count().saturating_sub(1))
}

/// Goodness of fit at three standard deviations of the chi-square law: `χ² ≤ df + 3√(2·df)`.
pub fn chi_square_within_3sigma(observed: &[u64], probs: &[f64]) -> bool {
    let (stat, df) = chi_square(observed, probs);
    stat <= df as f64 + 3.0 * (2.0 * df as f64).sqrt()
}
