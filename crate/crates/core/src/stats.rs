//! Distribution distances and goodness-of-fit statistics.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Result};

/// `P(X = q)` for `X ~ Poisson(mean)`; mean 0 is the point mass at 0.
pub fn poisson_pmf(q: u64, mean: f64) -> f64 {
    if mean == 0.0 {
        return if q == 0 { 1.0 } else { 0.0 };
    }
    (q as f64 * mean.ln() - mean - ln_gamma(q as f64 + 1.0)).exp()
}

/// Pearson statistic with bins pooled left to right until each expected count
/// reaches `min_expected`; a short final bin is merged into its neighbour.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    /// Upper-tail probability; absent when fewer than two bins remain.
    pub p_value: Option<f64>,
}

/// `observed[i]` against probabilities `expected[i]`. Probability mass not
/// covered by `expected` is added to the last cell.
pub fn chi_square(observed: &[u64], expected: &[f64], min_expected: f64) -> Result<ChiSquare> {
    if observed.len() != expected.len() || observed.is_empty() {
        return Err(invalid("observed and expected need the same nonzero length"));
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(invalid("no observations"));
    }
    let total = total as f64;
    let covered: f64 = expected.iter().sum();
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (i, (&obs, &p)) in observed.iter().zip(expected).enumerate() {
        o += obs as f64;
        e += p * total;
        if i + 1 == observed.len() {
            e += (1.0 - covered).max(0.0) * total;
        }
        if e >= min_expected {
            bins.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => bins.push((o, e)),
        }
    }
    let statistic = bins
        .iter()
        .map(|&(o, e)| if e > 0.0 { (o - e) * (o - e) / e } else { 0.0 })
        .sum();
    let dof = bins.len().saturating_sub(1);
    let p_value = (dof > 0).then(|| {
        let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
        1.0 - dist.cdf(statistic)
    });
    Ok(ChiSquare {
        statistic,
        dof,
        p_value,
    })
}

/// Total-variation distance between two probability vectors, padding the
/// shorter with zeros.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * (0..len).map(|i| (at(p, i) - at(q, i)).abs()).sum::<f64>()
}

/// Empirical frequencies of count samples, indexed by value.
pub fn histogram(samples: &[u64]) -> Vec<u64> {
    let max = samples.iter().copied().max().unwrap_or(0) as usize;
    let mut h = vec![0u64; max + 1];
    for &s in samples {
        h[s as usize] += 1;
    }
    h
}

/// Exact binomial standard error `sqrt(p (1 - p) / n)` of a proportion.
pub fn binomial_stderr(successes: u64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    let p = successes as f64 / trials as f64;
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Clopper–Pearson interval for a binomial proportion at level `1 - alpha`.
pub fn clopper_pearson(successes: u64, trials: u64, alpha: f64) -> (f64, f64) {
    use statrs::distribution::Beta;
    if trials == 0 {
        return (0.0, 1.0);
    }
    let (x, n) = (successes as f64, trials as f64);
    let lower = if successes == 0 {
        0.0
    } else {
        Beta::new(x, n - x + 1.0).unwrap().inverse_cdf(alpha / 2.0)
    };
    let upper = if successes == trials {
        1.0
    } else {
        Beta::new(x + 1.0, n - x).unwrap().inverse_cdf(1.0 - alpha / 2.0)
    };
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmf_values() {
        assert!((poisson_pmf(0, 1.0) - (-1.0f64).exp()).abs() < 1e-12);
        assert!((poisson_pmf(2, 2.0) - 2.0 * (-2.0f64).exp()).abs() < 1e-12);
        assert_eq!(poisson_pmf(0, 0.0), 1.0);
        let total: f64 = (0..60).map(|q| poisson_pmf(q, 7.5)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chi_square_pools_small_bins() {
        let c = chi_square(&[50, 50], &[0.5, 0.5], 5.0).unwrap();
        assert_eq!((c.statistic, c.dof), (0.0, 1));
        assert!((c.p_value.unwrap() - 1.0).abs() < 1e-12);
        // the two rare cells merge into the last common one
        let c = chi_square(&[40, 58, 1, 1], &[0.4, 0.58, 0.01, 0.01], 5.0).unwrap();
        assert_eq!(c.dof, 1);
        let single = chi_square(&[10], &[1.0], 5.0).unwrap();
        assert_eq!(single.p_value, None);
        assert!(chi_square(&[], &[], 5.0).is_err());
    }

    #[test]
    fn distances_and_intervals() {
        assert_eq!(total_variation(&[1.0], &[0.0, 1.0]), 1.0);
        assert_eq!(histogram(&[0, 2, 2]), vec![1, 0, 2]);
        assert!((binomial_stderr(50, 100) - 0.05).abs() < 1e-12);
        let (lo, hi) = clopper_pearson(50, 100, 0.05);
        assert!(lo < 0.5 && hi > 0.5 && lo > 0.39 && hi < 0.61);
        assert_eq!(clopper_pearson(0, 10, 0.05).0, 0.0);
        assert_eq!(clopper_pearson(10, 10, 0.05).1, 1.0);
    }
}
