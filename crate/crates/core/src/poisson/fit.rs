use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::stats::{chi_square, histogram, poisson_pmf, total_variation, ChiSquare};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub samples: usize,
    pub mean: f64,
    pub sample_mean: f64,
    pub tv: f64,
    pub chisq: ChiSquare,
}

/// Distance between the empirical law of `samples` and `Poisson(mean)`. The
/// Poisson tail beyond the largest observation forms one extra cell.
pub fn empirical_fit(samples: &[u64], mean: f64) -> Result<Fit> {
    if samples.is_empty() {
        return Err(invalid("no samples"));
    }
    if !(mean >= 0.0 && mean.is_finite()) {
        return Err(invalid(format!("mean {mean} is not a nonnegative number")));
    }
    let mut hist = histogram(samples);
    let total = samples.len() as f64;
    let mut model: Vec<f64> = (0..hist.len() as u64).map(|q| poisson_pmf(q, mean)).collect();
    let head: f64 = model.iter().sum();
    model.push((1.0 - head).max(0.0));
    hist.push(0);
    let empirical: Vec<f64> = hist.iter().map(|&c| c as f64 / total).collect();
    let tv = total_variation(&empirical, &model);
    let chisq = chi_square(&hist, &model, 5.0)?;
    Ok(Fit {
        samples: samples.len(),
        mean,
        sample_mean: samples.iter().sum::<u64>() as f64 / total,
        tv,
        chisq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn draw(rng: &mut ChaCha8Rng, mean: f64) -> u64 {
        let mut u: f64 = rng.gen();
        let mut q = 0;
        loop {
            u -= poisson_pmf(q, mean);
            if u < 0.0 {
                return q;
            }
            q += 1;
        }
    }

    #[test]
    fn point_mass_at_zero() {
        let f = empirical_fit(&[0; 50], 1.0).unwrap();
        assert!((f.tv - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
        assert!(empirical_fit(&[0], 1e-9).unwrap().tv < 1e-8);
        assert!(empirical_fit(&[], 1.0).is_err());
    }

    #[test]
    fn poisson_draws_fit() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let samples: Vec<u64> = (0..100_000).map(|_| draw(&mut rng, 1.0)).collect();
        let f = empirical_fit(&samples, 1.0).unwrap();
        assert!(f.tv < 0.01, "{f:?}");
        assert!(f.chisq.p_value.unwrap() > 1e-4);
    }
}
