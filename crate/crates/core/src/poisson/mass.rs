use serde::{Deserialize, Serialize};

use super::signature::PoissonSignature;
use crate::error::{invalid, Result};
use crate::stats::poisson_pmf;

/// Where a mean came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    UserSupplied,
    Estimated,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mean {
    pub value: f64,
    pub provenance: Provenance,
}

impl Mean {
    pub fn user(value: f64) -> Mean {
        Mean {
            value,
            provenance: Provenance::UserSupplied,
        }
    }
}

/// Limit means of the object counts. The mean of the degree-(d-2) count is
/// `d - 1` and is not stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonParams {
    d: usize,
    /// `lambda[j - 3]` for cycles of length `j`.
    lambda: Vec<Mean>,
    /// `mu[j - 1]` for paths with `j` edges.
    mu: Vec<Mean>,
}

impl PoissonParams {
    pub fn new(d: usize, lambda: Vec<Mean>, mu: Vec<Mean>) -> Result<PoissonParams> {
        if lambda.len() != mu.len().saturating_sub(2) {
            return Err(invalid(format!(
                "{} cycle means do not match {} path means",
                lambda.len(),
                mu.len()
            )));
        }
        if let Some(bad) = lambda.iter().chain(&mu).find(|m| !(m.value > 0.0 && m.value.is_finite())) {
            return Err(invalid(format!("mean {} is not positive", bad.value)));
        }
        Ok(PoissonParams { d, lambda, mu })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn t(&self) -> usize {
        self.mu.len()
    }

    pub fn lambda(&self) -> &[Mean] {
        &self.lambda
    }

    pub fn mu(&self) -> &[Mean] {
        &self.mu
    }
}

/// `(d-1)^q e^{-(d-1)} / q!`; for `d <= 1` the point mass at 0.
pub fn degree_factor(q: u64, d: usize) -> f64 {
    poisson_pmf(q, d.saturating_sub(1) as f64)
}

/// Product over parts of the Poisson probabilities of every count.
pub fn poisson_mass(sig: &PoissonSignature, params: &PoissonParams) -> Result<f64> {
    if sig.d != params.d || sig.t != params.t() {
        return Err(invalid(format!(
            "signature has (d, t) = ({}, {}) but parameters have ({}, {})",
            sig.d,
            sig.t,
            params.d,
            params.t()
        )));
    }
    let mut mass = 1.0;
    for part in &sig.parts {
        mass *= degree_factor(part.q, sig.d);
        for (&r, m) in part.cycles.iter().zip(&params.lambda) {
            mass *= poisson_pmf(r, m.value);
        }
        for (&s, m) in part.paths.iter().zip(&params.mu) {
            mass *= poisson_pmf(s, m.value);
        }
    }
    Ok(mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::ObjectCounts;

    fn params(d: usize, t: usize, lam: f64, mu: f64) -> PoissonParams {
        PoissonParams::new(d, vec![Mean::user(lam); t - 2], vec![Mean::user(mu); t]).unwrap()
    }

    fn zero_sig(l: usize, d: usize, t: usize) -> PoissonSignature {
        PoissonSignature {
            d,
            t,
            parts: vec![
                ObjectCounts {
                    q: 0,
                    cycles: vec![0; t - 2],
                    paths: vec![0; t]
                };
                l
            ],
        }
    }

    #[test]
    fn degree_factor_values() {
        assert!((degree_factor(0, 2) - 0.367_879).abs() < 1e-6);
        assert!((degree_factor(2, 3) - 0.270_671).abs() < 1e-6);
        assert_eq!(degree_factor(0, 1), 1.0);
        assert_eq!(degree_factor(1, 1), 0.0);
    }

    #[test]
    fn all_zero_signature_closed_form() {
        let (l, d, t) = (3, 3, 5);
        let p = params(d, t, 0.2, 0.1);
        let want = (-(l as f64) * ((d - 1) as f64 + 0.2 * 3.0 + 0.1 * 5.0)).exp();
        assert!((poisson_mass(&zero_sig(l, d, t), &p).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn masses_sum_to_one() {
        // one part, t = 3: q, r_3, s_1..s_3, each summed up to 25
        let p = params(2, 3, 0.5, 0.3);
        let mut total = 0.0;
        let mut sig = zero_sig(1, 2, 3);
        for q in 0..25 {
            for r in 0..25 {
                sig.parts[0].q = q;
                sig.parts[0].cycles[0] = r;
                let base = poisson_mass(&sig, &p).unwrap() / (poisson_pmf(0, 0.3).powi(3));
                total += base;
            }
        }
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn validation() {
        assert!(PoissonParams::new(2, vec![Mean::user(1.0)], vec![Mean::user(1.0); 2]).is_err());
        assert!(PoissonParams::new(2, vec![Mean::user(0.0)], vec![Mean::user(1.0); 3]).is_err());
        let p = params(2, 5, 1.0, 1.0);
        assert!(poisson_mass(&zero_sig(1, 2, 3), &p).is_err());
    }
}
