//! The maximum-entropy ensemble over pure states conditioned on p(Q).
//!
//! Solving the variational problem gives Gaussian amplitudes with per-sector
//! variance `rho(Q) = p(Q) / (D Omega(Q))` and Lagrange multipliers
//! `lambda_0 + lambda(Q) = D Omega(Q) / p(Q)` on the support of p. Everything
//! here is per-sector (N + 1 entries), never per-state; dense vectors are
//! materialized lazily by the sampler.

use crate::distribution::ChargeDistribution;
use crate::fock::SpectralDensity;

/// Per-sector amplitude variances and multipliers for a conditioned ensemble.
#[derive(Debug, Clone)]
pub struct MaxEntEnsemble {
    n: usize,
    sector_weight: Vec<f64>,
    ln_sector_dim: Vec<f64>,
    rho: Vec<f64>,
    ln_rho: Vec<f64>,
    multiplier: Vec<Option<f64>>,
}

impl MaxEntEnsemble {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The conditioning weights p(Q_k) the ensemble reproduces on average.
    pub fn sector_weight(&self, k: usize) -> f64 {
        self.sector_weight[k]
    }

    pub fn sector_weights(&self) -> &[f64] {
        &self.sector_weight
    }

    /// Amplitude variance `rho(Q_k)` of a basis state in sector k; zero off
    /// the support of p.
    pub fn rho(&self, k: usize) -> f64 {
        self.rho[k]
    }

    pub fn rho_table(&self) -> &[f64] {
        &self.rho
    }

    /// `lambda_0 + lambda(Q_k) = D Omega(Q_k) / p(Q_k)`; absent (rather than
    /// infinite) off the support of p.
    pub fn multiplier(&self, k: usize) -> Option<f64> {
        self.multiplier[k]
    }

    /// `sum_n rho_n = sum_k binom(N,k) rho(Q_k)`; equals 1 by construction.
    pub fn total_weight(&self) -> f64 {
        (0..=self.n)
            .filter(|&k| self.rho[k] > 0.0)
            .map(|k| (self.ln_sector_dim[k] + self.ln_rho[k]).exp())
            .sum()
    }

    /// Rebuild the input table from the variances: `p(Q) = D Omega(Q) rho(Q)`.
    pub fn reconstruct_input(&self) -> Vec<f64> {
        (0..=self.n)
            .map(|k| {
                if self.rho[k] > 0.0 {
                    (self.ln_sector_dim[k] + self.ln_rho[k]).exp()
                } else {
                    0.0
                }
            })
            .collect()
    }
}

/// Solve the variational equations for an input distribution.
pub fn build_ensemble(p: &ChargeDistribution, spectral: &SpectralDensity) -> MaxEntEnsemble {
    let n = spectral.n();
    assert_eq!(p.n(), n, "distribution and spectrum must share N");
    let mut rho = vec![0.0; n + 1];
    let mut ln_rho = vec![f64::NEG_INFINITY; n + 1];
    let mut multiplier = vec![None; n + 1];
    let mut ln_sector_dim = vec![0.0; n + 1];
    for k in 0..=n {
        ln_sector_dim[k] = spectral.ln_sector_dim(k);
        if p.weight(k) > 0.0 {
            ln_rho[k] = p.ln_weight(k) - spectral.ln_sector_dim(k);
            rho[k] = ln_rho[k].exp();
            multiplier[k] = Some((spectral.ln_sector_dim(k) - p.ln_weight(k)).exp());
        }
    }
    MaxEntEnsemble {
        n,
        sector_weight: p.weights().to_vec(),
        ln_sector_dim,
        rho,
        ln_rho,
        multiplier,
    }
}

/// Von Neumann entropy of the average spectral-weight distribution:
/// `S(rho) = -sum_k binom(N,k) rho(Q_k) ln rho(Q_k)` over the support.
pub fn ensemble_entropy(e: &MaxEntEnsemble) -> f64 {
    (0..=e.n())
        .filter(|&k| e.rho(k) > 0.0)
        .map(|k| -e.sector_weight(k) * e.ln_rho[k])
        .sum()
}
