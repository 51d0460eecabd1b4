//! Input charge distributions p(Q), their discretization over sectors, the
//! induced subsystem distribution p_A(Q_A), and the input-information
//! functional.
//!
//! Every distribution is materialized as a normalized table over the N + 1
//! charge sectors, indexed by excitation count k. Sums that mix p with the
//! spectral density are done on logarithms so large N stays exact.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fock::{SpectralDensity, SystemPartition};
use crate::numeric::log_sum_exp;

/// Normalization tolerance enforced on every constructed table.
pub const NORM_TOL: f64 = 1e-12;

/// The analytic family a table was discretized from.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionKind {
    /// Continuous Gaussian of center `q_bar` and width `delta_q` (spin units),
    /// evaluated at sector charges and renormalized.
    Gaussian { q_bar: f64, delta_q: f64 },
    /// Point mass on a single sector.
    Microcanonical { k0: usize },
    /// Uniform over the N + 1 sectors (a statement about the charge variable,
    /// not about basis states).
    Flat,
    /// Charge table of a product of M cat blocks of L spins each.
    CatProduct { blocks: usize, block_size: usize },
    /// User-supplied weights over excitation counts.
    Tabulated,
    /// The unconstrained case p = Omega.
    Spectral,
}

impl std::fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Gaussian { q_bar, delta_q } => write!(f, "gaussian(qbar={q_bar},dq={delta_q})"),
            Self::Microcanonical { k0 } => write!(f, "microcanonical(k0={k0})"),
            Self::Flat => write!(f, "flat"),
            Self::CatProduct { blocks, block_size } => write!(f, "cat({blocks},{block_size})"),
            Self::Tabulated => write!(f, "tabulated"),
            Self::Spectral => write!(f, "spectral"),
        }
    }
}

/// A normalized input distribution p(Q) over the charge sectors of N qubits.
#[derive(Debug, Clone)]
pub struct ChargeDistribution {
    n: usize,
    kind: DistributionKind,
    table: Vec<f64>,
}

#[derive(Deserialize)]
struct TabulatedFile {
    n: usize,
    weights: Vec<f64>,
}

impl ChargeDistribution {
    fn from_unnormalized(n: usize, kind: DistributionKind, mut table: Vec<f64>) -> Result<Self> {
        debug_assert_eq!(table.len(), n + 1);
        if table.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidWeights);
        }
        let total: f64 = table.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidWeights);
        }
        for w in &mut table {
            *w /= total;
        }
        Ok(Self { n, kind, table })
    }

    /// Gaussian of center `q_bar` and width `delta_q > 0`, evaluated at the
    /// sector charges `Q_k = k - N/2` and renormalized.
    pub fn gaussian(spectral: &SpectralDensity, q_bar: f64, delta_q: f64) -> Result<Self> {
        if !(delta_q > 0.0) {
            return Err(Error::NonPositiveWidth { width: delta_q });
        }
        let n = spectral.n();
        let exponents: Vec<f64> = (0..=n)
            .map(|k| {
                let q = spectral.q_of_k(k);
                -(q - q_bar) * (q - q_bar) / (2.0 * delta_q * delta_q)
            })
            .collect();
        let shift = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let table = exponents.iter().map(|e| (e - shift).exp()).collect();
        Self::from_unnormalized(n, DistributionKind::Gaussian { q_bar, delta_q }, table)
    }

    /// Point mass on sector `k0`.
    pub fn microcanonical(spectral: &SpectralDensity, k0: usize) -> Result<Self> {
        let n = spectral.n();
        if k0 > n {
            return Err(Error::InvalidSector { k: k0, n });
        }
        let mut table = vec![0.0; n + 1];
        table[k0] = 1.0;
        Ok(Self { n, kind: DistributionKind::Microcanonical { k0 }, table })
    }

    /// Uniform weight 1/(N+1) on every sector.
    pub fn flat(spectral: &SpectralDensity) -> Self {
        let n = spectral.n();
        Self {
            n,
            kind: DistributionKind::Flat,
            table: vec![1.0 / (n as f64 + 1.0); n + 1],
        }
    }

    /// Charge table of M cat blocks of L spins: weight `2^-M binom(M, j)` on
    /// sector `k = j L`, zero elsewhere. Requires `M * L = N`.
    pub fn cat_product(spectral: &SpectralDensity, blocks: usize, block_size: usize) -> Result<Self> {
        let n = spectral.n();
        if blocks == 0 || block_size == 0 || blocks * block_size != n {
            return Err(Error::BlockMismatch { blocks, block_size, n });
        }
        let mut table = vec![0.0; n + 1];
        let norm = 0.5f64.powi(blocks as i32);
        for j in 0..=blocks {
            let w = crate::combinatorics::binomial_u128(blocks as u64, j as u64)
                .map(|c| c as f64)
                .unwrap_or_else(|| {
                    (crate::combinatorics::ln_binomial_row(blocks as u64)[j]).exp()
                });
            table[j * block_size] = w * norm;
        }
        Self::from_unnormalized(n, DistributionKind::CatProduct { blocks, block_size }, table)
    }

    /// User-supplied sector weights (length N + 1), renormalized.
    pub fn tabulated(spectral: &SpectralDensity, weights: &[f64]) -> Result<Self> {
        let n = spectral.n();
        if weights.len() != n + 1 {
            return Err(Error::WeightLength { got: weights.len(), expected: n + 1 });
        }
        Self::from_unnormalized(n, DistributionKind::Tabulated, weights.to_vec())
    }

    /// The unconstrained case p = Omega.
    pub fn matching_spectrum(spectral: &SpectralDensity) -> Self {
        let n = spectral.n();
        let table = spectral.omega_table();
        Self { n, kind: DistributionKind::Spectral, table }
    }

    /// Load a tabulated distribution from a JSON document
    /// `{"n": N, "weights": [w_0..w_N]}` (weights over excitation counts,
    /// renormalized on load).
    pub fn from_json(doc: &str) -> Result<Self> {
        let parsed: TabulatedFile = serde_json::from_str(doc)?;
        let spectral = SpectralDensity::new(parsed.n);
        Self::tabulated(&spectral, &parsed.weights)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &DistributionKind {
        &self.kind
    }

    pub fn weights(&self) -> &[f64] {
        &self.table
    }

    pub fn weight(&self, k: usize) -> f64 {
        self.table[k]
    }

    /// `ln p(Q_k)`, `-inf` off the support.
    pub fn ln_weight(&self, k: usize) -> f64 {
        if self.table[k] > 0.0 {
            self.table[k].ln()
        } else {
            f64::NEG_INFINITY
        }
    }

    /// Mean of Q under the table.
    pub fn mean_q(&self) -> f64 {
        let half = self.n as f64 / 2.0;
        self.table
            .iter()
            .enumerate()
            .map(|(k, w)| w * (k as f64 - half))
            .sum()
    }

    /// Variance of Q under the table.
    pub fn var_q(&self) -> f64 {
        let m = self.mean_q();
        let half = self.n as f64 / 2.0;
        self.table
            .iter()
            .enumerate()
            .map(|(k, w)| {
                let q = k as f64 - half;
                w * (q - m) * (q - m)
            })
            .sum()
    }
}

/// The charge distribution imprinted on subsystem A by an input p(Q):
/// `p_A(Q_A) = Omega_A(Q_A) sum_{Q_B} Omega_B(Q_B) p(Q_A + Q_B) / Omega(Q_A + Q_B)`.
#[derive(Debug, Clone)]
pub struct ReducedChargeDistribution {
    partition: SystemPartition,
    table: Vec<f64>,
    ln_table: Vec<f64>,
}

impl ReducedChargeDistribution {
    pub fn partition(&self) -> SystemPartition {
        self.partition
    }

    pub fn n_a(&self) -> usize {
        self.partition.n_a()
    }

    pub fn weights(&self) -> &[f64] {
        &self.table
    }

    pub fn weight(&self, k_a: usize) -> f64 {
        self.table[k_a]
    }

    pub fn ln_weight(&self, k_a: usize) -> f64 {
        self.ln_table[k_a]
    }

    pub fn mean_q(&self) -> f64 {
        let half = self.n_a() as f64 / 2.0;
        self.table
            .iter()
            .enumerate()
            .map(|(k, w)| w * (k as f64 - half))
            .sum()
    }

    pub fn var_q(&self) -> f64 {
        let m = self.mean_q();
        let half = self.n_a() as f64 / 2.0;
        self.table
            .iter()
            .enumerate()
            .map(|(k, w)| {
                let q = k as f64 - half;
                w * (q - m) * (q - m)
            })
            .sum()
    }
}

/// Exact discrete double sum for p_A, computed on logarithms of exact
/// binomials. Normalization is guaranteed by the sector convolution identity
/// and asserted before the table is renormalized to machine precision.
pub fn induced_subsystem_distribution(
    p: &ChargeDistribution,
    spectral: &SpectralDensity,
    partition: SystemPartition,
) -> ReducedChargeDistribution {
    let n = spectral.n();
    assert_eq!(p.n(), n, "distribution and spectrum must share N");
    assert_eq!(partition.n_total(), n, "partition and spectrum must share N");
    let n_a = partition.n_a();
    let n_b = partition.n_b();
    let spec_a = SpectralDensity::new(n_a);
    let spec_b = SpectralDensity::new(n_b);

    // ln p_A(k_A) = ln binom(N_A,k_A) + lse_{k_B}[ln binom(N_B,k_B) + ln p(k) - ln binom(N,k)]
    //   (the 2^N factors of the three Omegas cancel exactly).
    let mut ln_table: Vec<f64> = (0..=n_a)
        .map(|k_a| {
            let terms: Vec<f64> = (0..=n_b)
                .filter(|k_b| p.weight(k_a + k_b) > 0.0)
                .map(|k_b| {
                    let k = k_a + k_b;
                    spec_b.ln_sector_dim(k_b) + p.ln_weight(k) - spectral.ln_sector_dim(k)
                })
                .collect();
            spec_a.ln_sector_dim(k_a) + log_sum_exp(&terms) - n_a as f64 * std::f64::consts::LN_2
        })
        .collect();

    let ln_total = log_sum_exp(&ln_table);
    assert!(
        (ln_total.exp() - 1.0).abs() < 1e-9,
        "subsystem table should normalize by the sector convolution identity, got {}",
        ln_total.exp()
    );
    for lt in &mut ln_table {
        *lt -= ln_total;
    }
    let table: Vec<f64> = ln_table.iter().map(|lt| lt.exp()).collect();
    debug_assert!((table.iter().sum::<f64>() - 1.0).abs() < NORM_TOL);

    ReducedChargeDistribution { partition, table, ln_table }
}

/// Closed-form Gaussian surrogate for the induced subsystem distribution:
/// `p_A(Q_A) ~ (N/N_A) Normal(Q_A N / N_A; center, width)` with
/// `width^2 = Gamma^2 N_B / N_A + delta_q^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedGaussian {
    pub center: f64,
    pub width: f64,
    partition: SystemPartition,
}

impl InducedGaussian {
    /// Mean of Q_A implied by the surrogate.
    pub fn mean_q_a(&self) -> f64 {
        self.center * self.partition.n_a() as f64 / self.partition.n_total() as f64
    }

    /// Variance of Q_A implied by the surrogate.
    pub fn var_q_a(&self) -> f64 {
        let ratio = self.partition.n_a() as f64 / self.partition.n_total() as f64;
        ratio * ratio * self.width * self.width
    }
}

/// Surrogate parameters for a Gaussian input. Errors if the input was not
/// constructed from the Gaussian family.
pub fn induced_gaussian_params(
    p: &ChargeDistribution,
    partition: SystemPartition,
    spectral: &SpectralDensity,
) -> Result<InducedGaussian> {
    let DistributionKind::Gaussian { q_bar, delta_q } = *p.kind() else {
        return Err(Error::KindMismatch { got: kind_name(p.kind()) });
    };
    let gamma2 = spectral.big_gamma().powi(2);
    let lambda2 = gamma2 * partition.n_b() as f64 / partition.n_a() as f64 + delta_q * delta_q;
    Ok(InducedGaussian { center: q_bar, width: lambda2.sqrt(), partition })
}

fn kind_name(kind: &DistributionKind) -> &'static str {
    match kind {
        DistributionKind::Gaussian { .. } => "gaussian",
        DistributionKind::Microcanonical { .. } => "microcanonical",
        DistributionKind::Flat => "flat",
        DistributionKind::CatProduct { .. } => "cat",
        DistributionKind::Tabulated => "tabulated",
        DistributionKind::Spectral => "spectral",
    }
}

/// Input information `sum_Q p ln(p / Omega)` with `0 ln 0 = 0`; nonnegative
/// up to rounding, zero exactly when p = Omega.
pub fn input_information(p: &ChargeDistribution, spectral: &SpectralDensity) -> f64 {
    assert_eq!(p.n(), spectral.n());
    (0..=p.n())
        .filter(|&k| p.weight(k) > 0.0)
        .map(|k| p.weight(k) * (p.ln_weight(k) - spectral.ln_omega(k)))
        .sum()
}
