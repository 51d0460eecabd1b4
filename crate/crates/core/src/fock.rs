//! Integer-indexed Fock space for N qubits with conserved total z-magnetization.
//!
//! A basis state is a bitstring `n` of length N; its charge sector is the
//! excitation count `k = popcount(n)`, with charge `Q = k - N/2` in spin
//! units. All internal arithmetic is on `k`; half-integer `Q` appears only at
//! presentation boundaries.
//!
//! Bit convention, fixed throughout the crate: subsystem A holds the *high*
//! `N_A` bits and subsystem B the low `N_B` bits, so `n = (a << N_B) | b`.

use crate::combinatorics::{binomial_u128, ln_binomial_row};
use crate::error::{Error, Result};
use crate::numeric::log_sum_exp;

/// Largest qubit count for which dense `2^N` indexing is representable here.
pub const MAX_INDEXED_QUBITS: usize = 63;

/// Bipartition of an N-qubit register into A (high bits) and B (low bits).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemPartition {
    n_total: usize,
    n_a: usize,
}

impl SystemPartition {
    /// Requires `1 <= N_A <= N - 1`.
    pub fn new(n_total: usize, n_a: usize) -> Result<Self> {
        if n_total < 2 || n_a < 1 || n_a > n_total - 1 {
            return Err(Error::InvalidPartition { n: n_total, n_a });
        }
        Ok(Self { n_total, n_a })
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_total - self.n_a
    }

    /// Hilbert-space dimension `2^N`. Only meaningful for N small enough to
    /// index densely; guarded by construction paths that materialize states.
    pub fn dim(&self) -> usize {
        1usize << self.n_total
    }

    pub fn dim_a(&self) -> usize {
        1usize << self.n_a
    }

    pub fn dim_b(&self) -> usize {
        1usize << self.n_b()
    }

    /// The same cut described from B's point of view.
    pub fn swapped(&self) -> Self {
        Self { n_total: self.n_total, n_a: self.n_b() }
    }
}

/// A charge sector: excitation count `k` and its spin-unit charge `Q = k - N/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeValue {
    pub k: usize,
    pub q: f64,
}

impl ChargeValue {
    pub fn from_k(k: usize, n: usize) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidSector { k, n });
        }
        Ok(Self { k, q: k as f64 - n as f64 / 2.0 })
    }
}

/// Charge of a basis state: `k = popcount(index)`, `Q = k - N/2`.
pub fn charge_of(basis_index: usize, n: usize) -> Result<ChargeValue> {
    if n == 0 || n > MAX_INDEXED_QUBITS || basis_index >= (1usize << n) {
        return Err(Error::IndexOutOfRange { index: basis_index, n });
    }
    ChargeValue::from_k(basis_index.count_ones() as usize, n)
}

/// Split a basis index into `(a, b)` with A on the high bits.
pub fn split_index(basis_index: usize, partition: SystemPartition) -> Result<(usize, usize)> {
    let n = partition.n_total();
    if n > MAX_INDEXED_QUBITS || basis_index >= (1usize << n) {
        return Err(Error::IndexOutOfRange { index: basis_index, n });
    }
    let n_b = partition.n_b();
    Ok((basis_index >> n_b, basis_index & ((1usize << n_b) - 1)))
}

/// Inverse of [`split_index`].
pub fn recombine(a: usize, b: usize, partition: SystemPartition) -> usize {
    debug_assert!(a < partition.dim_a() && b < partition.dim_b());
    (a << partition.n_b()) | b
}

/// Exact charge spectrum of N qubits: sector dimensions `binom(N, k)` held in
/// log space, together with the Gaussian surrogate widths `gamma` (per site)
/// and `Gamma = sqrt(N) * gamma` (total).
///
/// `Omega(Q_k) = binom(N, k) / 2^N` is the fraction of basis states in sector
/// k; `D * Omega` is the sector dimension. Log-space storage keeps N up to
/// several hundred exact to f64 precision (the logs are taken from exact
/// big-integer coefficients, see [`crate::combinatorics`]).
#[derive(Debug, Clone)]
pub struct SpectralDensity {
    n: usize,
    ln_sector_dim: Vec<f64>,
    gamma: f64,
    big_gamma: f64,
}

impl SpectralDensity {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one qubit");
        Self {
            n,
            ln_sector_dim: ln_binomial_row(n as u64),
            gamma: 0.5,
            big_gamma: (n as f64).sqrt() / 2.0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of charge sectors, `N + 1`.
    pub fn num_sectors(&self) -> usize {
        self.n + 1
    }

    /// Per-site width of the Gaussian surrogate (1/2 for spin-1/2).
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Total width `Gamma = sqrt(N)/2`; equals the standard deviation of Q
    /// under `Omega`.
    pub fn big_gamma(&self) -> f64 {
        self.big_gamma
    }

    /// `ln(D * Omega(Q_k)) = ln binom(N, k)`.
    pub fn ln_sector_dim(&self, k: usize) -> f64 {
        self.ln_sector_dim[k]
    }

    /// Sector dimension `binom(N, k)` as f64 (may be inexact beyond 2^53).
    pub fn sector_dim(&self, k: usize) -> f64 {
        self.ln_sector_dim[k].exp()
    }

    /// Sector dimension as an exact integer when it fits.
    pub fn sector_dim_exact(&self, k: usize) -> Option<u128> {
        binomial_u128(self.n as u64, k as u64)
    }

    /// `ln Omega(Q_k)`.
    pub fn ln_omega(&self, k: usize) -> f64 {
        self.ln_sector_dim[k] - self.n as f64 * std::f64::consts::LN_2
    }

    /// `Omega(Q_k) = binom(N, k) / 2^N`.
    pub fn omega(&self, k: usize) -> f64 {
        self.ln_omega(k).exp()
    }

    pub fn omega_table(&self) -> Vec<f64> {
        (0..self.num_sectors()).map(|k| self.omega(k)).collect()
    }

    /// Charge of sector k in spin units.
    pub fn q_of_k(&self, k: usize) -> f64 {
        k as f64 - self.n as f64 / 2.0
    }

    /// `ln(sum_k D Omega(Q_k))`; equals `N ln 2` up to f64 rounding.
    pub fn ln_total_dim(&self) -> f64 {
        log_sum_exp(&self.ln_sector_dim)
    }

    /// A view over the same spectrum restricted to a subsystem.
    pub fn subsystem(&self, n_sub: usize) -> SpectralDensity {
        SpectralDensity::new(n_sub)
    }
}

/// Construct the exact spectral density of an N-qubit register.
pub fn spectral_density(n: usize) -> SpectralDensity {
    SpectralDensity::new(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn charge_of_reference_points() {
        let c = charge_of(0b0000, 4).unwrap();
        assert_eq!(c.k, 0);
        assert_eq!(c.q, -2.0);
        let c = charge_of(0b1111, 4).unwrap();
        assert_eq!(c.k, 4);
        assert_eq!(c.q, 2.0);
        let c = charge_of(0b0101, 4).unwrap();
        assert_eq!(c.k, 2);
        assert_eq!(c.q, 0.0);
        assert!(charge_of(16, 4).is_err());
    }

    #[test]
    fn split_keeps_a_on_high_bits() {
        let p = SystemPartition::new(3, 1).unwrap();
        assert_eq!(split_index(0b101, p).unwrap(), (0b1, 0b01));
        assert_eq!(split_index(0, p).unwrap(), (0, 0));
    }

    #[test]
    fn split_recombine_roundtrip_and_popcount_additivity() {
        let p = SystemPartition::new(6, 2).unwrap();
        for n_idx in 0..p.dim() {
            let (a, b) = split_index(n_idx, p).unwrap();
            assert_eq!(recombine(a, b, p), n_idx);
            assert_eq!(
                n_idx.count_ones(),
                a.count_ones() + b.count_ones(),
                "charge additivity across the cut"
            );
        }
    }

    #[test]
    fn partition_bounds_enforced() {
        assert!(SystemPartition::new(4, 0).is_err());
        assert!(SystemPartition::new(4, 4).is_err());
        let p = SystemPartition::new(4, 1).unwrap();
        assert_eq!(p.n_b(), 3);
        assert_eq!(p.swapped().n_a(), 3);
    }

    #[test]
    fn pascal_rows_small() {
        let s = spectral_density(2);
        let om = s.omega_table();
        for (got, want) in om.iter().zip([0.25, 0.5, 0.25]) {
            assert!((got - want).abs() < 1e-15);
        }
        let s = spectral_density(4);
        for (k, want) in [1.0, 4.0, 6.0, 4.0, 1.0].iter().enumerate() {
            assert!((s.sector_dim(k) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn brute_force_enumeration_matches_sector_dims() {
        for n in [4usize, 10, 16, 20] {
            let mut counts = vec![0u128; n + 1];
            for idx in 0usize..(1 << n) {
                counts[idx.count_ones() as usize] += 1;
            }
            let s = spectral_density(n);
            for k in 0..=n {
                assert_eq!(counts[k], s.sector_dim_exact(k).unwrap(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn large_n_log_space_is_finite_and_normalized() {
        let s = spectral_density(256);
        let center = s.ln_omega(128);
        assert!(center.is_finite());
        // sum_k D Omega = D, i.e. log-sum of sector dims equals N ln 2
        let total = s.ln_total_dim();
        let rel = (total - 256.0 * LN_2).abs() / (256.0 * LN_2);
        assert!(rel < 1e-10, "relative error {rel:e}");
    }

    #[test]
    fn omega_symmetric_under_sector_reflection() {
        let s = spectral_density(17);
        for k in 0..=17 {
            assert_eq!(
                s.ln_sector_dim(k).to_bits(),
                s.ln_sector_dim(17 - k).to_bits()
            );
        }
    }

    #[test]
    fn surrogate_width_matches_exact_charge_variance() {
        for n in [2usize, 7, 31, 60] {
            let s = spectral_density(n);
            let var: f64 = (0..=n).map(|k| s.omega(k) * s.q_of_k(k).powi(2)).sum();
            assert!(
                (var - s.big_gamma().powi(2)).abs() < 1e-12 * var.max(1.0),
                "n={n}: var={var}, Gamma^2={}",
                s.big_gamma().powi(2)
            );
            assert_eq!(s.gamma(), 0.5);
        }
    }

    #[test]
    fn vandermonde_convolution_exact_in_log_space() {
        // sum_{Q_A} Omega_A(Q_A) Omega_B(Q - Q_A) = Omega(Q)
        for (n, n_a) in [(16usize, 5usize), (128, 32), (512, 128)] {
            let s = spectral_density(n);
            let sa = spectral_density(n_a);
            let sb = spectral_density(n - n_a);
            for k in [0usize, 1, n / 3, n / 2, n] {
                let lo = k.saturating_sub(n - n_a);
                let hi = k.min(n_a);
                let terms: Vec<f64> = (lo..=hi)
                    .map(|ka| sa.ln_omega(ka) + sb.ln_omega(k - ka))
                    .collect();
                let lhs = crate::numeric::log_sum_exp(&terms);
                let rel = (lhs - s.ln_omega(k)).abs();
                assert!(rel < 1e-12, "n={n} n_a={n_a} k={k}: log error {rel:e}");
            }
        }
    }
}
