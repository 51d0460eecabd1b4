//! Drawing pure states from a conditioned ensemble, bit-partitioned partial
//! traces, spectral entanglement entropies, and Monte Carlo campaigns.
//!
//! Reproducibility contract: every sample is generated by a counter-based RNG
//! (ChaCha with the sample index as stream), so campaigns give bit-identical
//! results for any worker count, and a recorded seed replays a run exactly.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::ensemble::MaxEntEnsemble;
use crate::error::{Error, Result};
use crate::fock::SystemPartition;

/// Eigenvalues of a reduced density matrix below this are treated as rounding
/// noise and clamped to zero; anything more negative is a numerical failure.
pub const EIGENVALUE_TOL: f64 = 1e-10;

/// Largest register the dense mixed-state accumulation supports.
pub const MAX_MIXED_CHECK_QUBITS: usize = 12;

/// A normalized dense state vector over `2^N` basis amplitudes.
#[derive(Debug, Clone)]
pub struct PureState {
    n: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Wrap amplitudes, renormalizing exactly. Errors on a zero vector or a
    /// length that is not a power of two matching some N.
    pub fn from_amplitudes(n: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << n {
            return Err(Error::IndexOutOfRange { index: amps.len(), n });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Numerical("cannot normalize a zero state".into()));
        }
        for a in &mut amps {
            *a /= norm;
        }
        Ok(Self { n, amps })
    }

    pub(crate) fn new_normalized(n: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1usize << n);
        Self { n, amps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Draw one state: each amplitude is complex Gaussian with variance
/// `rho(Q_k)` of its sector, then the vector is normalized exactly.
/// Deterministic in `seed`.
pub fn sample_state(e: &MaxEntEnsemble, seed: u64) -> PureState {
    sample_state_indexed(e, seed, 0)
}

/// The `index`-th state of a campaign keyed by `seed`; identical for serial
/// and parallel execution.
pub fn sample_state_indexed(e: &MaxEntEnsemble, seed: u64, index: u64) -> PureState {
    let n = e.n();
    assert!(n <= 30, "dense sampling beyond N = 30 is not supported");
    let dim = 1usize << n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    // Per-component std dev: variance rho is split evenly between re and im.
    let sigma: Vec<f64> = (0..=n).map(|k| (e.rho(k) / 2.0).sqrt()).collect();
    let mut amps = Vec::with_capacity(dim);
    let mut norm_sq = 0.0;
    for idx in 0..dim {
        let s = sigma[idx.count_ones() as usize];
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        let a = Complex64::new(re * s, im * s);
        norm_sq += a.norm_sqr();
        amps.push(a);
    }
    let norm = norm_sq.sqrt();
    assert!(norm > 0.0, "drew a zero vector; ensemble support is empty");
    for a in &mut amps {
        *a /= norm;
    }
    PureState::new_normalized(n, amps)
}

/// Empirical sector weights `q_k = sum_{popcount(n)=k} |psi_n|^2`.
pub fn measure_charge_distribution(s: &PureState) -> Vec<f64> {
    let mut table = vec![0.0; s.n() + 1];
    for (idx, a) in s.amplitudes().iter().enumerate() {
        table[idx.count_ones() as usize] += a.norm_sqr();
    }
    table
}

/// Dense reduced density matrix of subsystem A (high bits):
/// `rho_A[a, a'] = sum_b psi_(a,b) conj(psi_(a',b))`.
#[derive(Debug, Clone)]
pub struct ReducedDensityMatrix {
    partition: SystemPartition,
    mat: DMatrix<Complex64>,
}

impl ReducedDensityMatrix {
    pub fn partition(&self) -> SystemPartition {
        self.partition
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                worst = worst.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues, clamped to `[0, inf)` within [`EIGENVALUE_TOL`]; errors on
    /// a genuinely negative spectrum (upstream numerical failure).
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let eig = self.mat.clone().symmetric_eigenvalues();
        let mut out = Vec::with_capacity(eig.len());
        for &lam in eig.iter() {
            if lam < -EIGENVALUE_TOL {
                return Err(Error::Numerical(format!(
                    "reduced density matrix has eigenvalue {lam} below -{EIGENVALUE_TOL}"
                )));
            }
            out.push(lam.max(0.0));
        }
        Ok(out)
    }
}

/// Partial trace over B using the fixed high-bits-A layout.
pub fn reduced_density_matrix(s: &PureState, partition: SystemPartition) -> ReducedDensityMatrix {
    assert_eq!(partition.n_total(), s.n(), "partition must match the state");
    let d_a = partition.dim_a();
    let d_b = partition.dim_b();
    let amps = s.amplitudes();
    let mut mat = DMatrix::<Complex64>::zeros(d_a, d_a);
    for a in 0..d_a {
        let row_a = &amps[a * d_b..(a + 1) * d_b];
        for a2 in a..d_a {
            let row_b = &amps[a2 * d_b..(a2 + 1) * d_b];
            let mut acc = Complex64::new(0.0, 0.0);
            for b in 0..d_b {
                acc += row_a[b] * row_b[b].conj();
            }
            mat[(a, a2)] = acc;
            if a2 != a {
                mat[(a2, a)] = acc.conj();
            }
        }
    }
    ReducedDensityMatrix { partition, mat }
}

fn spectrum_entropy(eigs: &[f64]) -> f64 {
    eigs.iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum()
}

/// Von Neumann entanglement entropy from the eigenvalue spectrum, with
/// `0 ln 0 = 0`.
pub fn entanglement_entropy(rho_a: &ReducedDensityMatrix) -> Result<f64> {
    Ok(spectrum_entropy(&rho_a.eigenvalues()?))
}

/// Renyi entropy `(1/(1-r)) ln tr(rho_A^r)` for integer order r >= 2.
pub fn renyi_entropy(rho_a: &ReducedDensityMatrix, order: u32) -> Result<f64> {
    if order < 2 {
        return Err(Error::RenyiOrder { order });
    }
    let eigs = rho_a.eigenvalues()?;
    let trace_pow: f64 = eigs.iter().map(|l| l.powi(order as i32)).sum();
    Ok(trace_pow.ln() / (1.0 - order as f64))
}

/// Entanglement entropy of a state across a cut, computed from the Gram
/// matrix on the smaller side of the cut. By the Schmidt decomposition its
/// nonzero spectrum equals that of `rho_A` exactly, at cost
/// `O(D * min(D_A, D_B))` instead of `O(D * max^2)`.
pub fn bipartite_entropy(s: &PureState, partition: SystemPartition) -> Result<f64> {
    let part = if partition.n_a() <= partition.n_b() {
        partition
    } else {
        partition.swapped()
    };
    if part.n_a() == partition.n_a() {
        return entanglement_entropy(&reduced_density_matrix(s, part));
    }
    // Gram on B: G[b, b'] = sum_a psi_(a,b) conj(psi_(a,b'))
    let d_a = part.dim_b(); // original A side, now the large side
    let d_b = part.dim_a();
    let amps = s.amplitudes();
    let mut mat = DMatrix::<Complex64>::zeros(d_b, d_b);
    for b in 0..d_b {
        for b2 in b..d_b {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..d_a {
                acc += amps[a * d_b + b] * amps[a * d_b + b2].conj();
            }
            mat[(b, b2)] = acc;
            if b2 != b {
                mat[(b2, b)] = acc.conj();
            }
        }
    }
    let rdm = ReducedDensityMatrix { partition: part.swapped(), mat };
    entanglement_entropy(&rdm)
}

/// A Monte Carlo estimate with its reproducibility record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Mean and standard error of `S_A` over independent draws. Samples run in
/// parallel with per-sample derived streams; the reduction is done in sample
/// order, so the result is independent of the worker count.
pub fn monte_carlo_entropy(
    e: &MaxEntEnsemble,
    partition: SystemPartition,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if samples < 2 {
        return Err(Error::TooFewSamples { got: samples, min: 2 });
    }
    let values: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let state = sample_state_indexed(e, seed, i);
            bipartite_entropy(&state, partition)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (mean, std_err) = crate::numeric::mean_and_stderr(&values);
    Ok(McEstimate { mean, std_err, samples, seed })
}

/// Comparison of the sampled mixed state `avg |psi><psi|` against the
/// ensemble's diagonal `rho_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedStateCheck {
    pub max_off_diagonal: f64,
    pub max_diagonal_deviation: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Accumulate the averaged projector over `samples` draws (dense `D x D`,
/// so N is capped at [`MAX_MIXED_CHECK_QUBITS`]) and report how far it is
/// from the diagonal ensemble density matrix. Both deviations shrink as
/// `1/sqrt(samples)`.
pub fn mixed_state_check(e: &MaxEntEnsemble, samples: usize, seed: u64) -> Result<MixedStateCheck> {
    let n = e.n();
    if n > MAX_MIXED_CHECK_QUBITS {
        return Err(Error::ResourceLimit {
            quantity: "mixed-state check qubits",
            value: n,
            limit: MAX_MIXED_CHECK_QUBITS,
        });
    }
    if samples < 2 {
        return Err(Error::TooFewSamples { got: samples, min: 2 });
    }
    let dim = 1usize << n;
    let mut acc = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..samples as u64 {
        let s = sample_state_indexed(e, seed, i);
        let amps = s.amplitudes();
        for row in 0..dim {
            let ar = amps[row];
            if ar == Complex64::new(0.0, 0.0) {
                continue;
            }
            let base = row * dim;
            for (col, ac) in amps.iter().enumerate() {
                acc[base + col] += ar * ac.conj();
            }
        }
    }
    let inv = 1.0 / samples as f64;
    let mut max_off = 0.0f64;
    let mut max_diag = 0.0f64;
    for row in 0..dim {
        for col in 0..dim {
            let v = acc[row * dim + col] * inv;
            if row == col {
                let target = e.rho(row.count_ones() as usize);
                max_diag = max_diag.max((v.re - target).abs().max(v.im.abs()));
            } else {
                max_off = max_off.max(v.norm());
            }
        }
    }
    Ok(MixedStateCheck {
        max_off_diagonal: max_off,
        max_diagonal_deviation: max_diag,
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::ChargeDistribution;
    use crate::ensemble::build_ensemble;
    use crate::fock::spectral_density;
    use std::f64::consts::LN_2;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn basis_state(n: usize, idx: usize) -> PureState {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[idx] = Complex64::new(1.0, 0.0);
        PureState::new_normalized(n, amps)
    }

    fn bell_pair() -> PureState {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::new(0.0, 0.0); 4];
        amps[0b00] = Complex64::new(r, 0.0);
        amps[0b11] = Complex64::new(r, 0.0);
        PureState::new_normalized(2, amps)
    }

    #[test]
    fn samples_are_normalized_and_deterministic() {
        let s = spectral_density(8);
        let e = build_ensemble(&ChargeDistribution::matching_spectrum(&s), &s);
        let a = sample_state(&e, 99);
        let b = sample_state(&e, 99);
        assert_close(a.norm(), 1.0, 1e-12);
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert_eq!(x, y);
        }
        let c = sample_state(&e, 100);
        assert!(a.inner(&c).norm() < 0.9, "different seeds should differ");
    }

    #[test]
    fn microcanonical_samples_vanish_outside_sector() {
        let s = spectral_density(8);
        let e = build_ensemble(&ChargeDistribution::microcanonical(&s, 3).unwrap(), &s);
        let st = sample_state(&e, 7);
        for (idx, a) in st.amplitudes().iter().enumerate() {
            if idx.count_ones() != 3 {
                assert_eq!(*a, Complex64::new(0.0, 0.0));
            }
        }
        let table = measure_charge_distribution(&st);
        assert_close(table[3], 1.0, 1e-12);
    }

    #[test]
    fn ensemble_average_charge_table_converges() {
        let n = 10;
        let s = spectral_density(n);
        let p = ChargeDistribution::matching_spectrum(&s);
        let e = build_ensemble(&p, &s);
        let samples = 1000;
        let mut per_sector: Vec<Vec<f64>> = vec![Vec::with_capacity(samples); n + 1];
        for i in 0..samples as u64 {
            let st = sample_state_indexed(&e, 4242, i);
            for (k, w) in measure_charge_distribution(&st).into_iter().enumerate() {
                per_sector[k].push(w);
            }
        }
        for k in 0..=n {
            let (mean, se) = crate::numeric::mean_and_stderr(&per_sector[k]);
            assert!(
                (mean - p.weight(k)).abs() <= 4.0 * se.max(1e-6),
                "sector {k}: mean={mean}, target={}, se={se}",
                p.weight(k)
            );
        }
    }

    #[test]
    fn product_state_has_rank_one_reduction_and_zero_entropy() {
        let part = SystemPartition::new(4, 2).unwrap();
        let st = basis_state(4, 0b1001);
        let rdm = reduced_density_matrix(&st, part);
        assert_close(rdm.trace(), 1.0, 1e-14);
        assert_close(rdm.matrix()[(0b10, 0b10)].re, 1.0, 1e-14);
        assert_close(entanglement_entropy(&rdm).unwrap(), 0.0, 1e-12);
    }

    #[test]
    fn bell_pair_reduces_to_maximally_mixed() {
        let part = SystemPartition::new(2, 1).unwrap();
        let rdm = reduced_density_matrix(&bell_pair(), part);
        assert_close(rdm.matrix()[(0, 0)].re, 0.5, 1e-14);
        assert_close(rdm.matrix()[(1, 1)].re, 0.5, 1e-14);
        assert_close(rdm.matrix()[(0, 1)].norm(), 0.0, 1e-14);
        assert_close(entanglement_entropy(&rdm).unwrap(), LN_2, 1e-12);
        assert_close(renyi_entropy(&rdm, 2).unwrap(), LN_2, 1e-12);
        assert!(renyi_entropy(&rdm, 1).is_err());
    }

    #[test]
    fn ghz_entropy_is_ln_two_for_every_cut() {
        let n = 6;
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(r, 0.0);
        amps[(1 << n) - 1] = Complex64::new(r, 0.0);
        let st = PureState::new_normalized(n, amps);
        for n_a in 1..n {
            let part = SystemPartition::new(n, n_a).unwrap();
            assert_close(bipartite_entropy(&st, part).unwrap(), LN_2, 1e-12);
        }
    }

    #[test]
    fn reduction_invariants_on_random_states() {
        let s = spectral_density(9);
        let e = build_ensemble(&ChargeDistribution::gaussian(&s, 0.0, 1.1).unwrap(), &s);
        for seed in 0..4u64 {
            let st = sample_state(&e, seed);
            for n_a in [2usize, 4, 7] {
                let part = SystemPartition::new(9, n_a).unwrap();
                let rdm = reduced_density_matrix(&st, part);
                assert_close(rdm.trace(), 1.0, 1e-12);
                assert!(rdm.hermiticity_error() < 1e-12);
                let s_a = entanglement_entropy(&rdm).unwrap();
                let cap = n_a.min(9 - n_a) as f64 * LN_2;
                assert!(s_a >= 0.0 && s_a <= cap + 1e-9);
                // the Gram shortcut agrees with the dense reduction
                assert_close(bipartite_entropy(&st, part).unwrap(), s_a, 1e-10);
            }
        }
    }

    #[test]
    fn campaign_is_worker_count_independent() {
        let s = spectral_density(8);
        let e = build_ensemble(&ChargeDistribution::matching_spectrum(&s), &s);
        let part = SystemPartition::new(8, 3).unwrap();
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| monte_carlo_entropy(&e, part, 64, 5).unwrap());
        let parallel = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| monte_carlo_entropy(&e, part, 64, 5).unwrap());
        assert_eq!(serial.mean.to_bits(), parallel.mean.to_bits());
        assert_eq!(serial.std_err.to_bits(), parallel.std_err.to_bits());
        assert!(monte_carlo_entropy(&e, part, 1, 5).is_err());
    }

    #[test]
    fn self_averaging_narrows_with_system_size() {
        let spread = |n: usize| {
            let s = spectral_density(n);
            let e = build_ensemble(&ChargeDistribution::matching_spectrum(&s), &s);
            let part = SystemPartition::new(n, n / 2).unwrap();
            let est = monte_carlo_entropy(&e, part, 150, 11).unwrap();
            est.std_err * (est.samples as f64).sqrt()
        };
        assert!(spread(14) < spread(10));
    }

    #[test]
    fn mixed_state_matches_diagonal_ensemble() {
        let n = 6;
        let s = spectral_density(n);
        let e = build_ensemble(&ChargeDistribution::microcanonical(&s, 2).unwrap(), &s);
        let check = mixed_state_check(&e, 500, 3).unwrap();
        // off-diagonals and diagonal deviations vanish as 1/sqrt(samples)
        assert!(check.max_off_diagonal < 5.0 / (500.0f64).sqrt() * (1.0 / 15.0));
        assert!(check.max_diagonal_deviation < 5.0 / (500.0f64).sqrt() * (1.0 / 15.0));

        // rows and columns outside the sector are exactly zero: verified by
        // drawing states and checking amplitudes (diagonal target is rho_n)
        let st = sample_state(&e, 17);
        for (idx, a) in st.amplitudes().iter().enumerate() {
            if idx.count_ones() != 2 {
                assert_eq!(*a, Complex64::new(0.0, 0.0));
            }
        }
        assert!(mixed_state_check(&e, 10, 0).is_ok());
        let s_big = spectral_density(13);
        let e_big = build_ensemble(&ChargeDistribution::matching_spectrum(&s_big), &s_big);
        assert!(mixed_state_check(&e_big, 4, 0).is_err());
    }

    #[test]
    fn mixed_state_deviation_halves_when_samples_quadruple() {
        let n = 6;
        let s = spectral_density(n);
        let e = build_ensemble(&ChargeDistribution::matching_spectrum(&s), &s);
        let small = mixed_state_check(&e, 400, 21).unwrap();
        let large = mixed_state_check(&e, 1600, 21).unwrap();
        let ratio = large.max_off_diagonal / small.max_off_diagonal;
        assert!(
            (0.35..=0.65).contains(&ratio),
            "expected roughly half, got {ratio}"
        );
    }
}
