//! State preparation and charge-conserving scrambling: products of cat
//! blocks, per-sector Haar randomization, brickwork circuits of conserving
//! two-qubit gates, and the comparison experiment against the ensemble
//! predictions.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::analytics::{delta_s_average_exact, page_correction, EntropyReport};
use crate::distribution::{induced_subsystem_distribution, ChargeDistribution};
use crate::error::{Error, Result};
use crate::fock::{SpectralDensity, SystemPartition};
use crate::numeric::derive_seed;
use crate::sampler::{bipartite_entropy, measure_charge_distribution, PureState};

/// M blocks of L-spin cat states tiling an N = M * L register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatProductSpec {
    pub blocks: usize,
    pub block_size: usize,
}

impl CatProductSpec {
    pub fn new(blocks: usize, block_size: usize) -> Result<Self> {
        if blocks == 0 || block_size == 0 {
            return Err(Error::BlockMismatch { blocks, block_size, n: 0 });
        }
        Ok(Self { blocks, block_size })
    }

    pub fn n(&self) -> usize {
        self.blocks * self.block_size
    }
}

/// How chaotic evolution is modeled. Both modes commute with total charge
/// exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScrambleMode {
    /// One independent Haar-random unitary on each total-charge sector; the
    /// fixed point of charge-conserving chaotic dynamics at given weights.
    PerSectorHaar,
    /// `steps` layers of nearest-neighbor two-qubit conserving gates (random
    /// phases on {00, 11}, Haar U(2) on the {01, 10} subspace).
    Brickwork { steps: usize },
}

/// A reproducible scrambling prescription.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScrambleSpec {
    pub mode: ScrambleMode,
    pub seed: u64,
}

/// Tensor product of M cat blocks `(|up..up> + |down..down>)/sqrt(2)`, blocks
/// laid out as contiguous bit ranges from the high end: `2^M` nonzero
/// amplitudes of magnitude `2^(-M/2)`.
pub fn cat_product_state(spec: CatProductSpec) -> Result<PureState> {
    let m = spec.blocks;
    let l = spec.block_size;
    let n = spec.n();
    if n > 30 {
        return Err(Error::ResourceLimit { quantity: "cat-product qubits", value: n, limit: 30 });
    }
    let block_ones = (1usize << l) - 1;
    let amp = 0.5f64.powi(m as i32).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << n];
    for mask in 0..(1usize << m) {
        let mut idx = 0usize;
        for b in 0..m {
            idx <<= l;
            if (mask >> (m - 1 - b)) & 1 == 1 {
                idx |= block_ones;
            }
        }
        amps[idx] = Complex64::new(amp, 0.0);
    }
    Ok(PureState::new_normalized(n, amps))
}

fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed d x d unitary: QR of a complex Gaussian matrix with the
/// R-diagonal phases absorbed into Q.
fn haar_unitary(dim: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let mut g = DMatrix::<Complex64>::zeros(dim, dim);
    for col in 0..dim {
        for row in 0..dim {
            g[(row, col)] = complex_gaussian(rng);
        }
    }
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for col in 0..dim {
        let d = r[(col, col)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for row in 0..dim {
            q[(row, col)] *= phase;
        }
    }
    q
}

/// Apply the scrambling prescription. Norm and per-sector charge weights are
/// preserved to machine precision in both modes.
pub fn scramble(s: &PureState, spec: &ScrambleSpec) -> PureState {
    match spec.mode {
        ScrambleMode::PerSectorHaar => scramble_per_sector(s, spec.seed),
        ScrambleMode::Brickwork { steps } => scramble_brickwork(s, spec.seed, steps),
    }
}

fn scramble_per_sector(s: &PureState, seed: u64) -> PureState {
    let n = s.n();
    let mut sectors: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for idx in 0..s.dim() {
        sectors[idx.count_ones() as usize].push(idx);
    }
    let amps = s.amplitudes();
    // Sectors carry independent streams, so they can run in parallel without
    // changing the result.
    let rotated: Vec<(usize, Vec<Complex64>)> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let idx = &sectors[k];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            if idx.len() == 1 {
                // Haar on U(1) is a uniform phase.
                let theta = rng.gen::<f64>() * std::f64::consts::TAU;
                let phase = Complex64::new(theta.cos(), theta.sin());
                return (k, vec![amps[idx[0]] * phase]);
            }
            let u = haar_unitary(idx.len(), &mut rng);
            let block: Vec<Complex64> = idx.iter().map(|&i| amps[i]).collect();
            let block = nalgebra::DVector::from_vec(block);
            let out = &u * block;
            (k, out.iter().copied().collect())
        })
        .collect();

    let mut new_amps = vec![Complex64::new(0.0, 0.0); s.dim()];
    for (k, block) in rotated {
        for (pos, &i) in sectors[k].iter().enumerate() {
            new_amps[i] = block[pos];
        }
    }
    PureState::new_normalized(n, new_amps)
}

fn scramble_brickwork(s: &PureState, seed: u64, steps: usize) -> PureState {
    let n = s.n();
    let mut amps = s.amplitudes().to_vec();
    for layer in 0..steps {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(layer as u64);
        let mut qubit = layer % 2;
        while qubit + 1 < n {
            apply_conserving_gate(&mut amps, n, qubit, &mut rng);
            qubit += 2;
        }
    }
    PureState::new_normalized(n, amps)
}

/// Random charge-conserving gate on qubits (i, i+1), qubit 0 being the
/// highest bit: phases on |00> and |11>, Haar U(2) on span{|01>, |10>}.
fn apply_conserving_gate(amps: &mut [Complex64], n: usize, qubit: usize, rng: &mut impl Rng) {
    let hi = 1usize << (n - 1 - qubit);
    let lo = hi >> 1;
    let theta00 = rng.gen::<f64>() * std::f64::consts::TAU;
    let theta11 = rng.gen::<f64>() * std::f64::consts::TAU;
    let ph00 = Complex64::new(theta00.cos(), theta00.sin());
    let ph11 = Complex64::new(theta11.cos(), theta11.sin());
    let u = haar_unitary(2, rng);
    let (u00, u01, u10, u11) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);

    let pair_mask = hi | lo;
    for base in 0..amps.len() {
        if base & pair_mask != 0 {
            continue;
        }
        amps[base] *= ph00;
        amps[base | pair_mask] *= ph11;
        let a01 = amps[base | lo];
        let a10 = amps[base | hi];
        amps[base | lo] = u00 * a01 + u01 * a10;
        amps[base | hi] = u10 * a01 + u11 * a10;
    }
}

/// Outcome of a scrambling campaign against the ensemble prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct EthComparison {
    pub measured_mean: f64,
    pub measured_std_err: f64,
    /// Average-state prediction for the cat input: `S_th + dS^a`.
    pub prediction: EntropyReport,
    /// Unconditioned reference `N_A ln 2 + page term`.
    pub page_value: f64,
    /// Largest per-sector charge-weight drift over all trials.
    pub max_charge_residual: f64,
    pub trials: usize,
    pub seed: u64,
}

/// Prepare a cat product, scramble it `trials` times with independent seeds,
/// and compare the measured mean entanglement entropy at the cut with the
/// ensemble prediction and the unconditioned reference.
pub fn eth_deviation_experiment(
    cat: CatProductSpec,
    cut: SystemPartition,
    mode: ScrambleMode,
    trials: usize,
    seed: u64,
) -> Result<EthComparison> {
    let n = cat.n();
    if cut.n_total() != n {
        return Err(Error::BlockMismatch { blocks: cat.blocks, block_size: cat.block_size, n: cut.n_total() });
    }
    if trials < 2 {
        return Err(Error::TooFewSamples { got: trials, min: 2 });
    }
    let base = cat_product_state(cat)?;
    let base_table = measure_charge_distribution(&base);

    let spectral = SpectralDensity::new(n);
    let p = ChargeDistribution::cat_product(&spectral, cat.blocks, cat.block_size)?;
    let p_a = induced_subsystem_distribution(&p, &spectral, cut);
    let dsa = delta_s_average_exact(&p_a, &SpectralDensity::new(cut.n_a()));
    let prediction = EntropyReport::annealed(cut.n_a(), dsa);
    let page_value = cut.n_a().min(cut.n_b()) as f64 * std::f64::consts::LN_2
        + page_correction(cut.dim_a() as f64, cut.dim_b() as f64);

    let outcomes: Vec<(f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let spec = ScrambleSpec { mode, seed: derive_seed(seed, t) };
            let scrambled = scramble(&base, &spec);
            let after = measure_charge_distribution(&scrambled);
            let residual = after
                .iter()
                .zip(&base_table)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            let entropy = bipartite_entropy(&scrambled, cut)?;
            Ok((entropy, residual))
        })
        .collect::<Result<Vec<_>>>()?;

    let entropies: Vec<f64> = outcomes.iter().map(|o| o.0).collect();
    let (mean, std_err) = crate::numeric::mean_and_stderr(&entropies);
    let max_charge_residual = outcomes.iter().map(|o| o.1).fold(0.0f64, f64::max);

    Ok(EthComparison {
        measured_mean: mean,
        measured_std_err: std_err,
        prediction,
        page_value,
        max_charge_residual,
        trials,
        seed,
    })
}
