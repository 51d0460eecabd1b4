//! Numerical laboratory for maximum-entropy pure-state ensembles of N-qubit
//! systems conditioned on a conserved-charge distribution p(Q).
//!
//! The crate builds the conditioned ensemble from an input distribution over
//! total z-magnetization sectors, evaluates the entanglement-entropy
//! predictions exactly on the discrete spectrum, and verifies them against
//! Monte Carlo sampling and charge-conserving scrambling experiments:
//!
//! - [`fock`]: sector bookkeeping, bit-split partitions, exact/Gaussian
//!   spectral densities (log-space beyond machine-integer range);
//! - [`distribution`]: input distributions p(Q), the induced subsystem
//!   distribution p_A, and the input-information functional;
//! - [`ensemble`]: per-sector amplitude variances and Lagrange multipliers of
//!   the conditioned ensemble;
//! - [`analytics`]: closed-form and exact-sum entropy predictions, including
//!   fluctuation corrections for microcanonical inputs;
//! - [`sampler`]: state sampling, partial traces, spectral entropies, and
//!   reproducible parallel Monte Carlo;
//! - [`scramble`]: cat-product preparation and charge-conserving scrambling.
//!
//! All tables and ensembles are immutable after construction and safe to
//! share across threads. Campaigns are deterministic in their seeds,
//! independent of worker count.

pub mod analytics;
pub mod combinatorics;
pub mod distribution;
pub mod ensemble;
mod error;
pub mod fock;
mod numeric;
pub mod sampler;
pub mod scramble;

pub use analytics::{
    catalan, crossover_delta, delta_s_average_exact, delta_s_gaussian_closed_form,
    erfc_correction, figure1_sweep, microcanonical_entropy_with_fluctuations, narayana,
    page_correction, wedge_correction, EntropyReport, EntropyTerm, GaussianParams, SweepPoint,
};
pub use distribution::{
    induced_gaussian_params, induced_subsystem_distribution, input_information,
    ChargeDistribution, DistributionKind, InducedGaussian, ReducedChargeDistribution,
};
pub use ensemble::{build_ensemble, ensemble_entropy, MaxEntEnsemble};
pub use error::{Error, Result};
pub use fock::{
    charge_of, recombine, spectral_density, split_index, ChargeValue, SpectralDensity,
    SystemPartition,
};
pub use sampler::{
    bipartite_entropy, entanglement_entropy, measure_charge_distribution, mixed_state_check,
    monte_carlo_entropy, reduced_density_matrix, renyi_entropy, sample_state,
    sample_state_indexed, McEstimate, MixedStateCheck, PureState, ReducedDensityMatrix,
};
pub use scramble::{
    cat_product_state, eth_deviation_experiment, scramble, CatProductSpec, EthComparison,
    ScrambleMode, ScrambleSpec,
};
