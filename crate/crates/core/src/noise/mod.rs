//! Samplers for correlated and reference noise models.
//!
//! Every sampler is a pure function of its parameters and the generator it
//! is handed.

mod ball;
mod baseline;
mod block;
mod generators;
mod graph;
mod ils;
mod spec;
mod walk;

pub use ball::{ball_height_weights, sample_random_pauli_channel, BALL_QUBIT_CAP};
pub use baseline::{baseline, BaselineKind};
pub use block::{
    random_partition, sample_block_model, sample_random_blocksize_model, BlockFill, BlockSample, BlockSizeDistribution,
};
pub use generators::{Generator, TinyGeneratorSet};
pub use graph::GraphSpec;
pub use ils::{sample_ils, IlsFactor, IlsSample, SiteDistribution, SiteEntry, TinyFamily};
pub use spec::{NoiseMetadata, NoiseModel, NoiseModelSpec, NoiseSample};
pub use walk::{sample_graph_walk, WalkSample, WALK_QUBIT_CAP};

use crate::error::Result;
use crate::expand::pauli_expand;
use crate::linalg::DenseOperator;
use crate::spectrum::WeightSpectrum;

/// Exact `e(U)` of a unitary through its expansion.
pub(crate) fn unitary_e_total(u: &DenseOperator) -> Result<f64> {
    let c = pauli_expand(u)?;
    let w = c.height_weights();
    Ok(w.iter().enumerate().map(|(k, x)| k as f64 * x).sum())
}

pub(crate) fn unitary_spectrum(u: &DenseOperator) -> Result<WeightSpectrum> {
    let c = pauli_expand(u)?;
    let chi: alloc::vec::Vec<f64> = c.as_slice().iter().map(|a| a.norm_sqr()).collect();
    WeightSpectrum::from_chi_diagonal(u.n(), &chi)
}
