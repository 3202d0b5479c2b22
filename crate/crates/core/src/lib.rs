//! Exact Pauli-basis analysis of small quantum operations, samplers for
//! correlated noise models, and the classical experiments that accompany
//! them (Boolean Fourier analysis, a community-elections model and Gibbs
//! damping of spin distributions).
//!
//! Everything here is allocation-only: no IO, no clocks, no global state.
//! Randomized routines take an explicit generator, see [`rng`].

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod boolean;
pub mod channel;
pub mod elections;
mod error;
pub mod expand;
pub mod gibbs;
pub mod layered;
pub mod linalg;
pub mod locality;
pub mod noise;
pub mod pauli;
pub mod qec;
pub mod rng;
pub mod spectrum;
pub mod stats;
pub mod walsh;

pub use channel::{Channel, ChannelKind, DensityMatrix};
pub use error::{Error, Result};
pub use expand::{pauli_expand, PauliCoefficients};
pub use linalg::DenseOperator;
pub use pauli::{Pauli, PauliString, Phase};
pub use spectrum::{classify_spectrum, weight_spectrum, SpectrumClass, WeightSpectrum};

/// Largest qubit count the dense engine accepts unless a caller raises it.
pub const DEFAULT_QUBIT_CAP: usize = 12;
