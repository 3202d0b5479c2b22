//! Experiment harness for `qnoise-core`: a catalog of seeded experiments,
//! CSV and JSON output, and plain-text formats for tables and spectra.

pub mod config;
mod error;
pub mod experiments;
pub mod formats;
pub mod runner;
pub mod table;

pub use config::{ExperimentConfig, ValidatedConfig};
pub use error::{LabError, LabResult};
pub use experiments::{catalog, find, Descriptor};
pub use runner::{run, RunOptions, RunRecord};
