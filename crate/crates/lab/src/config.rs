//! Experiment configuration files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{LabError, LabResult};
use crate::experiments::{find, Descriptor};

/// Default wall-clock cap per run.
pub const DEFAULT_TIME_CAP_SECS: u64 = 600;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_cap_secs: Option<u64>,
    #[serde(default)]
    pub params: Value,
}

impl ExperimentConfig {
    pub fn new(experiment: &str, seed: u64) -> Self {
        Self { experiment: experiment.into(), seed, trials: None, out: None, time_cap_secs: None, params: Value::Null }
    }

    pub fn from_json(text: &str) -> LabResult<Self> {
        serde_json::from_str(text).map_err(|e| LabError::Validation(e.to_string()))
    }

    pub fn load(path: &Path) -> LabResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Validation(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> LabResult<ValidatedConfig> {
        let descriptor = find(&self.experiment)
            .ok_or_else(|| LabError::Validation(format!("unknown experiment `{}`", self.experiment)))?;
        let params = descriptor.normalize_params(&self.params)?;
        let trials = self.trials.unwrap_or(descriptor.default_trials);
        if trials == 0 {
            return Err(LabError::Validation("trials must be positive".into()));
        }
        let canonical = json!({
            "experiment": descriptor.id,
            "seed": self.seed,
            "trials": trials,
            "params": params,
        });
        let hash = Sha256::digest(canonical.to_string().as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
        Ok(ValidatedConfig {
            descriptor,
            params,
            seed: self.seed,
            trials,
            out: self.out.clone(),
            time_cap_secs: self.time_cap_secs.unwrap_or(DEFAULT_TIME_CAP_SECS),
            hash,
        })
    }
}

/// A configuration with defaults filled in and parameters checked.
#[derive(Debug, Clone)]
pub struct ValidatedConfig {
    pub descriptor: Descriptor,
    pub params: Value,
    pub seed: u64,
    pub trials: u64,
    pub out: Option<PathBuf>,
    pub time_cap_secs: u64,
    /// SHA-256 of the canonical JSON of id, seed, trials and parameters.
    pub hash: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_unknown_configs_are_rejected() {
        assert!(matches!(ExperimentConfig::from_json("{}"), Err(LabError::Validation(_))));
        assert!(ExperimentConfig::from_json(r#"{"experiment":"haar-height","colour":1}"#).is_err());
        let cfg = ExperimentConfig::from_json(r#"{"experiment":"haar-height","params":{"m":3}}"#).unwrap();
        assert!(matches!(cfg.validate(), Err(LabError::Validation(_))));
        let cfg = ExperimentConfig::from_json(r#"{"experiment":"nope"}"#).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn hash_ignores_spelling_of_defaults() {
        let a = ExperimentConfig::from_json(r#"{"experiment":"haar-height","seed":3}"#).unwrap().validate().unwrap();
        let b = ExperimentConfig::from_json(r#"{"experiment":"haar-height","seed":3,"trials":200,"params":{"n":6}}"#)
            .unwrap()
            .validate()
            .unwrap();
        assert_eq!(a.hash, b.hash);
        let c = ExperimentConfig::from_json(r#"{"experiment":"haar-height","seed":4}"#).unwrap().validate().unwrap();
        assert_ne!(a.hash, c.hash);
    }
}
