use qnoise_core::linalg::haar_unitary;
use qnoise_core::{weight_spectrum, Channel};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{counting_reference, mean_and_se, Ctx, Experiment};
use crate::error::LabResult;
use crate::row;
use crate::table::RowSink;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub n: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self { n: 6 }
    }
}

pub struct HaarHeight;

impl Experiment for HaarHeight {
    type Params = Params;
    const ID: &'static str = "haar-height";
    const ANCHOR: &'static str = "Haar-random unitaries put almost all Pauli weight near height 3n/4";
    const COLUMNS: &'static [&'static str] = &["height", "mean_weight", "std_error", "reference"];
    const DEFAULT_TRIALS: u64 = 200;

    fn validate(p: &Params) -> Result<(), String> {
        if !(1..=8).contains(&p.n) {
            return Err(format!("n = {} outside 1..=8", p.n));
        }
        Ok(())
    }

    fn run(p: &Params, ctx: &Ctx, out: &mut RowSink) -> LabResult<Value> {
        let spectra = ctx.par_trials(0, "unitary", ctx.trials, |_, rng| {
            weight_spectrum(&Channel::unitary(haar_unitary(p.n, rng))?)
        })?;
        let spectra = spectra.into_iter().collect::<Result<Vec<_>, _>>()?;
        let reference = counting_reference(p.n);
        let mut worst = 0.0f64;
        let mut means = Vec::new();
        for (k, r) in reference.iter().enumerate() {
            let (mean, se) = mean_and_se(&spectra.iter().map(|s| s.w[k]).collect::<Vec<_>>());
            worst = worst.max((mean - r).abs());
            means.push(mean);
            out.push(row![k, mean, se, *r])?;
        }
        let mean_height: f64 = means.iter().enumerate().map(|(k, w)| k as f64 * w).sum();
        Ok(json!({ "max_abs_deviation": worst, "mean_height": mean_height, "draws": spectra.len() }))
    }
}
