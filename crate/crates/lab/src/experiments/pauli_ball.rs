use qnoise_core::noise::ball_height_weights;
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
        Self { n: 8 }
    }
}

pub struct PauliBall;

impl Experiment for PauliBall {
    type Params = Params;
    const ID: &'static str = "pauli-ball-height";
    const ANCHOR: &'static str = "Random Pauli channels drawn from the unit ball concentrate at large heights";
    const COLUMNS: &'static [&'static str] = &["height", "mean_weight", "std_error", "reference"];
    const DEFAULT_TRIALS: u64 = 10_000;

    fn validate(p: &Params) -> Result<(), String> {
        if !(1..=qnoise_core::noise::BALL_QUBIT_CAP).contains(&p.n) {
            return Err(format!("n = {} outside 1..={}", p.n, qnoise_core::noise::BALL_QUBIT_CAP));
        }
        Ok(())
    }

    fn run(p: &Params, ctx: &Ctx, out: &mut RowSink) -> LabResult<Value> {
        let draws = ctx.par_trials(0, "ball", ctx.trials, |_, rng| ball_height_weights(p.n, rng))?;
        let draws = draws.into_iter().collect::<Result<Vec<_>, _>>()?;
        let reference = counting_reference(p.n);
        let mut means = Vec::new();
        for (k, r) in reference.iter().enumerate() {
            let (mean, se) = mean_and_se(&draws.iter().map(|w| w[k]).collect::<Vec<_>>());
            means.push(mean);
            out.push(row![k, mean, se, *r])?;
        }
        // Entry k of each list is the mass at heights >= k.
        let tails = |v: &[f64]| (0..v.len()).map(|k| v[k..].iter().sum::<f64>()).collect::<Vec<_>>();
        Ok(json!({ "tail_mass": tails(&means), "tail_reference": tails(&reference), "draws": draws.len() }))
    }
}
