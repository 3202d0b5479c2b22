use qnoise_core::boolean::{majority_repair, majority_repair_exact};
use qnoise_core::stats::Estimate;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Ctx, Experiment};
use crate::error::LabResult;
use crate::row;
use crate::table::RowSink;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub copies: Vec<u64>,
    pub flip_p: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self { copies: vec![101, 1001, 10_001], flip_p: 0.49 }
    }
}

pub struct MajorityRepair;

impl Experiment for MajorityRepair {
    type Params = Params;
    const ID: &'static str = "majority-repair";
    const ANCHOR: &'static str = "Majority of many copies repairs unbiased bit flips even close to one half";
    const COLUMNS: &'static [&'static str] = &["copies", "flip_p", "rate", "std_error", "exact"];
    const DEFAULT_TRIALS: u64 = 10_000;

    fn validate(p: &Params) -> Result<(), String> {
        if p.copies.is_empty() || p.copies.iter().any(|c| c % 2 == 0) {
            return Err("copy counts must be odd and nonempty".into());
        }
        if !(0.0..0.5).contains(&p.flip_p) {
            return Err(format!("flip_p = {} outside [0, 1/2)", p.flip_p));
        }
        Ok(())
    }

    fn run(p: &Params, ctx: &Ctx, out: &mut RowSink) -> LabResult<Value> {
        let mut rates = Vec::new();
        for (cell, &copies) in p.copies.iter().enumerate() {
            let hits = ctx.par_trials(cell as u64, "flips", ctx.trials, |_, rng| {
                majority_repair(copies, p.flip_p, 1, rng).map(|e| e.mean == 1.0)
            })?;
            let hits = hits.into_iter().collect::<Result<Vec<_>, _>>()?;
            let est = Estimate::from_count(hits.iter().filter(|&&h| h).count() as u64, ctx.trials);
            let exact = majority_repair_exact(copies, p.flip_p)?;
            rates.push(est.mean);
            out.push(row![copies, p.flip_p, est.mean, est.std_error, exact])?;
        }
        let monotone = rates.windows(2).all(|w| w[1] > w[0]);
        Ok(json!({ "rates": rates, "strictly_increasing": monotone }))
    }
}
