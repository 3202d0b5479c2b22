use qnoise_core::boolean::{builtin_function, rec_maj3_level_weights, wht, BOOLEAN_VARIABLE_CAP};
use qnoise_core::stats::linear_fit;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Ctx, Experiment};
use crate::error::LabResult;
use crate::row;
use crate::table::RowSink;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub name: String,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub functions: Vec<FunctionSpec>,
    /// Depths of recursive majority whose level weights come from the
    /// composition recursion (no truth table needed).
    pub rec_maj3_depths: Vec<usize>,
}

impl Default for Params {
    fn default() -> Self {
        let f = |name: &str, n| FunctionSpec { name: name.into(), n };
        Self {
            functions: vec![f("majority", 9), f("rec_maj3", 9), f("parity", 8), f("bent_ip", 8), f("runs_median", 9)],
            rec_maj3_depths: vec![1, 2, 3, 4],
        }
    }
}

pub struct BooleanLevels;

impl Experiment for BooleanLevels {
    type Params = Params;
    const ID: &'static str = "boolean-levels";
    const ANCHOR: &'static str =
        "Fourier level weights of majority-type, parity and bent functions; where recursive majority concentrates";
    const COLUMNS: &'static [&'static str] = &["function", "n", "method", "level", "weight"];
    const DEFAULT_TRIALS: u64 = 1;

    fn validate(p: &Params) -> Result<(), String> {
        for f in &p.functions {
            builtin_function(&f.name, f.n).map_err(|e| e.to_string())?;
        }
        if p.rec_maj3_depths.iter().any(|&d| d == 0 || d > 8) {
            return Err("recursion depths must lie in 1..=8".into());
        }
        Ok(())
    }

    fn run(p: &Params, ctx: &Ctx, out: &mut RowSink) -> LabResult<Value> {
        for f in &p.functions {
            ctx.check_deadline()?;
            let w = wht(&builtin_function(&f.name, f.n)?).level_weights();
            for (k, x) in w.iter().enumerate() {
                out.push(row![f.name.as_str(), f.n, "transform", k, *x])?;
            }
        }
        let mut points = Vec::new();
        for &d in &p.rec_maj3_depths {
            let n = 3usize.pow(d as u32);
            let w = rec_maj3_level_weights(d);
            for (k, x) in w.iter().enumerate() {
                out.push(row!["rec_maj3", n, "recursion", k, *x])?;
            }
            let mean_level: f64 = w.iter().enumerate().map(|(k, x)| k as f64 * x).sum();
            points.push(((n as f64).ln(), mean_level.ln()));
        }
        // Mean level ~ n^alpha.
        let (xs, ys): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
        let alpha = linear_fit(&xs, &ys).map(|f| f.slope);
        Ok(json!({ "rec_maj3_mean_level_exponent": alpha, "variable_cap": BOOLEAN_VARIABLE_CAP }))
    }
}
