use qnoise_core::elections::{count_stability, mean_gap, signal_sensitivity, ElectionSpec};
use qnoise_core::stats::{linear_fit, Z95};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{mean_and_se, Ctx, Experiment};
use crate::error::LabResult;
use crate::row;
use crate::table::RowSink;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// Community sizes for the gap grid. Runs use `a = b`, with even
    /// sizes bumped to the next odd one so the electorate stays odd.
    pub gap_sizes: Vec<usize>,
    pub gap_q: f64,
    /// Sizes for the signal-flip ladder, each run at `q = n^(-1/4)`.
    pub sensitivity_sizes: Vec<usize>,
    pub delta: f64,
    pub miscount_sizes: Vec<usize>,
    pub miscount_q: f64,
    pub miscount: f64,
    pub influence_fraction: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            gap_sizes: vec![16, 32, 64],
            gap_q: 0.05,
            sensitivity_sizes: vec![8, 16, 32],
            delta: 0.1,
            miscount_sizes: vec![32],
            miscount_q: 0.1,
            miscount: 0.4,
            influence_fraction: 1.0,
        }
    }
}

/// Size actually run for a requested `b`: `b` when odd, else `b + 1`.
pub fn odd_size(b: usize) -> usize {
    if b % 2 == 1 {
        b
    } else {
        b + 1
    }
}

impl Params {
    fn spec(&self, b: usize, q: f64) -> qnoise_core::Result<ElectionSpec> {
        let b = odd_size(b);
        ElectionSpec::with_influence(b, b, q, self.influence_fraction)
    }
}

/// One row of the grid and the value it reports.
struct Cell {
    spec: ElectionSpec,
    param: f64,
    statistic: &'static str,
}

pub struct ElectionsContrast;

impl Experiment for ElectionsContrast {
    type Params = Params;
    const ID: &'static str = "elections-contrast";
    const ANCHOR: &'static str =
        "Community bloc voting is sensitive to signal noise yet stable under random miscounts; its gap grows like b sqrt(q a)";
    const COLUMNS: &'static [&'static str] = &["a", "b", "q", "param", "statistic", "value", "ci", "seed"];
    const DEFAULT_TRIALS: u64 = 10_000;

    fn validate(p: &Params) -> Result<(), String> {
        let q_ok = |q: f64| q > 0.0 && q < 0.5;
        if !q_ok(p.gap_q) || !q_ok(p.miscount_q) {
            return Err("q values must lie in (0, 1/2)".into());
        }
        if !(0.0..=0.5).contains(&p.delta) || !(0.0..0.5).contains(&p.miscount) {
            return Err("delta must lie in [0, 1/2] and miscount in [0, 1/2)".into());
        }
        if !(0.0..=1.0).contains(&p.influence_fraction) {
            return Err("influence_fraction must lie in [0, 1]".into());
        }
        let sizes = p.gap_sizes.iter().chain(&p.sensitivity_sizes).chain(&p.miscount_sizes);
        if sizes.clone().any(|&b| b == 0 || b > 1024) {
            return Err("community sizes must lie in 1..=1024".into());
        }
        Ok(())
    }

    fn run(p: &Params, ctx: &Ctx, out: &mut RowSink) -> LabResult<Value> {
        let mut cells = Vec::new();
        for &b in &p.gap_sizes {
            cells.push(Cell { spec: p.spec(b, p.gap_q)?, param: 0.0, statistic: "gap" });
        }
        for &b in &p.sensitivity_sizes {
            let n = (odd_size(b) * odd_size(b)) as f64;
            cells.push(Cell { spec: p.spec(b, n.powf(-0.25))?, param: p.delta, statistic: "signal_correlation" });
        }
        for &b in &p.miscount_sizes {
            cells.push(Cell { spec: p.spec(b, p.miscount_q)?, param: p.miscount, statistic: "reversal" });
        }
        let mut gap_points = Vec::new();
        let mut correlations = Vec::new();
        let mut reversals = Vec::new();
        for (i, cell) in cells.iter().enumerate() {
            let values = ctx.par_trials(i as u64, cell.statistic, ctx.trials, |_, rng| match cell.statistic {
                "gap" => Ok(mean_gap(&cell.spec, 1, rng).mean),
                "signal_correlation" => signal_sensitivity(&cell.spec, cell.param, 1, rng).map(|e| e.mean),
                _ => count_stability(&cell.spec, cell.param, 1, rng).map(|e| e.mean),
            })?;
            let values = values.into_iter().collect::<Result<Vec<_>, _>>()?;
            let (mean, se) = mean_and_se(&values);
            let s = &cell.spec;
            out.push(row![s.a, s.b, s.q, cell.param, cell.statistic, mean, Z95 * se, ctx.seed])?;
            match cell.statistic {
                "gap" => gap_points.push(((s.b as f64 * (s.q * s.a as f64).sqrt()).ln(), mean.ln())),
                "signal_correlation" => correlations.push(mean),
                _ => reversals.push(mean),
            }
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = gap_points.into_iter().unzip();
        let slope = linear_fit(&xs, &ys).map(|f| f.slope);
        Ok(json!({
            "gap_slope": slope,
            "signal_correlations": correlations,
            "correlation_strictly_decreasing": correlations.windows(2).all(|w| w[1] < w[0]),
            "reversal_rates": reversals,
        }))
    }
}
