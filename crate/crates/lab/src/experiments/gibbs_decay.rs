use qnoise_core::gibbs::{damp, gibbs_decompose, SpinDistribution, SPIN_CAP};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Ctx, Experiment};
use crate::error::LabResult;
use crate::row;
use crate::table::RowSink;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// Spins of the random instances.
    pub n: usize,
    pub theta: f64,
    pub t_values: Vec<f64>,
}

impl Default for Params {
    fn default() -> Self {
        Self { n: 6, theta: 1.0, t_values: (0..=12).map(|i| 0.25 * f64::from(i)).collect() }
    }
}

fn off_diagonal_stats(mu: &SpinDistribution) -> (f64, f64) {
    let cov = mu.covariance_matrix();
    let n = mu.n();
    let mut max = 0.0f64;
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            max = max.max(cov[(i, j)].abs());
            sum += cov[(i, j)].abs();
        }
    }
    let pairs = (n * (n - 1) / 2).max(1) as f64;
    (max, sum / pairs)
}

pub struct GibbsDecay;

impl Experiment for GibbsDecay {
    type Params = Params;
    const ID: &'static str = "gibbs-decay";
    const ANCHOR: &'static str =
        "Damping the higher-degree energy terms of a Gibbs measure lowers correlations and fixes product measures";
    const COLUMNS: &'static [&'static str] = &["instance", "t", "statistic", "value"];
    /// Random instances in addition to the two-spin one.
    const DEFAULT_TRIALS: u64 = 3;

    fn validate(p: &Params) -> Result<(), String> {
        if !(2..=SPIN_CAP).contains(&p.n) {
            return Err(format!("n = {} outside 2..={SPIN_CAP}", p.n));
        }
        if p.t_values.iter().any(|t| !(*t >= 0.0)) {
            return Err("damping times must be nonnegative".into());
        }
        Ok(())
    }

    fn run(p: &Params, ctx: &Ctx, out: &mut RowSink) -> LabResult<Value> {
        let two = SpinDistribution::two_spin(p.theta);
        for &t in &p.t_values {
            ctx.check_deadline()?;
            let cov = damp(&two, t)?.covariance_matrix()[(0, 1)];
            out.push(row!["two-spin", t, "cov_01", cov])?;
        }
        let instances = ctx.par_trials(0, "instance", ctx.trials, |_, rng| {
            let w = (0..1usize << p.n).map(|_| 0.05 + rng.random::<f64>()).collect();
            SpinDistribution::from_unnormalized(p.n, w)
        })?;
        let mut final_tv = Vec::new();
        for (i, mu) in instances.into_iter().enumerate() {
            let mu = mu?;
            let limit = gibbs_decompose(&mu).product_limit();
            let name = format!("random-{i}");
            let mut tv = f64::NAN;
            for &t in &p.t_values {
                ctx.check_deadline()?;
                let damped = damp(&mu, t)?;
                let (max, mean) = off_diagonal_stats(&damped);
                tv = damped.total_variation(&limit)?;
                out.push(row![name.as_str(), t, "max_abs_cov", max])?;
                out.push(row![name.as_str(), t, "mean_abs_cov", mean])?;
                out.push(row![name.as_str(), t, "tv_to_product_limit", tv])?;
            }
            final_tv.push(tv);
        }
        Ok(json!({ "final_tv_to_product_limit": final_tv }))
    }
}
