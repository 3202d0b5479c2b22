use qnoise_core::linalg::{gates, haar_unitary};
use qnoise_core::locality::n_eps_filter_channel;
use qnoise_core::{pauli_expand, Channel, DenseOperator};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Ctx, Experiment};
use crate::error::LabResult;
use crate::row;
use crate::table::RowSink;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operator {
    Cnot,
    Swap,
    /// Haar-random two-qubit unitary drawn from the run seed.
    Haar2,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub operator: Operator,
    pub eps_values: Vec<f64>,
}

impl Default for Params {
    fn default() -> Self {
        Self { operator: Operator::Cnot, eps_values: (0..=10).map(|i| 0.1 * f64::from(i)).collect() }
    }
}

pub struct NepsSweep;

impl Experiment for NepsSweep {
    type Params = Params;
    const ID: &'static str = "neps-filter-sweep";
    const ANCHOR: &'static str = "The height filter scaling height-k Pauli content by eps^k, applied to a gate";
    const COLUMNS: &'static [&'static str] = &["eps", "norm_sq", "trace_defect", "choi_min_eigenvalue"];
    const DEFAULT_TRIALS: u64 = 1;

    fn validate(p: &Params) -> Result<(), String> {
        if p.eps_values.iter().any(|e| !(0.0..=1.0).contains(e)) {
            return Err("eps values must lie in [0, 1]".into());
        }
        Ok(())
    }

    fn run(p: &Params, ctx: &Ctx, out: &mut RowSink) -> LabResult<Value> {
        let u = match p.operator {
            Operator::Cnot => DenseOperator::new(gates::cnot())?,
            Operator::Swap => DenseOperator::new(gates::swap())?,
            Operator::Haar2 => haar_unitary(2, &mut ctx.rng(0, 0, "operator")),
        };
        let ch = Channel::unitary(u)?;
        for &eps in &p.eps_values {
            let f = n_eps_filter_channel(&ch, eps)?;
            let norm_sq: f64 = f.kraus.iter().map(|k| pauli_expand(k).map(|c| c.norm_sqr())).sum::<Result<f64, _>>()?;
            let choi = f.choi_min_eigenvalue.unwrap_or(f64::NAN);
            out.push(row![eps, norm_sq, f.trace_defect, choi])?;
        }
        Ok(json!({ "operator": p.operator }))
    }
}
