use qnoise_core::boolean::{
    g_code_search_with_budget, BooleanFunction, SearchMode, DEFAULT_NODE_BUDGET, EXACT_SEARCH_CAP,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Ctx, Experiment};
use crate::error::LabResult;
use crate::row;
use crate::table::RowSink;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub n_values: Vec<usize>,
    /// `g` accepts error patterns of Hamming weight at most this.
    pub radius: u32,
    pub mode: SearchMode,
    pub node_budget: u64,
}

impl Default for Params {
    fn default() -> Self {
        Self { n_values: (3..=10).collect(), radius: 1, mode: SearchMode::Exact, node_budget: DEFAULT_NODE_BUDGET }
    }
}

pub struct GCode;

impl Experiment for GCode {
    type Params = Params;
    const ID: &'static str = "g-code-search";
    const ANCHOR: &'static str = "Largest codes decodable by the rule: accept x when g(x xor y) = 1";
    const COLUMNS: &'static [&'static str] =
        &["n", "radius", "mode", "size", "ratio_bound", "optimal", "budget_exhausted", "verified", "nodes"];
    const DEFAULT_TRIALS: u64 = 1;

    fn validate(p: &Params) -> Result<(), String> {
        let cap = if p.mode == SearchMode::Exact { EXACT_SEARCH_CAP } else { 24 };
        if p.n_values.iter().any(|&n| n == 0 || n > cap) {
            return Err(format!("n values must lie in 1..={cap} for this mode"));
        }
        Ok(())
    }

    fn run(p: &Params, ctx: &Ctx, out: &mut RowSink) -> LabResult<Value> {
        let mut sizes = Vec::new();
        for &n in &p.n_values {
            ctx.check_deadline()?;
            let g = BooleanFunction::from_fn(n, |x| x.count_ones() <= p.radius)?;
            let r = g_code_search_with_budget(&g, p.mode, p.node_budget)?;
            let mode = if p.mode == SearchMode::Exact { "exact" } else { "greedy" };
            out.push(row![
                n,
                u64::from(p.radius),
                mode,
                r.size(),
                r.ratio_bound,
                r.optimal,
                r.budget_exhausted,
                r.verified,
                r.nodes
            ])?;
            sizes.push(r.size());
        }
        Ok(json!({ "sizes": sizes }))
    }
}
