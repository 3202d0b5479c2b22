use qnoise_core::weight_spectrum;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::graph_walk::{Geometry, WalkParams};
use super::{mean_and_se, Ctx, Experiment};
use crate::error::{LabError, LabResult};
use crate::row;
use crate::table::RowSink;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub n: usize,
    pub delta: f64,
    /// Walks stop once `e(T) >= eps * n`.
    pub eps: f64,
    pub max_m: usize,
    pub grid_rows: usize,
    pub graphs: Vec<Geometry>,
}

impl Default for Params {
    fn default() -> Self {
        let w = WalkParams::default();
        Self {
            n: w.n,
            delta: w.delta,
            eps: w.eps,
            max_m: w.max_m,
            grid_rows: w.grid_rows,
            graphs: vec![Geometry::Line, Geometry::Ring, Geometry::Grid, Geometry::Complete],
        }
    }
}

impl Params {
    pub fn walk(&self) -> WalkParams {
        WalkParams { n: self.n, delta: self.delta, eps: self.eps, max_m: self.max_m, grid_rows: self.grid_rows }
    }
}

pub struct GeometryRestriction;

impl Experiment for GeometryRestriction {
    type Params = Params;
    const ID: &'static str = "geometry-restriction";
    const ANCHOR: &'static str =
        "How the interaction geometry of the noise shapes its weight spectrum at equal total error";
    const COLUMNS: &'static [&'static str] = &["graph", "height", "mean_weight", "std_error"];
    const DEFAULT_TRIALS: u64 = 8;

    fn validate(p: &Params) -> Result<(), String> {
        p.walk().check()?;
        if p.graphs.is_empty() {
            return Err("at least one graph is required".into());
        }
        p.graphs.iter().try_for_each(|g| g.build(p.walk().n, p.walk().grid_rows).map(|_| ()))
    }

    fn run(p: &Params, ctx: &Ctx, out: &mut RowSink) -> LabResult<Value> {
        let mut summary = Vec::new();
        for (cell, g) in p.graphs.iter().enumerate() {
            let graph = g.build(p.walk().n, p.walk().grid_rows).map_err(LabError::Validation)?;
            let draws = ctx.par_trials(cell as u64, "walk", ctx.trials, |_, rng| -> qnoise_core::Result<_> {
                let s = p.walk().walk(&graph, rng)?;
                Ok((s.m as f64, weight_spectrum(&s.channel)?))
            })?;
            let draws = draws.into_iter().collect::<Result<Vec<_>, _>>()?;
            for h in 0..=p.walk().n {
                let (mean, se) = mean_and_se(&draws.iter().map(|(_, s)| s.w[h]).collect::<Vec<_>>());
                out.push(row![g.name(), h, mean, se])?;
            }
            let (steps, _) = mean_and_se(&draws.iter().map(|(m, _)| *m).collect::<Vec<_>>());
            let (high, _) = mean_and_se(&draws.iter().map(|(_, s)| s.mass_at_or_above(2)).collect::<Vec<_>>());
            summary.push(json!({ "graph": g.name(), "mean_steps": steps, "mean_mass_height_2_plus": high }));
        }
        Ok(json!({ "cells": summary }))
    }
}
