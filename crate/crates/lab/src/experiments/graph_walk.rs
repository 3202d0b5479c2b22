use qnoise_core::noise::{sample_graph_walk, GraphSpec, TinyGeneratorSet, WalkSample, WALK_QUBIT_CAP};
use qnoise_core::weight_spectrum;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Ctx, Experiment};
use crate::error::LabResult;
use crate::row;
use crate::table::RowSink;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Geometry {
    Line,
    Ring,
    Grid,
    Complete,
    CompleteWithLoops,
}

impl Geometry {
    pub fn name(self) -> &'static str {
        match self {
            Self::Line => "line",
            Self::Ring => "ring",
            Self::Grid => "grid",
            Self::Complete => "complete",
            Self::CompleteWithLoops => "complete-with-loops",
        }
    }

    /// Grids use `rows x (n / rows)`.
    pub fn build(self, n: usize, rows: usize) -> Result<GraphSpec, String> {
        Ok(match self {
            Self::Line => GraphSpec::line(n),
            Self::Ring => GraphSpec::ring(n),
            Self::Complete => GraphSpec::complete(n),
            Self::CompleteWithLoops => GraphSpec::complete_with_loops(n),
            Self::Grid => {
                if rows == 0 || n % rows != 0 {
                    return Err(format!("grid rows {rows} do not divide n = {n}"));
                }
                GraphSpec::grid(rows, n / rows)
            }
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WalkParams {
    pub n: usize,
    pub delta: f64,
    /// Walks stop once `e(T) >= eps * n`.
    pub eps: f64,
    pub max_m: usize,
    pub grid_rows: usize,
}

impl Default for WalkParams {
    fn default() -> Self {
        Self { n: 6, delta: 0.1, eps: 0.1, max_m: 5000, grid_rows: 2 }
    }
}

impl WalkParams {
    pub fn check(&self) -> Result<(), String> {
        if !(2..=WALK_QUBIT_CAP).contains(&self.n) {
            return Err(format!("n = {} outside 2..={WALK_QUBIT_CAP}", self.n));
        }
        if !(self.delta > 0.0 && self.delta <= std::f64::consts::PI) || !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err("delta must lie in (0, pi] and eps in (0, 1]".into());
        }
        if self.max_m == 0 {
            return Err("max_m must be positive".into());
        }
        Ok(())
    }

    pub fn walk<R: rand::Rng + ?Sized>(&self, graph: &GraphSpec, rng: &mut R) -> qnoise_core::Result<WalkSample> {
        let w = TinyGeneratorSet::new(self.delta);
        sample_graph_walk(graph, &w, self.eps * self.n as f64, self.max_m, rng)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub n: usize,
    pub delta: f64,
    /// Walks stop once `e(T) >= eps * n`.
    pub eps: f64,
    pub max_m: usize,
    pub grid_rows: usize,
    pub graph: Geometry,
}

impl Default for Params {
    fn default() -> Self {
        let w = WalkParams::default();
        Self { n: w.n, delta: w.delta, eps: w.eps, max_m: w.max_m, grid_rows: w.grid_rows, graph: Geometry::Ring }
    }
}

impl Params {
    pub fn walk(&self) -> WalkParams {
        WalkParams { n: self.n, delta: self.delta, eps: self.eps, max_m: self.max_m, grid_rows: self.grid_rows }
    }
}

pub struct GraphWalk;

impl Experiment for GraphWalk {
    type Params = Params;
    const ID: &'static str = "graph-walk-spectrum";
    const ANCHOR: &'static str =
        "Noise built by a random walk of tiny gates on graph edges, calibrated to total error eps n";
    const COLUMNS: &'static [&'static str] = &["draw", "steps", "reached", "e_total", "height", "weight"];
    const DEFAULT_TRIALS: u64 = 8;

    fn validate(p: &Params) -> Result<(), String> {
        p.walk().check()?;
        p.graph.build(p.walk().n, p.walk().grid_rows).map(|_| ())
    }

    fn run(p: &Params, ctx: &Ctx, out: &mut RowSink) -> LabResult<Value> {
        let graph = p.graph.build(p.walk().n, p.walk().grid_rows).map_err(crate::error::LabError::Validation)?;
        let draws = ctx.par_trials(0, "walk", ctx.trials, |_, rng| -> qnoise_core::Result<_> {
            let s = p.walk().walk(&graph, rng)?;
            Ok((s.m, s.reached, s.e_total, weight_spectrum(&s.channel)?))
        })?;
        let mut steps = Vec::new();
        for (d, res) in draws.into_iter().enumerate() {
            let (m, reached, e, ws) = res?;
            steps.push(m);
            for (h, w) in ws.w.iter().enumerate() {
                out.push(row![d, m, reached, e, h, *w])?;
            }
        }
        Ok(json!({ "graph": p.graph.name(), "steps": steps }))
    }
}
