//! Catalog experiments. Each one declares typed parameters with defaults,
//! a frozen column order and a runner that emits rows through a sink.

use std::time::Instant;

use qnoise_core::rng::{rng_for, LabRng};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::error::{LabError, LabResult};
use crate::table::RowSink;

pub mod block_product;
pub mod boolean_levels;
pub mod elections_contrast;
pub mod g_code;
pub mod geometry;
pub mod gibbs_decay;
pub mod graph_walk;
pub mod haar_height;
pub mod majority_repair;
pub mod neps_sweep;
pub mod pauli_ball;
pub mod qec_paired;

/// Shared state for one run.
pub struct Ctx {
    pub seed: u64,
    pub id: &'static str,
    pub trials: u64,
    pub deadline: Option<(Instant, u64)>,
}

/// Trials per scheduling chunk; the deadline is checked between chunks.
const CHUNK: u64 = 1024;

impl Ctx {
    pub fn new(id: &'static str, seed: u64, trials: u64) -> Self {
        Self { seed, id, trials, deadline: None }
    }

    /// Generator for trial `trial` of cell `cell` at call site `site`.
    pub fn rng(&self, cell: u64, trial: u64, site: &str) -> LabRng {
        rng_for(self.seed, self.id, (cell << 32) | trial, site)
    }

    pub fn check_deadline(&self) -> LabResult<()> {
        match self.deadline {
            Some((end, cap)) if Instant::now() > end => Err(LabError::Timeout(cap)),
            _ => Ok(()),
        }
    }

    /// Runs `count` independent trials in parallel and returns their
    /// results in trial order, independent of the thread count.
    pub fn par_trials<T, F>(&self, cell: u64, site: &str, count: u64, f: F) -> LabResult<Vec<T>>
    where
        T: Send,
        F: Fn(u64, &mut LabRng) -> T + Sync,
    {
        let mut out = Vec::with_capacity(count as usize);
        let mut start = 0;
        while start < count {
            self.check_deadline()?;
            let end = (start + CHUNK).min(count);
            let chunk: Vec<T> = (start..end)
                .into_par_iter()
                .map(|t| {
                    let mut rng = self.rng(cell, t, site);
                    f(t, &mut rng)
                })
                .collect();
            out.extend(chunk);
            start = end;
        }
        Ok(out)
    }
}

/// Mean and standard error of a sample.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// `C(n, k) 3^k / 4^n`: the height distribution of a uniformly chosen
/// Pauli string.
pub fn counting_reference(n: usize) -> Vec<f64> {
    let mut c = 1.0f64;
    (0..=n)
        .map(|k| {
            if k > 0 {
                c = c * (n + 1 - k) as f64 / k as f64;
            }
            c * 3f64.powi(k as i32) / 4f64.powi(n as i32)
        })
        .collect()
}

pub trait Experiment {
    type Params: Serialize + DeserializeOwned + Default;
    const ID: &'static str;
    /// The claim the experiment reproduces.
    const ANCHOR: &'static str;
    const COLUMNS: &'static [&'static str];
    const DEFAULT_TRIALS: u64;

    fn validate(p: &Self::Params) -> Result<(), String>;
    fn run(p: &Self::Params, ctx: &Ctx, out: &mut RowSink) -> LabResult<Value>;
}

/// Type-erased view of an [`Experiment`].
#[derive(Clone, Copy)]
pub struct Descriptor {
    pub id: &'static str,
    pub anchor: &'static str,
    pub columns: &'static [&'static str],
    pub default_trials: u64,
    default_params: fn() -> Value,
    normalize: fn(&Value) -> LabResult<Value>,
    run: fn(&Value, &Ctx, &mut RowSink) -> LabResult<Value>,
}

impl std::fmt::Debug for Descriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Descriptor").field("id", &self.id).finish_non_exhaustive()
    }
}

fn parse<E: Experiment>(v: &Value) -> LabResult<E::Params> {
    let v = if v.is_null() { Value::Object(Default::default()) } else { v.clone() };
    let p: E::Params = serde_json::from_value(v).map_err(|e| LabError::Validation(format!("{}: {e}", E::ID)))?;
    E::validate(&p).map_err(|e| LabError::Validation(format!("{}: {e}", E::ID)))?;
    Ok(p)
}

fn normalize<E: Experiment>(v: &Value) -> LabResult<Value> {
    Ok(serde_json::to_value(parse::<E>(v)?)?)
}

fn run_erased<E: Experiment>(v: &Value, ctx: &Ctx, out: &mut RowSink) -> LabResult<Value> {
    E::run(&parse::<E>(v)?, ctx, out)
}

fn defaults<E: Experiment>() -> Value {
    serde_json::to_value(E::Params::default()).expect("parameters serialize")
}

impl Descriptor {
    pub fn of<E: Experiment>() -> Self {
        Self {
            id: E::ID,
            anchor: E::ANCHOR,
            columns: E::COLUMNS,
            default_trials: E::DEFAULT_TRIALS,
            default_params: defaults::<E>,
            normalize: normalize::<E>,
            run: run_erased::<E>,
        }
    }

    pub fn default_params(&self) -> Value {
        (self.default_params)()
    }

    /// Parses, validates and fills in defaults.
    pub fn normalize_params(&self, params: &Value) -> LabResult<Value> {
        (self.normalize)(params)
    }

    pub fn run(&self, params: &Value, ctx: &Ctx, out: &mut RowSink) -> LabResult<Value> {
        (self.run)(params, ctx, out)
    }
}

pub fn catalog() -> Vec<Descriptor> {
    vec![
        Descriptor::of::<haar_height::HaarHeight>(),
        Descriptor::of::<pauli_ball::PauliBall>(),
        Descriptor::of::<block_product::BlockProduct>(),
        Descriptor::of::<graph_walk::GraphWalk>(),
        Descriptor::of::<geometry::GeometryRestriction>(),
        Descriptor::of::<majority_repair::MajorityRepair>(),
        Descriptor::of::<qec_paired::QecPaired>(),
        Descriptor::of::<elections_contrast::ElectionsContrast>(),
        Descriptor::of::<gibbs_decay::GibbsDecay>(),
        Descriptor::of::<neps_sweep::NepsSweep>(),
        Descriptor::of::<boolean_levels::BooleanLevels>(),
        Descriptor::of::<g_code::GCode>(),
    ]
}

pub fn find(id: &str) -> Option<Descriptor> {
    catalog().into_iter().find(|d| d.id == id)
}
