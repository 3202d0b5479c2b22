use qnoise_core::layered::LayeredChannel;
use qnoise_core::noise::{sample_block_model, BlockFill};
use qnoise_core::{classify_spectrum, WeightSpectrum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{mean_and_se, Ctx, Experiment};
use crate::error::LabResult;
use crate::row;
use crate::table::RowSink;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub n: usize,
    /// Number of factors; `ceil(log2 n)` when absent.
    pub m: Option<usize>,
    pub block_sizes: Vec<usize>,
    /// Target per-qubit rate of the product; each factor gets `rate / m`.
    pub rate: f64,
    pub fill: BlockFill,
}

impl Default for Params {
    fn default() -> Self {
        Self { n: 8, m: None, block_sizes: vec![2, 4], rate: 0.1, fill: BlockFill::Haar }
    }
}

impl Params {
    pub fn factors(&self) -> usize {
        self.m.unwrap_or_else(|| (self.n as f64).log2().ceil().max(1.0) as usize)
    }
}

pub struct BlockProduct;

/// Spectrum of a product of `m` independent block-model layers.
pub fn sample_product<R: rand::Rng + ?Sized>(p: &Params, k: usize, rng: &mut R) -> qnoise_core::Result<WeightSpectrum> {
    let m = p.factors();
    let mut lc = LayeredChannel::new(p.n);
    for _ in 0..m {
        lc.push_layer(sample_block_model(p.n, k, p.rate / m as f64, p.fill, rng)?.blocks)?;
    }
    lc.weight_spectrum()
}

impl Experiment for BlockProduct {
    type Params = Params;
    const ID: &'static str = "block-product-spectrum";
    const ANCHOR: &'static str = "Products of about log n random k-local noise layers and their weight spectra";
    const COLUMNS: &'static [&'static str] = &["block_size", "height", "mean_weight", "std_error"];
    const DEFAULT_TRIALS: u64 = 8;

    fn validate(p: &Params) -> Result<(), String> {
        if !(1..=8).contains(&p.n) {
            return Err(format!("n = {} outside 1..=8", p.n));
        }
        if p.block_sizes.is_empty() || p.block_sizes.iter().any(|&k| k == 0 || k > p.n) {
            return Err("block sizes must lie in 1..=n".into());
        }
        if !(0.0..=1.0).contains(&p.rate) || p.factors() == 0 {
            return Err("rate must lie in [0, 1] and m must be positive".into());
        }
        Ok(())
    }

    fn run(p: &Params, ctx: &Ctx, out: &mut RowSink) -> LabResult<Value> {
        let mut summary = Vec::new();
        for (cell, &k) in p.block_sizes.iter().enumerate() {
            let draws = ctx.par_trials(cell as u64, "block-product", ctx.trials, |_, rng| sample_product(p, k, rng))?;
            let draws = draws.into_iter().collect::<Result<Vec<_>, _>>()?;
            let mut mean_w = Vec::new();
            for h in 0..=p.n {
                let (mean, se) = mean_and_se(&draws.iter().map(|s| s.w[h]).collect::<Vec<_>>());
                mean_w.push(mean);
                out.push(row![k, h, mean, se])?;
            }
            let (rate, _) = mean_and_se(&draws.iter().map(|s| s.e_total / p.n as f64).collect::<Vec<_>>());
            let class = classify_spectrum(&WeightSpectrum::from_height_weights(mean_w), p.rate);
            summary.push(json!({
                "block_size": k,
                "mean_rate_per_qubit": rate,
                "devastating": class.devastating,
                "alarming": class.alarming,
                "powerlaw_exponent": class.powerlaw_exponent,
            }));
        }
        Ok(json!({ "m": p.factors(), "cells": summary }))
    }
}
