use qnoise_core::noise::{sample_block_model, BlockFill};
use qnoise_core::qec::{builtin_code, recovery_fidelity, twirl};
use qnoise_core::{weight_spectrum, Channel, WeightSpectrum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Ctx, Experiment};
use crate::error::LabResult;
use crate::row;
use crate::table::RowSink;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub code: String,
    pub block_size: usize,
    /// Largest per-qubit rate of the block channel.
    pub rate: f64,
    pub fill: BlockFill,
}

impl Default for Params {
    fn default() -> Self {
        Self { code: "steane7".into(), block_size: 2, rate: 0.05, fill: BlockFill::Haar }
    }
}

/// Single-qubit Pauli marginals of a chi diagonal.
pub fn qubit_marginals(n: usize, chi: &[f64]) -> Vec<[f64; 4]> {
    let mut out = vec![[0.0; 4]; n];
    for (v, a) in chi.iter().enumerate() {
        for (q, m) in out.iter_mut().enumerate() {
            m[(v >> (2 * (n - 1 - q))) & 3] += a;
        }
    }
    out
}

/// One paired draw.
pub struct PairedDraw {
    pub block: Channel,
    pub iid: Channel,
    pub block_spectrum: WeightSpectrum,
    pub iid_spectrum: WeightSpectrum,
    pub block_fidelity: f64,
    pub twirled_fidelity: f64,
    pub iid_fidelity: f64,
}

pub fn paired_draw<R: rand::Rng + ?Sized>(p: &Params, rng: &mut R) -> qnoise_core::Result<PairedDraw> {
    let code = builtin_code(&p.code)?;
    let n = code.n();
    let block = sample_block_model(n, p.block_size, p.rate, p.fill, rng)?.to_channel()?;
    let chi = block.chi_diagonal()?;
    let iid = Channel::pauli_product(&qubit_marginals(n, &chi))?;
    let fid = |ch: &Channel| recovery_fidelity(&code, ch).map(|r| r.fidelity.unwrap_or(f64::NAN));
    Ok(PairedDraw {
        block_spectrum: WeightSpectrum::from_chi_diagonal(n, &chi)?,
        iid_spectrum: weight_spectrum(&iid)?,
        block_fidelity: fid(&block)?,
        twirled_fidelity: fid(&twirl(&block)?)?,
        iid_fidelity: fid(&iid)?,
        block,
        iid,
    })
}

pub struct QecPaired;

impl Experiment for QecPaired {
    type Params = Params;
    const ID: &'static str = "qec-correlated-vs-iid";
    const ANCHOR: &'static str =
        "Error correction under block-correlated noise versus independent noise with the same marginals";
    const COLUMNS: &'static [&'static str] = &["draw", "model", "quantity", "index", "value"];
    const DEFAULT_TRIALS: u64 = 4;

    fn validate(p: &Params) -> Result<(), String> {
        let code = builtin_code(&p.code).map_err(|e| e.to_string())?;
        if p.block_size == 0 || p.block_size > code.n() {
            return Err(format!("block size {} outside 1..={}", p.block_size, code.n()));
        }
        if !(0.0..=1.0).contains(&p.rate) {
            return Err(format!("rate {} outside [0, 1]", p.rate));
        }
        Ok(())
    }

    fn run(p: &Params, ctx: &Ctx, out: &mut RowSink) -> LabResult<Value> {
        let draws = ctx.par_trials(0, "block", ctx.trials, |_, rng| paired_draw(p, rng))?;
        let mut summary = Vec::new();
        for (d, draw) in draws.into_iter().enumerate() {
            let draw = draw?;
            for (model, ws) in [("block", &draw.block_spectrum), ("iid", &draw.iid_spectrum)] {
                for (h, w) in ws.w.iter().enumerate() {
                    out.push(row![d, model, "weight", h, *w])?;
                }
                out.push(row![d, model, "e_total", 0usize, ws.e_total])?;
            }
            out.push(row![d, "block", "fidelity", 0usize, draw.block_fidelity])?;
            out.push(row![d, "block-twirled", "fidelity", 0usize, draw.twirled_fidelity])?;
            out.push(row![d, "iid", "fidelity", 0usize, draw.iid_fidelity])?;
            summary.push(json!({
                "block_mass_height_2_plus": draw.block_spectrum.mass_at_or_above(2),
                "iid_mass_height_2_plus": draw.iid_spectrum.mass_at_or_above(2),
                "block_fidelity": draw.block_fidelity,
                "iid_fidelity": draw.iid_fidelity,
            }));
        }
        Ok(json!({ "draws": summary }))
    }
}
