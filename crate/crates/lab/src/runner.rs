//! Executes a validated configuration and persists its output.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::Value;

use crate::config::ValidatedConfig;
use crate::error::{LabError, LabResult};
use crate::experiments::Ctx;
use crate::table::{Cell, RowSink};

pub const OUT_DIR_ENV: &str = "QNOISE_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "lab-out";
pub const SUMMARY_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides the configured output directory.
    pub out_dir: Option<PathBuf>,
    pub threads: Option<usize>,
    /// Keep everything in memory.
    pub dry: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub experiment: String,
    pub config_hash: String,
    pub tool_version: String,
    pub seed: u64,
    pub trials: u64,
    pub params: Value,
    pub started: String,
    pub finished: String,
    /// The run stopped early at the time cap; the CSV holds a prefix.
    pub partial: bool,
    pub columns: Vec<String>,
    pub row_count: usize,
    pub csv_path: Option<PathBuf>,
    pub summary: Value,
    #[serde(skip)]
    pub rows: Vec<Vec<Cell>>,
    #[serde(skip)]
    pub csv: String,
}

/// `explicit`, then the configured path, then `$QNOISE_OUT_DIR`, then
/// `./lab-out`.
pub fn resolve_out_dir(explicit: Option<&Path>, configured: Option<&Path>) -> PathBuf {
    explicit
        .or(configured)
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

pub fn run(cfg: &ValidatedConfig, opts: &RunOptions) -> LabResult<RunRecord> {
    match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| LabError::Validation(format!("thread pool: {e}")))?
            .install(|| run_inner(cfg, opts)),
        None => run_inner(cfg, opts),
    }
}

fn run_inner(cfg: &ValidatedConfig, opts: &RunOptions) -> LabResult<RunRecord> {
    let d = &cfg.descriptor;
    let started = now();
    let (mut sink, csv_path, dir) = if opts.dry {
        (RowSink::in_memory(d.columns), None, None)
    } else {
        let dir = resolve_out_dir(opts.out_dir.as_deref(), cfg.out.as_deref());
        std::fs::create_dir_all(&dir)?;
        let path = dir.join(format!("{}.csv", d.id));
        let sink = RowSink::to_writer(d.columns, Box::new(BufWriter::new(File::create(&path)?)))?;
        (sink, Some(path), Some(dir))
    };
    let mut ctx = Ctx::new(d.id, cfg.seed, cfg.trials);
    ctx.deadline = Some((Instant::now() + Duration::from_secs(cfg.time_cap_secs), cfg.time_cap_secs));
    let (summary, partial) = match d.run(&cfg.params, &ctx, &mut sink) {
        Ok(s) => (s, false),
        Err(LabError::Timeout(cap)) => {
            (serde_json::json!({ "error": format!("runtime cap of {cap} s exceeded") }), true)
        }
        Err(e) => return Err(e),
    };
    let record = RunRecord {
        schema_version: SUMMARY_SCHEMA_VERSION,
        experiment: d.id.to_string(),
        config_hash: cfg.hash.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed,
        trials: cfg.trials,
        params: cfg.params.clone(),
        started,
        finished: now(),
        partial,
        columns: sink.columns().to_vec(),
        row_count: sink.rows().len(),
        csv_path,
        summary,
        csv: sink.render_csv(),
        rows: sink.into_rows(),
    };
    if let Some(dir) = dir {
        let path = dir.join(format!("{}.summary.json", d.id));
        std::fs::write(path, serde_json::to_string_pretty(&record)? + "\n")?;
    }
    Ok(record)
}
