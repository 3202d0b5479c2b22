use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qnoise_lab::{catalog, run, ExperimentConfig, LabError, RunOptions};

#[derive(Parser)]
#[command(name = "lab", version, about = "Seeded noise and error-correction experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Master seed, overriding the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        /// Output directory (default: config `out`, then $QNOISE_OUT_DIR, then ./lab-out).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List experiments with their defaults.
    Catalog {
        #[arg(long)]
        json: bool,
    },
    /// Check a config without running it.
    Validate { config: PathBuf },
}

fn fail(e: &LabError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Catalog { json } => {
            if json {
                let list: Vec<_> = catalog()
                    .iter()
                    .map(|d| {
                        serde_json::json!({
                            "id": d.id,
                            "anchor": d.anchor,
                            "columns": d.columns,
                            "default_trials": d.default_trials,
                            "defaults": d.default_params(),
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&list).expect("catalog serializes"));
            } else {
                for d in catalog() {
                    println!("{:<24} {}", d.id, d.anchor);
                    println!("{:<24} trials={} params={}", "", d.default_trials, d.default_params());
                }
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match ExperimentConfig::load(&config).and_then(|c| c.validate()) {
            Ok(v) => {
                println!("ok {} {}", v.descriptor.id, v.hash);
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        },
        Command::Run { config, seed, trials, out, threads } => {
            let mut cfg = match ExperimentConfig::load(&config) {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if trials.is_some() {
                cfg.trials = trials;
            }
            let validated = match cfg.validate() {
                Ok(v) => v,
                Err(e) => return fail(&e),
            };
            match run(&validated, &RunOptions { out_dir: out, threads, dry: false }) {
                Ok(record) => {
                    if let Some(p) = &record.csv_path {
                        println!("{} rows -> {}", record.row_count, p.display());
                    }
                    println!("{}", serde_json::to_string_pretty(&record.summary).expect("summary serializes"));
                    if record.partial {
                        eprintln!("runtime cap exceeded; output is partial");
                        return ExitCode::from(3);
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
    }
}
