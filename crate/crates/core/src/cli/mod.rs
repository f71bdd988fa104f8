//! Command-line front end: `tfi run`, `tfi sweep`, `tfi list-presets`.

pub mod config;
pub mod runner;
pub mod sweep;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};

pub use config::{parse_config, preset_catalogue, ConfigFile, Format, ScenarioConfig, ScenarioModel};
pub use runner::{
    exit_status, run_all, run_scenario, summary_json, write_outputs, RunOptions, RunSummary, ScenarioOutcome, Status,
};
pub use sweep::{split_values, sweep, SweepOutcome};

const DEFAULT_OUT: &str = "tfi-out";

#[derive(Debug, Parser)]
#[command(name = "tfi", version, about = "Temporal Fisher information bound and speed-limit verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every scenario of a config file.
    Run {
        /// Scenario file (`.toml` or `.json`).
        config: PathBuf,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Output directory (default: the config's `output_dir`, else `tfi-out`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Multiply every bound by this factor after the run (testing aid).
        #[arg(long, hide = true)]
        bound_scale: Option<f64>,
    },
    /// Re-run a config once per value of one parameter.
    Sweep {
        /// Scenario file (`.toml` or `.json`).
        config: PathBuf,
        /// Dotted field path inside each scenario, e.g. `model.g` or `dt`.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Directory for `sweep.csv` (default: the config's `output_dir`, else `tfi-out`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the built-in model presets.
    ListPresets,
}

/// Parses `std::env::args` and runs; returns the process exit status.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn seed_from_env() -> Result<Option<u64>> {
    match std::env::var("TFI_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("TFI_SEED must be a non-negative integer, got '{v}'"))),
        Err(_) => Ok(None),
    }
}

fn read(path: &Path) -> Result<(String, Format)> {
    let format = Format::from_path(path)?;
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    Ok((text, format))
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::ListPresets => {
            print!("{}", preset_catalogue());
            Ok(0)
        }
        Command::Run { config, jobs, out, bound_scale } => {
            let (text, format) = read(&config)?;
            let cfg = parse_config(&text, format)?;
            if let Some(f) = bound_scale {
                if !(f > 0.0 && f.is_finite()) {
                    return Err(Error::InvalidArgument(format!("--bound-scale must be > 0, got {f}")));
                }
            }
            let opts = RunOptions { jobs, seed_override: seed_from_env()?, bound_scale };
            let outcomes = run_all(&cfg.scenarios, &opts)?;
            let dir = out.unwrap_or_else(|| PathBuf::from(cfg.output_dir.as_deref().unwrap_or(DEFAULT_OUT)));
            write_outputs(&dir, &outcomes)?;
            let summaries: Vec<RunSummary> = outcomes.into_iter().map(|o| o.summary).collect();
            for s in &summaries {
                report_line(s);
            }
            Ok(exit_status(&summaries))
        }
        Command::Sweep { config, param, values, jobs, out } => {
            let (text, format) = read(&config)?;
            let base = config::parse_value(&text, format)?;
            let dir = out.unwrap_or_else(|| {
                let d = base.get("output_dir").and_then(|v| v.as_str()).unwrap_or(DEFAULT_OUT);
                PathBuf::from(d)
            });
            let opts = RunOptions { jobs, seed_override: seed_from_env()?, bound_scale: None };
            let result = sweep(&base, &param, &split_values(&values), &opts)?;
            std::fs::create_dir_all(&dir)?;
            runner::atomic_write(&dir.join("sweep.csv"), &result.table)?;
            for (value, summaries) in &result.runs {
                for s in summaries {
                    eprint!("{param}={value} ");
                    report_line(s);
                }
            }
            Ok(result.exit_status)
        }
    }
}

fn report_line(s: &RunSummary) {
    let failed: Vec<&str> = s.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    match s.status {
        Status::Pass => eprintln!("PASS  {} ({} checks)", s.id, s.checks.len()),
        Status::Fail => eprintln!("FAIL  {} violated: {}", s.id, failed.join(", ")),
        Status::Error => eprintln!("ERROR {}: {}", s.id, s.error.as_deref().unwrap_or("")),
    }
}
