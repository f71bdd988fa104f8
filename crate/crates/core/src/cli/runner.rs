//! Scenario execution, result files and the exit-status contract.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::info_geometry::{BoundSeries, CheckEntry, Orientation, VerificationReport};
use crate::langevin::{path_fisher_mc, run_langevin_experiment, LangevinRunConfig};
use crate::markov::{run_markov_experiment, MarkovRunConfig};
use crate::non_hermitian::run_nh_experiment;
use crate::quantum::{run_open_quantum_experiment, SpectralRunConfig, SpectralSample};

use super::config::{ScenarioConfig, ScenarioModel};

pub const SCHEMA_VERSION: u32 = 1;

/// Knobs that apply to a whole batch.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; 0 uses the default pool size.
    pub jobs: usize,
    /// Replaces every scenario seed (from `TFI_SEED`).
    pub seed_override: Option<u64>,
    /// Test hook: multiply every recorded bound `Λ` by this factor after the
    /// run and re-evaluate the checks. Used to exercise the violation path.
    pub bound_scale: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// Per-scenario entry of `summary.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub id: String,
    pub kind: String,
    pub status: Status,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub checks: Vec<CheckEntry>,
    pub metadata: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub summary: RunSummary,
    /// RFC-4180 time series; absent when the scenario failed to run.
    pub csv: Option<Vec<u8>>,
}

/// Runs one scenario. Runtime errors are captured in the summary rather
/// than propagated, so sibling scenarios are unaffected.
pub fn run_scenario(cfg: &ScenarioConfig, opts: &RunOptions) -> ScenarioOutcome {
    let start = Instant::now();
    let result = execute(cfg, opts);
    let wall_time_s = start.elapsed().as_secs_f64();
    let kind = cfg.kind().as_str().to_string();
    match result {
        Ok((report, csv)) => {
            let pass = report.all_pass();
            ScenarioOutcome {
                summary: RunSummary {
                    id: cfg.id.clone(),
                    kind,
                    status: if pass { Status::Pass } else { Status::Fail },
                    pass,
                    error: None,
                    checks: report.checks,
                    metadata: report.metadata.into_iter().collect(),
                    notes: report.notes,
                    wall_time_s,
                },
                csv: Some(csv),
            }
        }
        Err(e) => ScenarioOutcome {
            summary: RunSummary {
                id: cfg.id.clone(),
                kind,
                status: Status::Error,
                pass: false,
                error: Some(e.to_string()),
                checks: Vec::new(),
                metadata: BTreeMap::new(),
                notes: Vec::new(),
                wall_time_s,
            },
            csv: None,
        },
    }
}

/// Runs all scenarios in parallel on a pool of `opts.jobs` workers; output
/// order follows input order.
pub fn run_all(configs: &[ScenarioConfig], opts: &RunOptions) -> Result<Vec<ScenarioOutcome>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    Ok(pool.install(|| configs.par_iter().map(|c| run_scenario(c, opts)).collect()))
}

/// 0 when every check passed, 2 if any scenario hit a runtime error, 1 otherwise.
pub fn exit_status(summaries: &[RunSummary]) -> i32 {
    if summaries.iter().any(|s| s.status == Status::Error) {
        2
    } else if summaries.iter().all(|s| s.pass) {
        0
    } else {
        1
    }
}

#[derive(Serialize)]
struct SummaryFile<'a> {
    schema_version: u32,
    exit_status: i32,
    scenarios: Vec<&'a RunSummary>,
}

/// Writes `<id>.csv` for every scenario that ran and `summary.json`, each
/// through a temporary file renamed into place.
pub fn write_outputs(dir: &Path, outcomes: &[ScenarioOutcome]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for o in outcomes {
        if let Some(csv) = &o.csv {
            atomic_write(&dir.join(format!("{}.csv", o.summary.id)), csv)?;
        }
    }
    atomic_write(&dir.join("summary.json"), &summary_json(outcomes)?)
}

/// The `summary.json` document for a batch.
pub fn summary_json(outcomes: &[ScenarioOutcome]) -> Result<Vec<u8>> {
    let owned: Vec<RunSummary> = outcomes.iter().map(|o| o.summary.clone()).collect();
    let file = SummaryFile {
        schema_version: SCHEMA_VERSION,
        exit_status: exit_status(&owned),
        scenarios: outcomes.iter().map(|o| &o.summary).collect(),
    };
    let mut json = serde_json::to_vec_pretty(&file).map_err(|e| Error::Config(e.to_string()))?;
    json.push(b'\n');
    Ok(json)
}

pub(crate) fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    use std::io::Write;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp-{}", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Fixed-width scientific notation with 17 significant digits.
pub(crate) fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new())
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Indices written with stride `k`, always including the last one.
fn strided(len: usize, k: usize) -> impl Iterator<Item = usize> {
    (0..len).filter(move |&i| i % k == 0 || i + 1 == len)
}

fn execute(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<(VerificationReport, Vec<u8>)> {
    let mut w = csv_writer();
    let report = match &cfg.model {
        ScenarioModel::Langevin { model, initial, tail_mass, path_fisher } => {
            let rc = LangevinRunConfig { tau: cfg.tau, dt: cfg.dt, t0: cfg.t0, tolerances: cfg.tolerances };
            let mut run = run_langevin_experiment(model, initial, &rc, &cfg.id)?;
            run.report.meta("tail_mass", *tail_mass);
            if let Some(pf) = path_fisher {
                let seed = opts.seed_override.or(cfg.seed).unwrap_or(0);
                let est = path_fisher_mc(model, initial, cfg.tau, pf.dt, pf.trajectories, seed)?;
                let k = cfg.tolerances.mc_sigmas;
                let target = run.final_state.entropy / 2.0;
                run.report.push(
                    CheckEntry::new(
                        "path_fisher_identity",
                        k * est.std_error,
                        (est.estimate - target).abs(),
                        Orientation::LhsGreater,
                        0.0,
                    )
                    .with_note(format!("|estimate − Σ(τ)/2| within {k} standard errors")),
                );
                let last_fisher = run.series.fisher().last().copied().unwrap_or(0.0);
                run.report.push(CheckEntry::new(
                    "fisher_le_path_fisher",
                    cfg.tau * cfg.tau * last_fisher,
                    est.estimate + k * est.std_error,
                    Orientation::LhsLess,
                    0.0,
                ));
                run.report.meta("path_fisher_estimate", est.estimate);
                run.report.meta("path_fisher_std_error", est.std_error);
                run.report.meta("path_fisher_mean_score", est.mean_score);
                run.report.meta("path_fisher_trajectories", est.n_trajectories as f64);
                run.report.meta("path_fisher_dt", est.dt);
                run.report.meta("seed", seed as f64);
            }
            if let Some(f) = opts.bound_scale {
                apply_bound_scale(&mut run.report, &mut [&mut run.series], f);
            }
            w.write_record(["t", "entropy", "fisher", "lambda_la", "fisher_length", "bound_length"])
                .map_err(csv_err)?;
            let (lam, bl) = (run.series.bound(), run.series.bound_lengths());
            for i in strided(run.samples.len(), cfg.csv_stride) {
                let s = &run.samples[i];
                w.write_record([
                    num(s.t),
                    num(s.entropy),
                    num(s.fisher),
                    num(lam[i]),
                    num(s.fisher_length),
                    num(bl[i]),
                ])
                .map_err(csv_err)?;
            }
            run.report
        }
        ScenarioModel::Markov { model, initial } => {
            let rc = MarkovRunConfig { tau: cfg.tau, dt: cfg.dt, t0: cfg.t0, tolerances: cfg.tolerances };
            let mut run = run_markov_experiment(model, initial, &rc, &cfg.id)?;
            if let Some(f) = opts.bound_scale {
                apply_bound_scale(&mut run.report, &mut [&mut run.entropy_series, &mut run.activity_series], f);
            }
            w.write_record([
                "t",
                "entropy",
                "pseudo_entropy",
                "activity",
                "fisher",
                "lambda_ma",
                "lambda_ma_activity",
                "fisher_length",
                "entropy_bound_length",
                "activity_bound_length",
            ])
            .map_err(csv_err)?;
            let (es, acs) = (&run.entropy_series, &run.activity_series);
            for i in strided(run.samples.len(), cfg.csv_stride) {
                let s = &run.samples[i];
                w.write_record([
                    num(s.t),
                    num(s.entropy),
                    num(s.pseudo_entropy),
                    num(s.activity),
                    num(s.fisher),
                    num(es.bound()[i]),
                    num(acs.bound()[i]),
                    num(s.fisher_length),
                    num(es.bound_lengths()[i]),
                    num(acs.bound_lengths()[i]),
                ])
                .map_err(csv_err)?;
            }
            run.report
        }
        ScenarioModel::OpenQuantum { system } => {
            let rc = SpectralRunConfig { tau: cfg.tau, dt: cfg.dt, tolerances: cfg.tolerances };
            let mut run = run_open_quantum_experiment(system, &rc, &cfg.id)?;
            if let Some(f) = opts.bound_scale {
                apply_bound_scale(&mut run.report, &mut [&mut run.series], f);
            }
            write_spectral(
                &mut w,
                &run.samples,
                &run.series,
                ["lambda_oq", "interaction_std", "purity"],
                |s, _| s.purity,
                cfg.csv_stride,
            )?;
            run.report
        }
        ScenarioModel::NonHermitian { model, initial } => {
            let rc = SpectralRunConfig { tau: cfg.tau, dt: cfg.dt, tolerances: cfg.tolerances };
            let mut run = run_nh_experiment(model, initial, &rc, &cfg.id)?;
            if let Some(f) = opts.bound_scale {
                apply_bound_scale(&mut run.report, &mut [&mut run.series], f);
            }
            let traces = run.raw_traces.clone();
            write_spectral(
                &mut w,
                &run.samples,
                &run.series,
                ["lambda_nh", "gamma_std", "raw_trace"],
                |_, i| traces[i],
                cfg.csv_stride,
            )?;
            run.report
        }
    };
    Ok((report, finish_csv(w)?))
}

fn write_spectral(
    w: &mut csv::Writer<Vec<u8>>,
    samples: &[SpectralSample],
    series: &BoundSeries,
    names: [&str; 3],
    extra: impl Fn(&SpectralSample, usize) -> f64,
    stride: usize,
) -> Result<()> {
    let dim = samples.first().map_or(0, |s| s.probs.len());
    let mut header = vec!["t".to_string()];
    header.extend((0..dim).map(|i| format!("p_{i}")));
    header.extend(["fisher", names[0], names[1], names[2], "fisher_length", "bound_length"].map(String::from));
    w.write_record(&header).map_err(csv_err)?;
    for i in strided(samples.len(), stride) {
        let s = &samples[i];
        let mut row = vec![num(s.t)];
        row.extend(s.probs.iter().map(|&p| num(p)));
        row.extend([
            num(s.fisher),
            num(series.bound()[i]),
            num(s.std),
            num(extra(s, i)),
            num(s.fisher_length),
            num(series.bound_lengths()[i]),
        ]);
        w.write_record(&row).map_err(csv_err)?;
    }
    Ok(())
}

/// Post-hoc rescaling of every bound by `factor` (test hook). Pointwise
/// entries scale their bound side by `factor`, speed-limit entries their
/// length side by `√factor`; each entry is then re-evaluated.
fn apply_bound_scale(report: &mut VerificationReport, series: &mut [&mut BoundSeries], factor: f64) {
    for s in series.iter_mut() {
        s.scale_bound(factor);
    }
    let root = factor.sqrt();
    for c in report.checks.iter_mut() {
        let rescaled = if c.name.starts_with("fisher_le_") && c.orientation == Orientation::LhsLess {
            Some((c.lhs, c.rhs * factor))
        } else if c.name == "purity_speed_limit" {
            let length = (c.lhs / 2.0).clamp(0.0, 1.0).asin() * root;
            Some((2.0 * length.clamp(0.0, std::f64::consts::FRAC_PI_2).sin(), c.rhs))
        } else if c.name.ends_with("_speed_limit") && !c.name.starts_with("fisher_length") {
            Some((c.lhs * root, c.rhs))
        } else {
            None
        };
        if let Some((lhs, rhs)) = rescaled {
            let note = c.note.clone();
            *c = CheckEntry::new(c.name.clone(), lhs, rhs, c.orientation, c.tolerance);
            c.note = note;
        }
    }
    report.note(format!("bounds rescaled by {factor} after the run (test hook)"));
    report.meta("bound_scale", factor);
}
