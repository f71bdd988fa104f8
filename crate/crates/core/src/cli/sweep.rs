//! One-parameter sweeps over a base config with an aggregated slack table.

use std::collections::HashMap;

use serde_json::Value;

use crate::error::{Error, Result};

use super::config::{config_from_value, ConfigFile};
use super::runner::{exit_status, num, run_all, RunOptions, RunSummary};

pub const SWEEP_HEADER: [&str; 9] =
    ["param", "value", "scenario", "check", "lhs", "rhs", "slack", "pass", "richardson_ratio"];

/// Result of one sweep: the per-value summaries and the aggregated table.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub runs: Vec<(String, Vec<RunSummary>)>,
    pub table: Vec<u8>,
    pub exit_status: i32,
}

/// Splits `"a,b,,c"` into the non-empty trimmed items.
pub fn split_values(values: &str) -> Vec<String> {
    values.split(',').map(str::trim).filter(|v| !v.is_empty()).map(String::from).collect()
}

/// Interprets a command-line value as a JSON scalar.
fn scalar(text: &str) -> Value {
    if let Ok(i) = text.parse::<i64>() {
        return Value::from(i);
    }
    if let Ok(x) = text.parse::<f64>() {
        if x.is_finite() {
            return Value::from(x);
        }
    }
    match text {
        "true" => Value::Bool(true),
        "false" => Value::Bool(false),
        _ => Value::String(text.to_string()),
    }
}

/// Replaces the field at dotted `path` (numeric segments index arrays).
/// Returns false when the path does not exist.
fn set_path(root: &mut Value, path: &str, new: &Value) -> bool {
    let mut cur = root;
    for seg in path.split('.') {
        let next = match cur {
            Value::Object(map) => map.get_mut(seg),
            Value::Array(items) => seg.parse::<usize>().ok().and_then(|i| items.get_mut(i)),
            _ => None,
        };
        match next {
            Some(v) => cur = v,
            None => return false,
        }
    }
    *cur = new.clone();
    true
}

/// Returns a copy of `base` with `param` set to `value` in every scenario
/// that has it; errors when no scenario does.
pub fn apply_param(base: &Value, param: &str, value: &str) -> Result<Value> {
    let mut doc = base.clone();
    let new = scalar(value);
    let mut hits = 0;
    if let Some(Value::Array(list)) = doc.get_mut("scenario") {
        for s in list.iter_mut() {
            if set_path(s, param, &new) {
                hits += 1;
            }
        }
    }
    if hits == 0 {
        return Err(Error::Config(format!("parameter '{param}' is not addressable in any scenario")));
    }
    Ok(doc)
}

/// Runs the base config once per value. Rows are ordered by value, then
/// scenario, then check. `richardson_ratio` is
/// `(sₖ₋₁ − sₖ₋₂)/(sₖ − sₖ₋₁)` for the slack of the same check across the
/// last three values: close to 4 for a second-order quantity when the
/// values halve `dt`.
pub fn sweep(base: &Value, param: &str, values: &[String], opts: &RunOptions) -> Result<SweepOutcome> {
    let configs: Vec<ConfigFile> =
        values.iter().map(|v| apply_param(base, param, v).and_then(config_from_value)).collect::<Result<_>>()?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(SWEEP_HEADER).map_err(io)?;
    let mut history: HashMap<(String, String), Vec<f64>> = HashMap::new();
    let mut runs = Vec::new();
    let mut status = 0;
    for (value, cfg) in values.iter().zip(&configs) {
        let summaries: Vec<RunSummary> = run_all(&cfg.scenarios, opts)?.into_iter().map(|o| o.summary).collect();
        status = status.max(exit_status(&summaries));
        for s in &summaries {
            for c in &s.checks {
                let hist = history.entry((s.id.clone(), c.name.clone())).or_default();
                hist.push(c.slack);
                let ratio = match hist.as_slice() {
                    [.., a, b, c] => num((b - a) / (c - b)),
                    _ => String::new(),
                };
                w.write_record([
                    param,
                    value,
                    &s.id,
                    &c.name,
                    &num(c.lhs),
                    &num(c.rhs),
                    &num(c.slack),
                    if c.pass { "true" } else { "false" },
                    &ratio,
                ])
                .map_err(io)?;
            }
            if s.error.is_some() {
                w.write_record([param, value, &s.id, "error", "", "", "", "false", ""]).map_err(io)?;
            }
        }
        runs.push((value.clone(), summaries));
    }
    let table = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(SweepOutcome { runs, table, exit_status: status })
}
