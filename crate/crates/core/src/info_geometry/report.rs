use serde::Serialize;

use crate::error::{Error, Result};

/// Orientation of an inequality check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Passes when `lhs ≥ rhs`; slack is `lhs − rhs`.
    LhsGreater,
    /// Passes when `lhs ≤ rhs`; slack is `rhs − lhs`.
    LhsLess,
}

/// One verified inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub orientation: Orientation,
    pub slack: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckEntry {
    /// Builds an entry; `pass ⇔ slack ≥ −tolerance`, and NaN never passes.
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, orientation: Orientation, tolerance: f64) -> Self {
        let slack = match orientation {
            Orientation::LhsGreater => lhs - rhs,
            Orientation::LhsLess => rhs - lhs,
        };
        let pass = slack >= -tolerance;
        Self { name: name.into(), lhs, rhs, orientation, slack, tolerance, pass, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Collection of checks for one scenario run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub scenario: String,
    pub checks: Vec<CheckEntry>,
    /// Integrator settings and diagnostics as ordered key/value pairs.
    pub metadata: Vec<(String, f64)>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(scenario: impl Into<String>) -> Self {
        Self { scenario: scenario.into(), ..Default::default() }
    }

    pub fn push(&mut self, entry: CheckEntry) {
        self.checks.push(entry);
    }

    pub fn meta(&mut self, key: impl Into<String>, value: f64) {
        self.metadata.push((key.into(), value));
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn metadata_value(&self, key: &str) -> Option<f64> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }
}

/// Checks `bound_length ≥ distance − tol`.
pub fn check_speed_limit(name: &str, bound_length: f64, distance: f64, tol: f64) -> CheckEntry {
    CheckEntry::new(name, bound_length, distance, Orientation::LhsGreater, tol)
}

/// Minimal time `2·distance / mean(√Λ)` implied by a speed limit.
pub fn tau_min(distance: f64, avg_sqrt_bound: f64) -> Result<f64> {
    if !(avg_sqrt_bound > 0.0) {
        return Err(Error::InvalidArgument(format!("time-averaged sqrt bound must be positive, got {avg_sqrt_bound}")));
    }
    Ok(2.0 * distance / avg_sqrt_bound)
}

/// Tolerances for the bound checks of one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub pointwise_rel: f64,
    pub pointwise_abs: f64,
    pub integrated: f64,
    pub mc_sigmas: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { pointwise_rel: 1e-6, pointwise_abs: 1e-9, integrated: 1e-4, mc_sigmas: 3.0 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("pointwise_rel", self.pointwise_rel),
            ("pointwise_abs", self.pointwise_abs),
            ("integrated", self.integrated),
            ("mc_sigmas", self.mc_sigmas),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Worst-case pointwise check of `fisher ≤ bound` over the samples selected
/// by `include`. The tolerance at each sample is `rel·bound + abs`; the
/// reported entry is the sample with the smallest normalized slack.
pub fn pointwise_check(
    name: &str,
    fisher: &[f64],
    bound: &[f64],
    include: impl Fn(usize) -> bool,
    tol: &Tolerances,
) -> CheckEntry {
    let mut worst: Option<(f64, usize)> = None;
    let mut count = 0usize;
    for k in 0..fisher.len().min(bound.len()) {
        if !include(k) {
            continue;
        }
        count += 1;
        let allowed = tol.pointwise_rel * bound[k].abs() + tol.pointwise_abs;
        let score = (bound[k] - fisher[k]) / allowed;
        let score = if score.is_nan() { f64::NEG_INFINITY } else { score };
        if worst.is_none_or(|(s, _)| score < s) {
            worst = Some((score, k));
        }
    }
    match worst {
        Some((_, k)) => {
            let allowed = tol.pointwise_rel * bound[k].abs() + tol.pointwise_abs;
            CheckEntry::new(name, fisher[k], bound[k], Orientation::LhsLess, allowed)
                .with_note(format!("worst of {count} samples at index {k}"))
        }
        None => CheckEntry::new(name, 0.0, 0.0, Orientation::LhsLess, tol.pointwise_abs).with_note("no samples"),
    }
}
