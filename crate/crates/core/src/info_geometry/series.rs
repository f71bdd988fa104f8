use serde::Serialize;

use crate::error::{Error, Result};

/// Time series of Fisher information and its upper bound, with running
/// lengths `½∫√ℐ dt` and `½∫√Λ dt` (trapezoidal rule on the square roots).
#[derive(Debug, Clone, Default, Serialize)]
pub struct BoundSeries {
    times: Vec<f64>,
    fisher: Vec<f64>,
    bound: Vec<f64>,
    fisher_length: Vec<f64>,
    bound_length: Vec<f64>,
}

impl BoundSeries {
    pub fn new() -> Self {
        Self::default()
    }

    /// A series whose first sample carries lengths already accumulated
    /// before `t` (e.g. over a start-up interval that is integrated apart).
    pub fn starting_at(t: f64, fisher: f64, bound: f64, fisher_offset: f64, bound_offset: f64) -> Result<Self> {
        check_sample(fisher, bound)?;
        Ok(Self {
            times: vec![t],
            fisher: vec![fisher],
            bound: vec![bound],
            fisher_length: vec![fisher_offset],
            bound_length: vec![bound_offset],
        })
    }

    /// Appends a sample and advances both lengths by the trapezoidal rule.
    pub fn accumulate(&mut self, t: f64, fisher: f64, bound: f64) -> Result<()> {
        let df = match (self.times.last(), self.fisher.last()) {
            (Some(&t0), Some(&f0)) => 0.25 * (t - t0) * (f0.sqrt() + fisher.max(0.0).sqrt()),
            _ => 0.0,
        };
        self.push(t, fisher, bound, df)
    }

    /// Like [`accumulate`](Self::accumulate) but advances the Fisher length
    /// by a supplied increment. Used on intervals touching a sample where the
    /// Fisher sum had extinct components and the trapezoid is unreliable; the
    /// caller then passes the Bhattacharyya chord between the endpoints.
    pub fn accumulate_with_fisher_increment(&mut self, t: f64, fisher: f64, bound: f64, increment: f64) -> Result<()> {
        self.push(t, fisher, bound, increment.max(0.0))
    }

    fn push(&mut self, t: f64, fisher: f64, bound: f64, fisher_increment: f64) -> Result<()> {
        check_sample(fisher, bound)?;
        let Some(&last) = self.times.last() else {
            self.times.push(t);
            self.fisher.push(fisher);
            self.bound.push(bound);
            self.fisher_length.push(0.0);
            self.bound_length.push(0.0);
            return Ok(());
        };
        if !(t > last) {
            return Err(Error::NonMonotoneTime { last, new: t });
        }
        let b0 = *self.bound.last().unwrap_or(&0.0);
        let db = 0.25 * (t - last) * (b0.sqrt() + bound.sqrt());
        let fl = self.fisher_length.last().copied().unwrap_or(0.0) + fisher_increment;
        let bl = self.bound_length.last().copied().unwrap_or(0.0) + db;
        self.times.push(t);
        self.fisher.push(fisher);
        self.bound.push(bound);
        self.fisher_length.push(fl);
        self.bound_length.push(bl);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn fisher(&self) -> &[f64] {
        &self.fisher
    }

    pub fn bound(&self) -> &[f64] {
        &self.bound
    }

    pub fn fisher_lengths(&self) -> &[f64] {
        &self.fisher_length
    }

    pub fn bound_lengths(&self) -> &[f64] {
        &self.bound_length
    }

    pub fn fisher_length(&self) -> f64 {
        self.fisher_length.last().copied().unwrap_or(0.0)
    }

    pub fn bound_length(&self) -> f64 {
        self.bound_length.last().copied().unwrap_or(0.0)
    }

    /// Time average of `√Λ` over the recorded span (`2·bound_length / span`).
    pub fn mean_sqrt_bound(&self) -> f64 {
        match (self.times.first(), self.times.last()) {
            (Some(a), Some(b)) if b > a => 2.0 * (self.bound_length() - self.bound_length[0]) / (b - a),
            _ => 0.0,
        }
    }

    /// Multiplies every bound sample by `factor` and recomputes the bound
    /// length. Test hook for forcing violations.
    pub fn scale_bound(&mut self, factor: f64) {
        let offset = self.bound_length.first().copied().unwrap_or(0.0) * factor.sqrt();
        let mut acc = offset;
        for k in 0..self.bound.len() {
            self.bound[k] *= factor;
            if k > 0 {
                acc += 0.25 * (self.times[k] - self.times[k - 1]) * (self.bound[k - 1].sqrt() + self.bound[k].sqrt());
            }
            self.bound_length[k] = acc;
        }
    }
}

fn check_sample(fisher: f64, bound: f64) -> Result<()> {
    if !(fisher >= 0.0) || !(bound >= 0.0) {
        return Err(Error::InvalidArgument(format!("fisher ({fisher}) and bound ({bound}) must be non-negative")));
    }
    Ok(())
}
