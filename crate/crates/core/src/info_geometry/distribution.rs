use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::kahan_sum;

const SIMPLEX_TOL: f64 = 1e-12;
const DENSITY_TOL: f64 = 1e-8;

/// A normalized probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    /// Validates non-negativity and unit sum (to 1e-12).
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(probs, SIMPLEX_TOL)
    }

    pub fn with_tolerance(probs: Vec<f64>, tol: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidArgument("empty distribution".into()));
        }
        for (index, &value) in probs.iter().enumerate() {
            if !(value >= 0.0) {
                return Err(Error::NegativeEntry { index, value });
            }
        }
        let total = kahan_sum(probs.iter().copied());
        if (total - 1.0).abs() > tol {
            return Err(Error::NotNormalized { total, tol });
        }
        Ok(Self { probs })
    }

    /// Clips tiny negatives and rescales to unit sum.
    pub fn renormalized(mut probs: Vec<f64>) -> Result<Self> {
        for p in probs.iter_mut() {
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let total = kahan_sum(probs.iter().copied());
        if !(total > 0.0) {
            return Err(Error::NotNormalized { total, tol: SIMPLEX_TOL });
        }
        probs.iter_mut().for_each(|p| *p /= total);
        Self::new(probs)
    }

    pub fn uniform(n: usize) -> Self {
        Self { probs: vec![1.0 / n as f64; n] }
    }

    pub fn delta(n: usize, at: usize) -> Result<Self> {
        if at >= n {
            return Err(Error::InvalidArgument(format!("delta index {at} out of range {n}")));
        }
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    /// Components sorted in non-descending order.
    pub fn sorted_ascending(&self) -> Self {
        let mut probs = self.probs.clone();
        probs.sort_by(f64::total_cmp);
        Self { probs }
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

/// Boundary condition of a spatial grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Reflecting,
    Periodic,
}

/// One axis of a uniform cell-centred grid spanning `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(hi > lo) || n < 2 || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(format!("bad axis [{lo}, {hi}] with {n} cells")));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / self.n as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.spacing()
    }
}

/// Uniform grid of up to a few axes, row-major with the last axis fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 3 {
            return Err(Error::InvalidArgument(format!("grid must have 1 to 3 axes, got {}", axes.len())));
        }
        for a in &axes {
            Axis::new(a.lo, a.hi, a.n)?;
        }
        Ok(Self { axes })
    }

    pub fn line(lo: f64, hi: f64, n: usize) -> Result<Self> {
        Self::new(vec![Axis::new(lo, hi, n)?])
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn ndim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(Axis::spacing).product()
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.axes[axis + 1..].iter().map(|a| a.n).product()
    }

    /// Multi-index of a flat cell index.
    pub fn unravel(&self, mut flat: usize, out: &mut [usize]) {
        for d in (0..self.ndim()).rev() {
            let n = self.axes[d].n;
            out[d] = flat % n;
            flat /= n;
        }
    }

    pub fn center(&self, flat: usize, out: &mut [f64]) {
        let mut idx = [0usize; 3];
        self.unravel(flat, &mut idx[..self.ndim()]);
        for d in 0..self.ndim() {
            out[d] = self.axes[d].center(idx[d]);
        }
    }
}

/// Probability density sampled at cell centres of a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    grid: Grid,
    boundary: Boundary,
    values: Vec<f64>,
}

impl GridDensity {
    /// Validates non-negativity and unit mass (Riemann sum, 1e-8).
    pub fn new(grid: Grid, boundary: Boundary, values: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(grid, boundary, values, DENSITY_TOL)
    }

    pub fn with_tolerance(grid: Grid, boundary: Boundary, values: Vec<f64>, tol: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: values.len() });
        }
        for (index, &value) in values.iter().enumerate() {
            if !(value >= 0.0) {
                return Err(Error::NegativeEntry { index, value });
            }
        }
        let total = kahan_sum(values.iter().copied()) * grid.cell_volume();
        if (total - 1.0).abs() > tol {
            return Err(Error::NotNormalized { total, tol });
        }
        Ok(Self { grid, boundary, values })
    }

    /// Samples `f` at cell centres and rescales to unit mass.
    ///
    /// Returns the density together with the mass `1 - Σ f ΔV` that fell
    /// outside the grid (meaningful when `f` is normalized on the full space).
    pub fn from_fn<F>(grid: Grid, boundary: Boundary, f: F) -> Result<(Self, f64)>
    where
        F: Fn(&[f64]) -> f64,
    {
        let mut x = [0.0; 3];
        let nd = grid.ndim();
        let mut values = Vec::with_capacity(grid.len());
        for c in 0..grid.len() {
            grid.center(c, &mut x[..nd]);
            values.push(f(&x[..nd]).max(0.0));
        }
        let raw = kahan_sum(values.iter().copied()) * grid.cell_volume();
        if !(raw > 0.0) || !raw.is_finite() {
            return Err(Error::NotNormalized { total: raw, tol: DENSITY_TOL });
        }
        values.iter_mut().for_each(|v| *v /= raw);
        Ok((Self::new(grid, boundary, values)?, 1.0 - raw))
    }

    /// Rescales arbitrary non-negative values to unit mass.
    pub fn renormalized(grid: Grid, boundary: Boundary, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: values.len() });
        }
        values.iter_mut().for_each(|v| *v = v.max(0.0));
        let raw = kahan_sum(values.iter().copied()) * grid.cell_volume();
        if !(raw > 0.0) {
            return Err(Error::NotNormalized { total: raw, tol: DENSITY_TOL });
        }
        values.iter_mut().for_each(|v| *v /= raw);
        Self::new(grid, boundary, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mass(&self) -> f64 {
        kahan_sum(self.values.iter().copied()) * self.grid.cell_volume()
    }

    pub fn same_grid(&self, other: &GridDensity) -> bool {
        self.grid == other.grid
    }

    /// First and second moments along `axis`.
    pub fn mean_variance(&self, axis: usize) -> (f64, f64) {
        let nd = self.grid.ndim();
        let dv = self.grid.cell_volume();
        let mut x = [0.0; 3];
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for (c, &p) in self.values.iter().enumerate() {
            self.grid.center(c, &mut x[..nd]);
            m1 += x[axis] * p * dv;
            m2 += x[axis] * x[axis] * p * dv;
        }
        (m1, m2 - m1 * m1)
    }
}
