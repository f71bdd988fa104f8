//! Temporal Fisher information `Σ (∂ₜp)² / p`.

use crate::error::{Error, Result};
use crate::numeric::{KahanSum, PROB_FLOOR};

use super::distribution::{DiscreteDistribution, GridDensity};

const FLOW_TOL_DISCRETE: f64 = 1e-10;
const FLOW_TOL_GRID: f64 = 1e-8;

/// Fisher information of a probability vector with respect to time.
///
/// Components with `p < PROB_FLOOR` are dropped; `dp_dt` must sum to zero.
pub fn temporal_fisher_discrete(p: &DiscreteDistribution, dp_dt: &[f64]) -> Result<f64> {
    if dp_dt.len() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: dp_dt.len() });
    }
    let sum: f64 = dp_dt.iter().sum();
    if sum.abs() > FLOW_TOL_DISCRETE {
        return Err(Error::UnnormalizedFlow { sum });
    }
    Ok(fisher_terms(p.probs(), dp_dt, PROB_FLOOR).value)
}

/// Result of a masked Fisher sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskedFisher {
    pub value: f64,
    /// Number of components that fell below the floor.
    pub masked: usize,
}

/// Unchecked masked sum `Σ ṗᵢ²/pᵢ` over components with `pᵢ ≥ floor`.
pub fn fisher_terms(probs: &[f64], rates: &[f64], floor: f64) -> MaskedFisher {
    let mut acc = KahanSum::new();
    let mut masked = 0;
    for (&p, &r) in probs.iter().zip(rates) {
        if p < floor {
            masked += 1;
        } else {
            acc.add(r * r / p);
        }
    }
    MaskedFisher { value: acc.value(), masked }
}

/// Riemann-sum Fisher information of a grid density. The floor is
/// `PROB_FLOOR / ΔV` so that it corresponds to a cell probability of 1e-12.
pub fn temporal_fisher_grid(p: &GridDensity, dp_dt: &[f64]) -> Result<f64> {
    if dp_dt.len() != p.values().len() {
        return Err(Error::GridMismatch(format!(
            "density has {} cells, derivative has {}",
            p.values().len(),
            dp_dt.len()
        )));
    }
    let dv = p.grid().cell_volume();
    let flow = crate::numeric::kahan_sum(dp_dt.iter().copied()) * dv;
    if flow.abs() > FLOW_TOL_GRID {
        return Err(Error::UnnormalizedFlow { sum: flow });
    }
    Ok(grid_fisher_unchecked(p.values(), dp_dt, dv))
}

pub(crate) fn grid_fisher_unchecked(values: &[f64], dp_dt: &[f64], dv: f64) -> f64 {
    fisher_terms(values, dp_dt, PROB_FLOOR / dv).value * dv
}
