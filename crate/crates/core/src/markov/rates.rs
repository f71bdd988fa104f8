//! Instantaneous rates: entropy production, pseudo-entropy production and
//! dynamical activity.

use crate::numeric::{KahanSum, PROB_FLOOR};

use super::model::MarkovModel;

/// A rate value plus the number of edges dropped by the probability floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeSum {
    pub value: f64,
    pub masked: usize,
}

fn edge_flows(model: &MarkovModel, p: &[f64], i: usize, j: usize) -> Option<(f64, f64)> {
    let wij = model.rate(i, j);
    if wij == 0.0 {
        return None;
    }
    Some((wij * p[j], model.rate(j, i) * p[i]))
}

/// `Σ_{i≠j} W_ij p_j ln(W_ij p_j / W_ji p_i)`, evaluated per edge as
/// `(a − b) ln(a/b) ≥ 0`. An edge is dropped when either endpoint is below
/// the floor: its vanishing-flow half tends to zero and the other half is the
/// divergent start-up term that the caller integrates separately.
pub fn entropy_production_rate(model: &MarkovModel, p: &[f64]) -> EdgeSum {
    entropy_production_rate_above(model, p, PROB_FLOOR)
}

/// [`entropy_production_rate`] with an explicit floor. Edges with a zero
/// flow are always dropped; with `floor = 0` every other edge is kept, which
/// the start-up integrator uses to resolve the region where an initially
/// empty state holds less than the default floor.
pub(crate) fn entropy_production_rate_above(model: &MarkovModel, p: &[f64], floor: f64) -> EdgeSum {
    let mut acc = KahanSum::new();
    let mut masked = 0;
    for i in 0..model.n() {
        for j in 0..i {
            let Some((a, b)) = edge_flows(model, p, i, j) else { continue };
            if p[i] < floor || p[j] < floor || a == 0.0 || b == 0.0 {
                masked += 1;
                continue;
            }
            acc.add((a - b) * (a / b).ln());
        }
    }
    EdgeSum { value: acc.value().max(0.0), masked }
}

/// `2 Σ_{i>j} (a − b)² / (a + b)` with `a = W_ij p_j`, `b = W_ji p_i`.
pub fn pseudo_entropy_production_rate(model: &MarkovModel, p: &[f64]) -> f64 {
    let mut acc = KahanSum::new();
    for i in 0..model.n() {
        for j in 0..i {
            let Some((a, b)) = edge_flows(model, p, i, j) else { continue };
            if a + b > 0.0 {
                acc.add(2.0 * (a - b) * (a - b) / (a + b));
            }
        }
    }
    acc.value()
}

/// Expected jump rate `Σ_{i≠j} W_ij p_j`.
pub fn dynamical_activity_rate(model: &MarkovModel, p: &[f64]) -> f64 {
    let mut acc = KahanSum::new();
    for i in 0..model.n() {
        for j in 0..model.n() {
            if i != j {
                acc.add(model.rate(i, j) * p[j]);
            }
        }
    }
    acc.value()
}
