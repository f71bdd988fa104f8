//! Statistical distances between distributions.

use crate::error::{Error, Result};
use crate::numeric::{unit_vector_angle, KahanSum};

use super::distribution::{DiscreteDistribution, GridDensity};

/// Bhattacharyya arccos distance `arccos Σ √(pᵢ qᵢ)`, in `[0, π/2]`.
///
/// Evaluated as the angle between `√p` and `√q`, which is the same quantity
/// with the cosine argument implicitly clamped to `[0, 1]`.
pub fn bhattacharyya_arccos(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: q.dim() });
    }
    Ok(bhattacharyya_slices(p.probs(), q.probs()))
}

pub(crate) fn bhattacharyya_slices(p: &[f64], q: &[f64]) -> f64 {
    let a: Vec<f64> = p.iter().map(|x| x.max(0.0).sqrt()).collect();
    let b: Vec<f64> = q.iter().map(|x| x.max(0.0).sqrt()).collect();
    unit_vector_angle(&a, &b).min(std::f64::consts::FRAC_PI_2)
}

/// Bhattacharyya coefficient `Σ √(pᵢ qᵢ)`, clamped to `[0, 1]`.
pub fn bhattacharyya_coefficient(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: q.dim() });
    }
    let mut acc = KahanSum::new();
    for (x, y) in p.probs().iter().zip(q.probs()) {
        acc.add((x * y).sqrt());
    }
    Ok(acc.value().clamp(0.0, 1.0))
}

/// Continuous Bhattacharyya arccos distance on a shared grid.
pub fn bhattacharyya_arccos_grid(p: &GridDensity, q: &GridDensity) -> Result<f64> {
    if !p.same_grid(q) {
        return Err(Error::GridMismatch("densities live on different grids".into()));
    }
    let dv = p.grid().cell_volume();
    let a: Vec<f64> = p.values().iter().map(|v| (v * dv).sqrt()).collect();
    let b: Vec<f64> = q.values().iter().map(|v| (v * dv).sqrt()).collect();
    Ok(unit_vector_angle(&a, &b).min(std::f64::consts::FRAC_PI_2))
}

/// Piece of a quantile function: on `u ∈ [u0, u1]` it runs linearly from
/// `x0` to `x1`.
#[derive(Debug, Clone, Copy)]
struct QuantilePiece {
    u1: f64,
    x0: f64,
    x1: f64,
    u0: f64,
}

impl QuantilePiece {
    fn at(&self, u: f64) -> f64 {
        let w = self.u1 - self.u0;
        if w <= 0.0 {
            return self.x0;
        }
        self.x0 + (self.x1 - self.x0) * ((u - self.u0) / w).clamp(0.0, 1.0)
    }
}

fn quantile_pieces(p: &GridDensity) -> Vec<QuantilePiece> {
    let axis = p.grid().axes()[0];
    let dx = axis.spacing();
    let total = p.mass();
    let mut pieces = Vec::with_capacity(axis.n);
    let mut cum = KahanSum::new();
    for (i, &v) in p.values().iter().enumerate() {
        let m = v * dx / total;
        if m <= 0.0 {
            continue;
        }
        let u0 = cum.value();
        cum.add(m);
        let left = axis.lo + i as f64 * dx;
        pieces.push(QuantilePiece { u0, u1: cum.value(), x0: left, x1: left + dx });
    }
    if let Some(last) = pieces.last_mut() {
        last.u1 = 1.0;
    }
    pieces
}

/// Squared 2-Wasserstein distance between two 1D grid densities.
///
/// Densities are treated as piecewise constant on their cells, so both
/// quantile functions are piecewise linear and the quantile-coupling integral
/// `∫₀¹ (F_p⁻¹(u) − F_q⁻¹(u))² du` is evaluated exactly on the merged
/// breakpoints. Periodic grids are unrolled onto the line.
pub fn wasserstein_1d(p: &GridDensity, q: &GridDensity) -> Result<f64> {
    if p.grid().ndim() != 1 || q.grid().ndim() != 1 {
        return Err(Error::GridMismatch("wasserstein_1d requires 1D grids".into()));
    }
    if !p.same_grid(q) {
        return Err(Error::GridMismatch("densities live on different grids".into()));
    }
    let a = quantile_pieces(p);
    let b = quantile_pieces(q);
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("density has no mass".into()));
    }
    let (mut i, mut j) = (0, 0);
    let mut u = 0.0;
    let mut acc = KahanSum::new();
    while i < a.len() && j < b.len() {
        let u_next = a[i].u1.min(b[j].u1);
        if u_next > u {
            let d0 = a[i].at(u) - b[j].at(u);
            let d1 = a[i].at(u_next) - b[j].at(u_next);
            acc.add((u_next - u) * (d0 * d0 + d0 * d1 + d1 * d1) / 3.0);
            u = u_next;
        }
        if a[i].u1 <= u {
            i += 1;
        }
        if j < b.len() && b[j].u1 <= u {
            j += 1;
        }
    }
    Ok(acc.value().max(0.0))
}
