use crate::error::{Error, Result};
use crate::info_geometry::GridDensity;
use crate::numeric::{KahanSum, PROB_FLOOR};

use super::model::LangevinModel;

/// Grid density at time `t` with the entropy production `Σ(t)` accumulated
/// since the start of the run (`k_B = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct FokkerPlanckState {
    pub density: GridDensity,
    pub time: f64,
    pub entropy: f64,
    /// Cells whose round-off negativity was clipped to zero so far.
    pub clipped_cells: usize,
}

impl FokkerPlanckState {
    pub fn initial(density: GridDensity) -> Self {
        Self { density, time: 0.0, entropy: 0.0, clipped_cells: 0 }
    }
}

/// Right-hand side `∂ₜp = −∇·J` of the discretized Fokker–Planck equation.
pub fn fpe_rhs(model: &LangevinModel, p: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len()];
    let inv_dx: Vec<f64> = model.grid().axes().iter().map(|a| 1.0 / a.spacing()).collect();
    model.for_each_face(|a, lo, hi, f| {
        let j = model.flux(a, p[lo], p[hi], f) * inv_dx[a];
        out[lo] -= j;
        out[hi] += j;
    });
    out
}

/// `Σ̇ = (1/D) ∫ |ν|² p dⁿx` evaluated on faces: with the face velocity
/// `ν = J / p_face` each face contributes `J² / (D p_face) ΔV`, which vanishes
/// exactly on the discrete stationary state. Faces whose interpolated density
/// is below the floor are skipped.
pub(crate) fn ep_rate_values(model: &LangevinModel, p: &[f64]) -> f64 {
    let dv = model.grid().cell_volume();
    let floor = PROB_FLOOR / dv;
    let d = model.diffusion();
    let mut acc = KahanSum::new();
    model.for_each_face(|a, lo, hi, f| {
        let pf = 0.5 * (p[lo] + p[hi]);
        if pf >= floor {
            let j = model.flux(a, p[lo], p[hi], f);
            acc.add(j * j / (d * pf));
        }
    });
    acc.value() * dv
}

/// One RK4 step of the semi-discrete equation; returns the new values and
/// the number of cells clipped from tiny negative round-off to zero.
pub(crate) fn rk4_values(model: &LangevinModel, p: &[f64], k1: &[f64], dt: f64) -> Result<(Vec<f64>, usize)> {
    let n = p.len();
    let stage = |k: &[f64], h: f64| -> Vec<f64> { (0..n).map(|i| p[i] + h * k[i]).collect() };
    let k2 = fpe_rhs(model, &stage(k1, 0.5 * dt));
    let k3 = fpe_rhs(model, &stage(&k2, 0.5 * dt));
    let k4 = fpe_rhs(model, &stage(&k3, dt));
    let dv = model.grid().cell_volume();
    let mut clipped = 0;
    let mut next = Vec::with_capacity(n);
    for i in 0..n {
        let v = p[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if v < 0.0 {
            if v * dv < -PROB_FLOOR {
                return Err(Error::NegativeDensity { value: v });
            }
            clipped += 1;
            next.push(0.0);
        } else {
            next.push(v);
        }
    }
    Ok((next, clipped))
}

pub(crate) fn check_stability(model: &LangevinModel, dt: f64) -> Result<()> {
    let limit = model.max_stable_dt();
    if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
        return Err(Error::StabilityViolation { dt, limit });
    }
    Ok(())
}

pub(crate) fn check_grid(state: &FokkerPlanckState, model: &LangevinModel) -> Result<()> {
    if state.density.grid() != model.grid() || state.density.boundary() != model.boundary() {
        return Err(Error::GridMismatch("state and model grids differ".into()));
    }
    Ok(())
}

/// Advances the density by one RK4 step and `Σ` by the trapezoidal rule on
/// `Σ̇`. Mass is conserved by construction up to round-off.
pub fn fpe_step(state: &FokkerPlanckState, model: &LangevinModel, dt: f64) -> Result<FokkerPlanckState> {
    check_grid(state, model)?;
    check_stability(model, dt)?;
    let p = state.density.values();
    let k1 = fpe_rhs(model, p);
    let (next, clipped) = rk4_values(model, p, &k1, dt)?;
    let rate_before = ep_rate_values(model, p);
    let rate_after = ep_rate_values(model, &next);
    let density = GridDensity::with_tolerance(model.grid().clone(), model.boundary(), next, 1e-6)?;
    Ok(FokkerPlanckState {
        density,
        time: state.time + dt,
        entropy: state.entropy + 0.5 * dt * (rate_before + rate_after),
        clipped_cells: state.clipped_cells + clipped,
    })
}

/// Local mean velocity `ν = F − D∇ln p` at cell centres.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityField {
    /// One vector of cell values per axis.
    pub components: Vec<Vec<f64>>,
    /// Cells where `p` (or a neighbour used by the stencil) is below the floor; `ν` is zero there.
    pub masked: Vec<bool>,
}

/// `ν = F − D ∇ln p` at cell centres by central differences of `ln p`
/// (one-sided at reflecting walls).
pub fn local_mean_velocity(state: &FokkerPlanckState, model: &LangevinModel) -> Result<VelocityField> {
    check_grid(state, model)?;
    Ok(velocity_values(model, state.density.values()))
}

pub(crate) fn velocity_values(model: &LangevinModel, p: &[f64]) -> VelocityField {
    let grid = model.grid();
    let floor = PROB_FLOOR / grid.cell_volume();
    let periodic = model.boundary() == crate::info_geometry::Boundary::Periodic;
    let len = p.len();
    let mut masked: Vec<bool> = p.iter().map(|&v| v < floor).collect();
    let mut components = Vec::with_capacity(grid.ndim());
    for (a, axis) in grid.axes().iter().enumerate() {
        let stride = grid.stride(a);
        let n = axis.n;
        let dx = axis.spacing();
        let force = model.center_force(a);
        let mut comp = vec![0.0; len];
        for idx in 0..len {
            let i = (idx / stride) % n;
            let (lo, hi, span) = match (i, periodic) {
                (0, true) => (idx + (n - 1) * stride, idx + stride, 2.0),
                (i, true) if i == n - 1 => (idx - stride, idx - (n - 1) * stride, 2.0),
                (0, false) => (idx, idx + stride, 1.0),
                (i, false) if i == n - 1 => (idx - stride, idx, 1.0),
                _ => (idx - stride, idx + stride, 2.0),
            };
            if p[lo] < floor || p[hi] < floor || p[idx] < floor {
                masked[idx] = true;
                continue;
            }
            comp[idx] = force[i] - model.diffusion() * (p[hi].ln() - p[lo].ln()) / (span * dx);
        }
        components.push(comp);
    }
    for comp in &mut components {
        for (v, &m) in comp.iter_mut().zip(&masked) {
            if m {
                *v = 0.0;
            }
        }
    }
    VelocityField { components, masked }
}

/// Instantaneous entropy production rate `Σ̇ ≥ 0`.
pub fn entropy_production_rate(state: &FokkerPlanckState, model: &LangevinModel) -> Result<f64> {
    check_grid(state, model)?;
    Ok(ep_rate_values(model, state.density.values()))
}

/// `Λ_LA(t) = Σ(t) / 2t²`.
pub fn lambda_langevin(state: &FokkerPlanckState) -> Result<f64> {
    if !(state.time > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "bound undefined at t = {}; start recording at t0 > 0",
            state.time
        )));
    }
    Ok(state.entropy / (2.0 * state.time * state.time))
}
