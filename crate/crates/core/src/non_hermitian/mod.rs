//! Non-Hermitian dynamics `iρ̇ = 𝓗ρ − ρ𝓗†` followed through the normalized
//! state `ρ̂ = ρ / Tr ρ`, with the dissipation bound `Λ_NH = 4⟨⟨γ⟩⟩²` where
//! `𝓗 = H − iγ`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::info_geometry::{BoundSeries, Tolerances, VerificationReport};
use crate::linalg::{anticommutator, eigh, ensure_square, hermitize, identity, pauli_x, pauli_z, trace, CMatrix};
use crate::numeric::uniform_steps;
use crate::quantum::{
    operator_std, spectral_rates, DensityOperator, SpectralRecorder, SpectralRunConfig, SpectralSample, SpectralTrack,
};

/// Largest accepted `dt·‖𝓗‖₂`.
pub const STEP_GUARD: f64 = 0.05;
/// The run aborts when `Tr ρ` falls below this.
pub const TRACE_FLOOR: f64 = 1e-12;
/// Negative eigenvalues of a stepped `ρ̂` down to this size are treated as
/// RK4 truncation error and projected away. The exact flow is a congruence
/// and keeps `ρ̂ ≥ 0`, but for a rank-deficient state one step at the guard
/// can move a zero eigenvalue by ~(dt‖𝓗‖)⁵ ≈ 3e-7, far beyond round-off.
pub const PSD_STEP_TOL: f64 = 1e-6;

/// `(H, γ)` with `𝓗 = H − iγ`, both Hermitian.
pub fn decompose(h_full: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    ensure_square(h_full)?;
    let adj = h_full.adjoint();
    let h = (h_full + &adj).scale(0.5);
    let gamma = (h_full - &adj) * Complex64::new(0.0, 0.5);
    Ok((h, gamma))
}

#[derive(Debug, Clone)]
pub struct NonHermitianModel {
    h_full: CMatrix,
    h: CMatrix,
    gamma: CMatrix,
    norm: f64,
}

impl NonHermitianModel {
    pub fn new(h_full: CMatrix) -> Result<Self> {
        let (h, gamma) = decompose(&h_full)?;
        let norm = crate::linalg::spectral_norm(&h_full);
        Ok(Self { h_full, h, gamma, norm })
    }

    /// `𝓗 = −i diag(0, g)`: pure decay of the second level.
    pub fn diag_decay(g: f64) -> Result<Self> {
        Self::new(crate::linalg::from_real_diag(&[0.0, g]) * Complex64::new(0.0, -1.0))
    }

    /// `𝓗 = ω σx − i g (I − σz)/2`: coherent driving against loss of the second level.
    pub fn pt_like(omega: f64, g: f64) -> Result<Self> {
        let loss = (identity(2) - pauli_z()).scale(g / 2.0);
        Self::new(pauli_x().scale(omega) - loss * Complex64::new(0.0, 1.0))
    }

    pub fn dim(&self) -> usize {
        self.h_full.nrows()
    }

    pub fn h_full(&self) -> &CMatrix {
        &self.h_full
    }

    pub fn hermitian_part(&self) -> &CMatrix {
        &self.h
    }

    pub fn dissipator(&self) -> &CMatrix {
        &self.gamma
    }

    /// `ρ̂̇ = −i(𝓗ρ̂ − ρ̂𝓗†) + 2⟨γ⟩ρ̂` and `⟨γ⟩`.
    fn flow(&self, rho: &CMatrix) -> (CMatrix, f64) {
        let mean = trace(&(&self.gamma * rho)).re;
        let raw = (&self.h_full * rho - rho * self.h_full.adjoint()) * Complex64::new(0.0, -1.0);
        (raw + rho.scale(2.0 * mean), mean)
    }
}

/// Normalized state together with the trace of the unnormalized one.
#[derive(Debug, Clone)]
pub struct NormalizedState {
    pub rho_hat: DensityOperator,
    pub raw_trace: f64,
    pub time: f64,
    /// Largest `|Tr ρ̂ − 1|` removed by re-pinning so far.
    pub max_trace_drift: f64,
    /// Largest negative eigenvalue removed by the PSD projection so far.
    pub max_psd_clip: f64,
}

impl NormalizedState {
    pub fn initial(rho_hat: DensityOperator) -> Self {
        Self { rho_hat, raw_trace: 1.0, time: 0.0, max_trace_drift: 0.0, max_psd_clip: 0.0 }
    }
}

/// One RK4 step of the normalized equation with `⟨γ⟩` re-evaluated in every
/// stage. `ln Tr ρ` is advanced with the same stage weights
/// (`d ln Tr ρ/dt = −2⟨γ⟩`). The result is made Hermitian and its trace
/// re-pinned to one.
pub fn evolve_normalized(state: &NormalizedState, model: &NonHermitianModel, dt: f64) -> Result<NormalizedState> {
    if state.rho_hat.dim() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), got: state.rho_hat.dim() });
    }
    let limit = STEP_GUARD / model.norm.max(f64::MIN_POSITIVE);
    if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
        return Err(Error::StabilityViolation { dt, limit });
    }
    let r0 = state.rho_hat.matrix();
    let (k1, g1) = model.flow(r0);
    let (k2, g2) = model.flow(&(r0 + k1.scale(0.5 * dt)));
    let (k3, g3) = model.flow(&(r0 + k2.scale(0.5 * dt)));
    let (k4, g4) = model.flow(&(r0 + k3.scale(dt)));
    let next = hermitize(&(r0 + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(dt / 6.0)));
    let tr = trace(&next).re;
    let ln_trace = state.raw_trace.ln() - 2.0 * dt / 6.0 * (g1 + 2.0 * g2 + 2.0 * g3 + g4);
    let raw_trace = ln_trace.exp();
    if !(raw_trace >= TRACE_FLOOR) {
        return Err(Error::TraceCollapse(raw_trace));
    }
    let (rho_hat, clip) = project_psd(&next.scale(1.0 / tr))?;
    Ok(NormalizedState {
        rho_hat,
        raw_trace,
        time: state.time + dt,
        max_trace_drift: state.max_trace_drift.max((tr - 1.0).abs()),
        max_psd_clip: state.max_psd_clip.max(clip),
    })
}

/// Clips eigenvalues in `[−PSD_STEP_TOL, 0)` and restores unit trace;
/// returns the state and the magnitude of the most negative eigenvalue.
fn project_psd(m: &CMatrix) -> Result<(DensityOperator, f64)> {
    let eig = eigh(m);
    let min = eig.values.first().copied().unwrap_or(0.0);
    if min >= 0.0 {
        return Ok((DensityOperator::new(m.clone())?, 0.0));
    }
    if min < -PSD_STEP_TOL {
        return Err(Error::NotPsd(min));
    }
    let total: f64 = eig.values.iter().map(|v| v.max(0.0)).sum();
    let projected = hermitize(&eig.map(|v| Complex64::new(v.max(0.0) / total, 0.0)));
    Ok((DensityOperator::new(projected)?, -min))
}

/// `⟨⟨γ⟩⟩ = √(Tr[γ²ρ̂] − Tr[γρ̂]²)`.
pub fn gamma_std(state: &NormalizedState, model: &NonHermitianModel) -> f64 {
    operator_std(&model.gamma, state.rho_hat.matrix())
}

/// `Λ_NH = 4⟨⟨γ⟩⟩²`.
pub fn lambda_nh(state: &NormalizedState, model: &NonHermitianModel) -> f64 {
    let s = gamma_std(state, model);
    4.0 * s * s
}

/// Spectrum of `ρ̂` and eigenvalue rates `ṗᵢ = −⟨pᵢ|{δγ, ρ̂}|pᵢ⟩`.
pub fn nh_eigen_rates(state: &NormalizedState, model: &NonHermitianModel) -> SpectralTrack {
    let rho = state.rho_hat.matrix();
    let mean = trace(&(&model.gamma * rho)).re;
    let delta = &model.gamma - identity(model.dim()).scale(mean);
    spectral_rates(rho, &-anticommutator(&delta, rho))
}

#[derive(Debug, Clone)]
pub struct NhRun {
    pub series: BoundSeries,
    pub samples: Vec<SpectralSample>,
    /// `Tr ρ` at every sample.
    pub raw_traces: Vec<f64>,
    pub final_state: NormalizedState,
    pub report: VerificationReport,
}

/// Evolves `ρ̂` over `[0, tau]` and records the Fisher information of its
/// spectrum against `Λ_NH`; checks the pointwise bound, the dissipation speed
/// limit against the residual distance, the Fisher length and the purity limit.
pub fn run_nh_experiment(
    model: &NonHermitianModel,
    initial: &DensityOperator,
    cfg: &SpectralRunConfig,
    scenario: &str,
) -> Result<NhRun> {
    cfg.tolerances.validate()?;
    let (n, h) = uniform_steps(cfg.tau, cfg.dt)?;
    let mut state = NormalizedState::initial(initial.clone());
    let mut rec = SpectralRecorder::new();
    let mut raw_traces = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if k > 0 {
            state = evolve_normalized(&state, model, h)?;
            state.time = k as f64 * h;
        }
        let track = nh_eigen_rates(&state, model);
        rec.push(state.time, &track, gamma_std(&state, model), crate::quantum::purity(&state.rho_hat))?;
        raw_traces.push(state.raw_trace);
    }
    let mut report = VerificationReport::new(scenario);
    rec.finish(
        &mut report,
        ("fisher_le_dissipation_bound", "dissipation_speed_limit"),
        initial,
        &state.rho_hat,
        cfg.tau,
        &cfg.tolerances,
    )?;
    report.meta("tau", cfg.tau);
    report.meta("dt", h);
    report.meta("steps", n as f64);
    report.meta("raw_trace", state.raw_trace);
    report.meta("max_trace_drift", state.max_trace_drift);
    report.meta("max_psd_clip", state.max_psd_clip);
    Ok(NhRun { series: rec.series, samples: rec.samples, raw_traces, final_state: state, report })
}

/// Default tolerances for callers that do not override them.
pub fn default_config(tau: f64, dt: f64) -> SpectralRunConfig {
    SpectralRunConfig { tau, dt, tolerances: Tolerances::default() }
}
