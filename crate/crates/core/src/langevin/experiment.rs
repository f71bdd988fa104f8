use serde::Serialize;

use crate::error::Result;
use crate::info_geometry::{
    bhattacharyya_arccos_grid, check_speed_limit, grid_fisher_unchecked, pointwise_check, tau_min, wasserstein_1d,
    BoundSeries, CheckEntry, GridDensity, Orientation, Tolerances, VerificationReport,
};
use crate::numeric::{start_index, uniform_steps};

use super::fpe::{check_stability, ep_rate_values, fpe_rhs, rk4_values, FokkerPlanckState};
use super::model::LangevinModel;

/// Settings of a Fokker–Planck run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LangevinRunConfig {
    pub tau: f64,
    pub dt: f64,
    /// First time at which `Λ_LA` is recorded; defaults to `10·dt`.
    pub t0: Option<f64>,
    pub tolerances: Tolerances,
}

/// One recorded time of a Langevin run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LangevinSample {
    pub t: f64,
    pub entropy: f64,
    pub fisher: f64,
    pub lambda: f64,
    pub fisher_length: f64,
    pub bound_length: f64,
}

#[derive(Debug, Clone)]
pub struct LangevinRun {
    pub series: BoundSeries,
    pub samples: Vec<LangevinSample>,
    pub final_state: FokkerPlanckState,
    pub report: VerificationReport,
}

/// Evolves the Fokker–Planck equation over `[0, tau]`, records `ℐₜ` (with
/// `∂ₜp` from the discretized right-hand side) against `Λ_LA = Σ/2t²` from
/// `t0` on, and checks the pointwise bound, the speed limit
/// `½∫√Λ_LA dt ≥ ℒ_P(P₀, P_τ)`, the Fisher-length inequality and, on 1D
/// grids, the transport bound `Σ(τ) ≥ 𝒲²(P₀, P_τ)/(Dτ)`.
///
/// `½∫₀^{t0}√Λ_LA dt` is not integrated numerically (the integrand is
/// `O(t^{-1/2})`); the estimate `√(Σ̇(0)/2)·√t0` is added to the bound
/// length and reported as `omitted_bound_length`. The Fisher length is
/// integrated from `t = 0`.
pub fn run_langevin_experiment(
    model: &LangevinModel,
    initial: &GridDensity,
    cfg: &LangevinRunConfig,
    scenario: &str,
) -> Result<LangevinRun> {
    if initial.grid() != model.grid() || initial.boundary() != model.boundary() {
        return Err(crate::Error::GridMismatch("initial density and model grids differ".into()));
    }
    cfg.tolerances.validate()?;
    let (n, h) = uniform_steps(cfg.tau, cfg.dt)?;
    check_stability(model, h)?;
    let k0 = start_index(cfg.t0.unwrap_or(10.0 * cfg.dt), h, n)?;
    let t0 = k0 as f64 * h;
    let dv = model.grid().cell_volume();

    let mut p = initial.values().to_vec();
    let mut k1 = fpe_rhs(model, &p);
    let mut fisher = grid_fisher_unchecked(&p, &k1, dv);
    let mut rate = ep_rate_values(model, &p);
    let omitted = (rate / 2.0).sqrt() * t0.sqrt();
    let mut entropy = 0.0;
    let mut clipped = 0;
    let mut early_fisher_length = 0.0;
    let mut series: Option<BoundSeries> = None;
    let mut samples = Vec::with_capacity(n - k0 + 1);

    for k in 0..=n {
        let t = k as f64 * h;
        if k >= k0 {
            let lambda = entropy / (2.0 * t * t);
            match series.as_mut() {
                None => series = Some(BoundSeries::starting_at(t, fisher, lambda, early_fisher_length, omitted)?),
                Some(s) => s.accumulate(t, fisher, lambda)?,
            }
            let s = series.as_ref().expect("series initialised above");
            samples.push(LangevinSample {
                t,
                entropy,
                fisher,
                lambda,
                fisher_length: s.fisher_length(),
                bound_length: s.bound_length(),
            });
        }
        if k == n {
            break;
        }
        let (next, c) = rk4_values(model, &p, &k1, h)?;
        clipped += c;
        let next_k1 = fpe_rhs(model, &next);
        let next_fisher = grid_fisher_unchecked(&next, &next_k1, dv);
        let next_rate = ep_rate_values(model, &next);
        entropy += 0.5 * h * (rate + next_rate);
        if k < k0 {
            early_fisher_length += 0.25 * h * (fisher.sqrt() + next_fisher.sqrt());
        }
        (p, k1, fisher, rate) = (next, next_k1, next_fisher, next_rate);
    }
    let series = series.expect("k0 < n guarantees at least one sample");

    let final_density = GridDensity::with_tolerance(model.grid().clone(), model.boundary(), p, 1e-6)?;
    let mass_drift = (final_density.mass() - 1.0).abs();
    let tol = &cfg.tolerances;
    let distance = bhattacharyya_arccos_grid(initial, &final_density)?;
    let mut report = VerificationReport::new(scenario);
    report.push(pointwise_check("fisher_le_entropy_bound", series.fisher(), series.bound(), |_| true, tol));
    report.push(check_speed_limit("entropy_speed_limit", series.bound_length(), distance, tol.integrated));
    report.push(check_speed_limit("fisher_length_ge_distance", series.fisher_length(), distance, tol.integrated));
    if model.grid().ndim() == 1 {
        let w2 = wasserstein_1d(initial, &final_density)?;
        let rhs = w2 / (model.diffusion() * cfg.tau);
        report.push(CheckEntry::new(
            "wasserstein_entropy_bound",
            entropy,
            rhs,
            Orientation::LhsGreater,
            tol.integrated,
        ));
        report.meta("wasserstein_sq", w2);
    } else {
        report.note("transport bound skipped: only available on 1D grids");
    }
    let mean_sqrt = 2.0 * series.bound_length() / cfg.tau;
    if mean_sqrt > 0.0 {
        let tmin = tau_min(distance, mean_sqrt)?;
        report.push(CheckEntry::new("tau_ge_tau_min", cfg.tau, tmin, Orientation::LhsGreater, tol.integrated));
    }
    report.meta("tau", cfg.tau);
    report.meta("dt", h);
    report.meta("t0", t0);
    report.meta("steps", n as f64);
    report.meta("distance", distance);
    report.meta("entropy", entropy);
    report.meta("omitted_bound_length", omitted);
    report.meta("mass_drift", mass_drift);
    report.meta("clipped_cells", clipped as f64);

    let final_state = FokkerPlanckState { density: final_density, time: cfg.tau, entropy, clipped_cells: clipped };
    Ok(LangevinRun { series, samples, final_state, report })
}
