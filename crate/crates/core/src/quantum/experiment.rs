use serde::Serialize;

use crate::error::Result;
use crate::info_geometry::{
    bhattacharyya_slices, check_speed_limit, fisher_terms, pointwise_check, tau_min, BoundSeries, CheckEntry,
    Orientation, Tolerances, VerificationReport,
};
use crate::linalg::{distance_from_identity, eigh, unitary_propagator};
use crate::numeric::{uniform_steps, PROB_FLOOR};

use super::composite::{eigen_rates, interaction_std, CompositeSystem};
use super::spectral::SpectralTrack;
use super::state::{bures_angle, purity, residual_bures, DensityOperator};

/// Settings of a spectral (open-quantum or non-Hermitian) run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralRunConfig {
    pub tau: f64,
    pub dt: f64,
    pub tolerances: Tolerances,
}

/// One recorded time of a spectral run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSample {
    pub t: f64,
    /// Eigenvalues of the tracked state, ascending.
    pub probs: Vec<f64>,
    pub fisher: f64,
    pub lambda: f64,
    /// Standard deviation of the generator term that bounds the speed.
    pub std: f64,
    pub purity: f64,
    pub fisher_length: f64,
    pub bound_length: f64,
}

/// Accumulates the Fisher information of a spectrum against `Λ = 4·std²`.
///
/// Where a sample has eigenvalues below the probability floor the Fisher
/// sum is incomplete, so the length increment over any interval touching it
/// is the Bhattacharyya chord between the endpoint spectra instead of the
/// trapezoid; such samples are also left out of the pointwise check.
pub(crate) struct SpectralRecorder {
    pub series: BoundSeries,
    pub samples: Vec<SpectralSample>,
    pub masked: Vec<bool>,
    pub degenerate: usize,
}

impl SpectralRecorder {
    pub fn new() -> Self {
        Self { series: BoundSeries::new(), samples: Vec::new(), masked: Vec::new(), degenerate: 0 }
    }

    pub fn push(&mut self, t: f64, track: &SpectralTrack, std: f64, purity: f64) -> Result<()> {
        let m = fisher_terms(&track.values, &track.rates, PROB_FLOOR);
        let lambda = 4.0 * std * std;
        let masked = m.masked > 0;
        match (self.samples.last(), self.masked.last()) {
            (Some(prev), Some(&prev_masked)) if masked || prev_masked => {
                let chord = bhattacharyya_slices(&prev.probs, &track.values);
                self.series.accumulate_with_fisher_increment(t, m.value, lambda, chord)?;
            }
            _ => self.series.accumulate(t, m.value, lambda)?,
        }
        if track.degenerate_clusters > 0 {
            self.degenerate += 1;
        }
        self.masked.push(masked);
        self.samples.push(SpectralSample {
            t,
            probs: track.values.clone(),
            fisher: m.value,
            lambda,
            std,
            purity,
            fisher_length: self.series.fisher_length(),
            bound_length: self.series.bound_length(),
        });
        Ok(())
    }

    /// Pointwise, integrated, Fisher-length, purity and τ_min checks.
    pub fn finish(
        &self,
        report: &mut VerificationReport,
        names: (&str, &str),
        initial: &DensityOperator,
        last: &DensityOperator,
        tau: f64,
        tol: &Tolerances,
    ) -> Result<f64> {
        let residual = residual_bures(initial, last)?;
        let masked = &self.masked;
        report.push(pointwise_check(names.0, self.series.fisher(), self.series.bound(), |k| !masked[k], tol));
        report.push(check_speed_limit(names.1, self.series.bound_length(), residual, tol.integrated));
        report.push(check_speed_limit(
            "fisher_length_ge_residual",
            self.series.fisher_length(),
            residual,
            tol.integrated,
        ));
        let (p0, p1) = (purity(initial), purity(last));
        report.push(check_purity_speed_limit(self.series.bound_length(), p0, p1, tol.integrated));
        let mean_sqrt = 2.0 * self.series.bound_length() / tau;
        if mean_sqrt > 0.0 {
            let tmin = tau_min(residual, mean_sqrt)?;
            report.push(CheckEntry::new("tau_ge_tau_min", tau, tmin, Orientation::LhsGreater, tol.integrated));
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (k, s) in self.samples.iter().enumerate() {
            if !masked[k] && s.lambda > 1e-12 {
                let r = s.fisher / s.lambda;
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        if lo.is_finite() {
            report.meta("min_fisher_bound_ratio", lo);
            report.meta("max_fisher_bound_ratio", hi);
        }
        report.meta("residual_distance", residual);
        report.meta("bures_angle", bures_angle(initial, last)?);
        report.meta("purity_initial", p0);
        report.meta("purity_final", p1);
        report.meta("masked_samples", masked.iter().filter(|m| **m).count() as f64);
        report.meta("degenerate_samples", self.degenerate as f64);
        Ok(residual)
    }
}

/// `2 sin(min(L, π/2)) ≥ |𝒫(τ) − 𝒫(0)|` for a bound length `L = ½∫√Λ dt`.
pub fn check_purity_speed_limit(bound_length: f64, purity_initial: f64, purity_final: f64, tol: f64) -> CheckEntry {
    let lhs = 2.0 * bound_length.clamp(0.0, std::f64::consts::FRAC_PI_2).sin();
    CheckEntry::new("purity_speed_limit", lhs, (purity_final - purity_initial).abs(), Orientation::LhsGreater, tol)
}

#[derive(Debug, Clone)]
pub struct QuantumRun {
    pub series: BoundSeries,
    pub samples: Vec<SpectralSample>,
    pub final_system: CompositeSystem,
    pub report: VerificationReport,
}

/// Evolves the joint state over `[0, tau]` with the exact propagator and
/// records the Fisher information of the reduced spectrum against
/// `Λ_OQ = 4⟨⟨H_SE⟩⟩²`. The step is `tau / ⌈tau/dt⌉`.
pub fn run_open_quantum_experiment(
    sys: &CompositeSystem,
    cfg: &SpectralRunConfig,
    scenario: &str,
) -> Result<QuantumRun> {
    cfg.tolerances.validate()?;
    let (n, h) = uniform_steps(cfg.tau, cfg.dt)?;
    let u = unitary_propagator(&eigh(&sys.total_hamiltonian()), h);
    let unitarity = distance_from_identity(&(u.adjoint() * &u));

    let initial = sys.reduced_state()?;
    let mut rec = SpectralRecorder::new();
    let mut current = sys.clone();
    let mut last_reduced = initial.clone();
    for k in 0..=n {
        if k > 0 {
            current = current.propagate(&u)?;
            last_reduced = current.reduced_state()?;
        }
        let track = eigen_rates(&current)?;
        rec.push(k as f64 * h, &track, interaction_std(&current), purity(&last_reduced))?;
    }

    let mut report = VerificationReport::new(scenario);
    rec.finish(
        &mut report,
        ("fisher_le_interaction_bound", "interaction_speed_limit"),
        &initial,
        &last_reduced,
        cfg.tau,
        &cfg.tolerances,
    )?;
    report.meta("tau", cfg.tau);
    report.meta("dt", h);
    report.meta("steps", n as f64);
    report.meta("unitarity_error", unitarity);
    report.meta("joint_purity_drift", (purity(current.state()) - purity(sys.state())).abs());
    Ok(QuantumRun { series: rec.series, samples: rec.samples, final_system: current, report })
}
