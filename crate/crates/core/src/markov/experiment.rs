use serde::Serialize;

use crate::error::Result;
use crate::info_geometry::{
    bhattacharyya_arccos, bhattacharyya_slices, check_speed_limit, fisher_terms, pointwise_check, tau_min, BoundSeries,
    CheckEntry, DiscreteDistribution, Orientation, Tolerances, VerificationReport,
};
use crate::numeric::{start_index, uniform_steps, PROB_FLOOR};

use super::dynamics::{master_step, rates_above, rk4_probs, to_distribution, MarkovState, ACCURACY_GUARD};
use super::model::MarkovModel;

/// Settings of a Markov run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovRunConfig {
    pub tau: f64,
    pub dt: f64,
    /// First time at which the bounds are recorded; defaults to `10·dt`.
    pub t0: Option<f64>,
    pub tolerances: Tolerances,
}

/// One recorded time of a Markov run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarkovSample {
    pub t: f64,
    pub entropy: f64,
    pub pseudo_entropy: f64,
    pub activity: f64,
    pub fisher: f64,
    pub lambda_entropy: f64,
    pub lambda_activity: f64,
    pub fisher_length: f64,
    pub entropy_bound_length: f64,
    pub activity_bound_length: f64,
}

#[derive(Debug, Clone)]
pub struct MarkovRun {
    pub entropy_series: BoundSeries,
    pub activity_series: BoundSeries,
    pub samples: Vec<MarkovSample>,
    pub final_state: MarkovState,
    pub report: VerificationReport,
}

/// Values carried out of the start-up interval `[0, t0]`.
struct Startup {
    state: MarkovState,
    fisher_length: f64,
    entropy_bound: f64,
    activity_bound: f64,
}

/// Exponent of the start-up grid `t = t0·x^GRADING`, uniform in `x ∈ [0, 1]`.
const GRADING: i32 = 6;

/// Integrates `[0, t0]` on a grid uniform in `x` with `t = t0·x⁶`.
///
/// Near `t = 0` a state that starts empty makes `ℐₜ ~ 1/t` and the entropy
/// rate `~ ln(1/t)`, so `½√Λ dt ~ √(ln(1/t)/t) dt`. In `x` every integrand
/// carries a factor `x^{GRADING/2 − 1}` and vanishes at `x = 0`, which keeps
/// the trapezoid rule second order; the Fisher length is summed as
/// Bhattacharyya chords, which do not depend on the parametrisation.
fn startup(model: &MarkovModel, initial: &DiscreteDistribution, t0: f64, h: f64) -> Result<Startup> {
    let nodes = ((4.0 * t0 / h).ceil() as usize).max(400);
    let dx = 1.0 / nodes as f64;
    let q = GRADING as f64;
    let time = |x: f64| t0 * x.powi(GRADING);
    let jacobian = |x: f64| q * t0 * x.powi(GRADING - 1);
    let mut p = initial.probs().to_vec();
    let (mut ep, mut ps, mut act) = (0.0, 0.0, 0.0);
    let (mut f_ep, mut f_ps, mut f_act) = (0.0, 0.0, 0.0);
    let mut fisher_length = 0.0;
    // ½√Λ dt in x: (q/2)·√(Σ/2)/x dx and (q/2)·√𝒜/x dx, both zero at x = 0.
    let (mut g_ep, mut g_act) = (0.0, 0.0);
    let (mut entropy_bound, mut activity_bound) = (0.0, 0.0);
    for j in 0..nodes {
        let xb = (j + 1) as f64 * dx;
        let (ta, tb) = (time(j as f64 * dx), time(xb));
        let sub = ((tb - ta) / (0.5 * h)).ceil().max(1.0) as usize;
        let hs = (tb - ta) / sub as f64;
        let mut next = p.clone();
        for _ in 0..sub {
            next = rk4_probs(model, &next, hs);
        }
        next.iter_mut().for_each(|x| *x = x.max(0.0));
        // No floor here: every positive flow enters the log, so the region
        // where an empty state is still below the floor is not dropped.
        let r = rates_above(model, &next, 0.0);
        let jac = jacobian(xb);
        let (n_ep, n_ps, n_act) = (jac * r.entropy, jac * r.pseudo, jac * r.activity);
        ep += 0.5 * dx * (f_ep + n_ep);
        ps += 0.5 * dx * (f_ps + n_ps);
        act += 0.5 * dx * (f_act + n_act);
        (f_ep, f_ps, f_act) = (n_ep, n_ps, n_act);
        fisher_length += bhattacharyya_slices(&p, &next);
        let ge = 0.5 * q * (ep / 2.0).sqrt() / xb;
        let ga = 0.5 * q * act.sqrt() / xb;
        entropy_bound += 0.5 * dx * (g_ep + ge);
        activity_bound += 0.5 * dx * (g_act + ga);
        (g_ep, g_act) = (ge, ga);
        p = next;
    }
    Ok(Startup {
        state: MarkovState { probs: to_distribution(p)?, time: t0, entropy: ep, pseudo_entropy: ps, activity: act },
        fisher_length,
        entropy_bound,
        activity_bound,
    })
}

/// Evolves the master equation over `[0, tau]`, records the Fisher
/// information against both the entropy-production and activity bounds, and
/// checks the pointwise and integrated inequalities.
pub fn run_markov_experiment(
    model: &MarkovModel,
    initial: &DiscreteDistribution,
    cfg: &MarkovRunConfig,
    scenario: &str,
) -> Result<MarkovRun> {
    if initial.dim() != model.n() {
        return Err(crate::Error::DimensionMismatch { expected: model.n(), got: initial.dim() });
    }
    cfg.tolerances.validate()?;
    let (n, h) = uniform_steps(cfg.tau, cfg.dt)?;
    let limit = ACCURACY_GUARD / model.max_escape_rate().max(f64::MIN_POSITIVE);
    if h > limit {
        return Err(crate::Error::StabilityViolation { dt: h, limit });
    }
    let k0 = start_index(cfg.t0.unwrap_or(10.0 * cfg.dt), h, n)?;
    let t0 = k0 as f64 * h;

    let start = startup(model, initial, t0, h)?;
    let mut state = start.state;

    let sample_at = |s: &MarkovState| {
        let p = s.probs.probs();
        let m = fisher_terms(p, &model.generator(p), PROB_FLOOR);
        let t2 = s.time * s.time;
        (m, s.entropy / (2.0 * t2), s.activity / t2)
    };

    let (m0, le0, la0) = sample_at(&state);
    let mut entropy_series = BoundSeries::starting_at(t0, m0.value, le0, start.fisher_length, start.entropy_bound)?;
    let mut activity_series = BoundSeries::starting_at(t0, m0.value, la0, start.fisher_length, start.activity_bound)?;
    let mut masked = vec![m0.masked > 0];
    let mut samples = Vec::with_capacity(n - k0 + 1);
    let record = |s: &MarkovState, fi: f64, le: f64, la: f64, es: &BoundSeries, as_: &BoundSeries| MarkovSample {
        t: s.time,
        entropy: s.entropy,
        pseudo_entropy: s.pseudo_entropy,
        activity: s.activity,
        fisher: fi,
        lambda_entropy: le,
        lambda_activity: la,
        fisher_length: es.fisher_length(),
        entropy_bound_length: es.bound_length(),
        activity_bound_length: as_.bound_length(),
    };
    samples.push(record(&state, m0.value, le0, la0, &entropy_series, &activity_series));

    for k in k0 + 1..=n {
        let prev = state.probs.clone();
        let mut next = master_step(&state, model, h)?;
        next.time = k as f64 * h;
        let (m, le, la) = sample_at(&next);
        let irregular = m.masked > 0 || *masked.last().unwrap_or(&false);
        if irregular {
            let chord = bhattacharyya_arccos(&prev, &next.probs)?;
            entropy_series.accumulate_with_fisher_increment(next.time, m.value, le, chord)?;
            activity_series.accumulate_with_fisher_increment(next.time, m.value, la, chord)?;
        } else {
            entropy_series.accumulate(next.time, m.value, le)?;
            activity_series.accumulate(next.time, m.value, la)?;
        }
        masked.push(m.masked > 0);
        samples.push(record(&next, m.value, le, la, &entropy_series, &activity_series));
        state = next;
    }

    let tol = &cfg.tolerances;
    let distance = bhattacharyya_arccos(initial, &state.probs)?;
    let mut report = VerificationReport::new(scenario);
    let include = |k: usize| !masked[k];
    report.push(pointwise_check(
        "fisher_le_entropy_bound",
        entropy_series.fisher(),
        entropy_series.bound(),
        include,
        tol,
    ));
    report.push(pointwise_check(
        "fisher_le_activity_bound",
        activity_series.fisher(),
        activity_series.bound(),
        include,
        tol,
    ));
    report.push(check_speed_limit("entropy_speed_limit", entropy_series.bound_length(), distance, tol.integrated));
    report.push(check_speed_limit("activity_speed_limit", activity_series.bound_length(), distance, tol.integrated));
    report.push(check_speed_limit(
        "fisher_length_ge_distance",
        entropy_series.fisher_length(),
        distance,
        tol.integrated,
    ));
    report.push(CheckEntry::new(
        "entropy_ge_pseudo_entropy",
        state.entropy,
        state.pseudo_entropy,
        Orientation::LhsGreater,
        tol.pointwise_abs,
    ));
    report.push(CheckEntry::new(
        "activity_ge_half_pseudo_entropy",
        state.activity,
        state.pseudo_entropy / 2.0,
        Orientation::LhsGreater,
        tol.pointwise_abs,
    ));
    let mean_sqrt = 2.0 * entropy_series.bound_length() / cfg.tau;
    if mean_sqrt > 0.0 {
        let tmin = tau_min(distance, mean_sqrt)?;
        report.push(CheckEntry::new("tau_ge_tau_min", cfg.tau, tmin, Orientation::LhsGreater, tol.integrated));
    }
    report.meta("tau", cfg.tau);
    report.meta("dt", h);
    report.meta("t0", t0);
    report.meta("steps", (n - k0) as f64);
    report.meta("distance", distance);
    report.meta("startup_entropy_bound_length", start.entropy_bound);
    report.meta("startup_activity_bound_length", start.activity_bound);
    report.meta("masked_samples", masked.iter().filter(|m| **m).count() as f64);
    report.meta("norm_drift", (state.probs.probs().iter().sum::<f64>() - 1.0).abs());

    Ok(MarkovRun { entropy_series, activity_series, samples, final_state: state, report })
}
