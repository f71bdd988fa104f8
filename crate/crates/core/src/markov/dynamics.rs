use crate::error::{Error, Result};
use crate::info_geometry::DiscreteDistribution;

use super::model::MarkovModel;
use super::rates::{dynamical_activity_rate, entropy_production_rate_above, pseudo_entropy_production_rate};
use crate::numeric::PROB_FLOOR;

/// Largest `dt · max|W_ii|` accepted by [`master_step`].
pub const ACCURACY_GUARD: f64 = 0.1;

/// Distribution at time `t` together with the accumulated entropy
/// production `Σ(t)`, pseudo-entropy production `Σ_ps(t)` and dynamical
/// activity `𝒜(t) = ∫₀ᵗ Σ_{i≠j} W_ij p_j dt′`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovState {
    pub probs: DiscreteDistribution,
    pub time: f64,
    pub entropy: f64,
    pub pseudo_entropy: f64,
    pub activity: f64,
}

impl MarkovState {
    pub fn initial(probs: DiscreteDistribution) -> Self {
        Self { probs, time: 0.0, entropy: 0.0, pseudo_entropy: 0.0, activity: 0.0 }
    }
}

/// The three instantaneous rates at one distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Rates {
    pub entropy: f64,
    pub entropy_masked: usize,
    pub pseudo: f64,
    pub activity: f64,
}

pub(crate) fn rates(model: &MarkovModel, p: &[f64]) -> Rates {
    rates_above(model, p, PROB_FLOOR)
}

/// [`rates`] with an explicit probability floor for the entropy term.
pub(crate) fn rates_above(model: &MarkovModel, p: &[f64], floor: f64) -> Rates {
    let ep = entropy_production_rate_above(model, p, floor);
    Rates {
        entropy: ep.value,
        entropy_masked: ep.masked,
        pseudo: pseudo_entropy_production_rate(model, p),
        activity: dynamical_activity_rate(model, p),
    }
}

/// One classical RK4 step of `ṗ = W p` without the accuracy guard.
pub(crate) fn rk4_probs(model: &MarkovModel, p: &[f64], h: f64) -> Vec<f64> {
    let n = p.len();
    let k1 = model.generator(p);
    let y: Vec<f64> = (0..n).map(|i| p[i] + 0.5 * h * k1[i]).collect();
    let k2 = model.generator(&y);
    let y: Vec<f64> = (0..n).map(|i| p[i] + 0.5 * h * k2[i]).collect();
    let k3 = model.generator(&y);
    let y: Vec<f64> = (0..n).map(|i| p[i] + h * k3[i]).collect();
    let k4 = model.generator(&y);
    (0..n).map(|i| p[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect()
}

pub(crate) fn to_distribution(mut p: Vec<f64>) -> Result<DiscreteDistribution> {
    for &x in &p {
        if x < -1e-12 {
            return Err(Error::NegativeEntry { index: 0, value: x });
        }
    }
    p.iter_mut().for_each(|x| *x = x.max(0.0));
    DiscreteDistribution::new(p)
}

/// Advances the master equation by one RK4 step and the three accumulators
/// by the trapezoidal rule on their rates.
pub fn master_step(state: &MarkovState, model: &MarkovModel, dt: f64) -> Result<MarkovState> {
    if state.probs.dim() != model.n() {
        return Err(Error::DimensionMismatch { expected: model.n(), got: state.probs.dim() });
    }
    let limit = ACCURACY_GUARD / model.max_escape_rate().max(f64::MIN_POSITIVE);
    if !(dt > 0.0) || dt > limit {
        return Err(Error::StabilityViolation { dt, limit });
    }
    let before = rates(model, state.probs.probs());
    let next = to_distribution(rk4_probs(model, state.probs.probs(), dt))?;
    let after = rates(model, next.probs());
    Ok(MarkovState {
        probs: next,
        time: state.time + dt,
        entropy: state.entropy + 0.5 * dt * (before.entropy + after.entropy),
        pseudo_entropy: state.pseudo_entropy + 0.5 * dt * (before.pseudo + after.pseudo),
        activity: state.activity + 0.5 * dt * (before.activity + after.activity),
    })
}

/// `Λ_MA(t) = Σ(t) / 2t²`.
pub fn lambda_markov(state: &MarkovState) -> Result<f64> {
    positive_time(state.time)?;
    Ok(state.entropy / (2.0 * state.time * state.time))
}

/// `Λ′_MA(t) = 𝒜(t) / t²`.
pub fn lambda_markov_activity(state: &MarkovState) -> Result<f64> {
    positive_time(state.time)?;
    Ok(state.activity / (state.time * state.time))
}

fn positive_time(t: f64) -> Result<()> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("bound undefined at t = {t}; start recording at t0 > 0")));
    }
    Ok(())
}
