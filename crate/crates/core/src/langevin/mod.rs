//! Overdamped Langevin dynamics through the Fokker–Planck equation on a
//! grid: local mean velocity, entropy production, the `Λ_LA = Σ/2t²` bound
//! and its speed limit, the 1D transport comparison, and a Monte Carlo
//! estimator of the path-probability Fisher information.

mod experiment;
mod fpe;
mod model;
mod path_fisher;

pub use experiment::{run_langevin_experiment, LangevinRun, LangevinRunConfig, LangevinSample};
pub use fpe::{
    entropy_production_rate, fpe_rhs, fpe_step, lambda_langevin, local_mean_velocity, FokkerPlanckState, VelocityField,
};
pub use model::{Force, LangevinModel, STABILITY_C};
pub use path_fisher::{path_fisher_mc, PathFisherEstimate, MIN_TRAJECTORIES};
