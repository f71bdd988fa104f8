//! Continuous-time Markov jump processes: master-equation evolution,
//! entropy production, pseudo-entropy production, dynamical activity and the
//! two Fisher-information bounds built from them.

mod dynamics;
mod experiment;
mod model;
mod rates;

pub use dynamics::{lambda_markov, lambda_markov_activity, master_step, MarkovState, ACCURACY_GUARD};
pub use experiment::{run_markov_experiment, MarkovRun, MarkovRunConfig, MarkovSample};
pub use model::MarkovModel;
pub use rates::{dynamical_activity_rate, entropy_production_rate, pseudo_entropy_production_rate, EdgeSum};
