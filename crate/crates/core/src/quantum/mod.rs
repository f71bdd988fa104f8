//! Open quantum dynamics of a system coupled to an environment under joint
//! unitary evolution: reduced-state spectra and their rates, the interaction
//! bound `Λ_OQ = 4⟨⟨H_SE⟩⟩²`, fidelity, Bures angle, the unitarily residual
//! distance and the purity speed limit.

mod composite;
mod experiment;
mod spectral;
mod state;

pub(crate) use composite::operator_std;
pub use composite::{
    eigen_rates, evolve_composite, interaction_std, lambda_oq, partial_trace_e, reduced_dissipative_derivative,
    CompositeSystem,
};
pub(crate) use experiment::SpectralRecorder;
pub use experiment::{
    check_purity_speed_limit, run_open_quantum_experiment, QuantumRun, SpectralRunConfig, SpectralSample,
};
pub use spectral::{spectral_rates, SpectralTrack, DEGENERACY_GAP};
pub use state::{
    bures_angle, fidelity, fidelity_detailed, purity, residual_bures, DensityOperator, Fidelity, PSD_TOL, RANK_CUTOFF,
};
