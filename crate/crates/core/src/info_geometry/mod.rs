//! Probability containers, temporal Fisher information, statistical
//! distances and the generic speed-limit bookkeeping shared by every
//! dynamics module.

mod distance;
mod distribution;
mod fisher;
mod report;
mod series;

pub(crate) use distance::bhattacharyya_slices;
pub use distance::{bhattacharyya_arccos, bhattacharyya_arccos_grid, bhattacharyya_coefficient, wasserstein_1d};
pub use distribution::{Axis, Boundary, DiscreteDistribution, Grid, GridDensity};
pub(crate) use fisher::grid_fisher_unchecked;
pub use fisher::{fisher_terms, temporal_fisher_discrete, temporal_fisher_grid, MaskedFisher};
pub use report::{
    check_speed_limit, pointwise_check, tau_min, CheckEntry, Orientation, Tolerances, VerificationReport,
};
pub use series::BoundSeries;

/// Appends `(t, fisher, bound)` to `series` and returns the updated series.
pub fn accumulate_lengths(
    mut series: BoundSeries,
    t_new: f64,
    fisher_new: f64,
    bound_new: f64,
) -> crate::Result<BoundSeries> {
    series.accumulate(t_new, fisher_new, bound_new)?;
    Ok(series)
}
