//! Temporal Fisher information and speed limits for classical and quantum
//! dynamics.
//!
//! Four dynamics are simulated (overdamped Langevin on a grid, Markov jump
//! processes, system+environment unitary evolution, normalized non-Hermitian
//! evolution). For each, the temporal Fisher information `ℐₜ` is computed
//! from the generator and compared against a physical upper bound `Λ(t)`;
//! the integrated lengths `½∫√ℐₜ dt ≤ ½∫√Λ dt` are checked against the
//! Bhattacharyya arccos distance (classical) or its unitarily residual
//! quantum counterpart.

// `!(x > 0.0)` guards deliberately reject NaN as well; index loops mirror
// the matrix notation of the generators.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod info_geometry;
pub mod langevin;
pub mod linalg;
pub mod markov;
pub mod non_hermitian;
pub mod numeric;
pub mod quantum;

pub use error::{Error, Result};
