use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::info_geometry::bhattacharyya_slices;
use crate::linalg::{eigh, ensure_hermitian, hermitize, trace, CMatrix, HermitianEigen};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues in `[−PSD_TOL, 0)` are treated as round-off and clipped.
pub const PSD_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive-semidefinite matrix with a lazily
/// computed eigen-decomposition.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: CMatrix,
    eigen: OnceLock<HermitianEigen>,
    repaired: bool,
}

impl DensityOperator {
    /// Validates Hermiticity and unit trace to 1e-12. Eigenvalues in
    /// `[−1e-10, 0)` are clipped to zero and the trace restored; anything
    /// more negative is rejected.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        ensure_hermitian(&matrix, HERMITIAN_TOL)?;
        let tr = trace(&matrix);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotNormalized { total: tr.re, tol: TRACE_TOL });
        }
        let matrix = hermitize(&matrix);
        let eig = eigh(&matrix);
        let min = eig.values.first().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
        if min < 0.0 {
            let clipped: Vec<f64> = eig.values.iter().map(|v| v.max(0.0)).collect();
            let total: f64 = clipped.iter().sum();
            let fixed =
                HermitianEigen { values: clipped.iter().map(|v| v / total).collect(), vectors: eig.vectors.clone() };
            let matrix = hermitize(&fixed.map(|v| Complex64::new(v, 0.0)));
            let lock = OnceLock::new();
            let _ = lock.set(fixed);
            return Ok(Self { matrix, eigen: lock, repaired: true });
        }
        let lock = OnceLock::new();
        let _ = lock.set(eig);
        Ok(Self { matrix, eigen: lock, repaired: false })
    }

    /// `|ψ⟩⟨ψ|` for a vector normalized here.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let v = nalgebra::DVector::from_iterator(psi.len(), psi.iter().map(|z| z / norm));
        Self::new(&v * v.adjoint())
    }

    pub fn from_diagonal(p: &[f64]) -> Result<Self> {
        Self::new(crate::linalg::from_real_diag(p))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self::new(crate::linalg::identity(n).scale(1.0 / n as f64)).expect("I/n is a density operator")
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Whether round-off negativity was clipped at construction.
    pub fn was_repaired(&self) -> bool {
        self.repaired
    }

    pub fn eigen(&self) -> &HermitianEigen {
        self.eigen.get_or_init(|| eigh(&self.matrix))
    }

    /// Eigenvalues in ascending order, clipped at zero.
    pub fn spectrum(&self) -> Vec<f64> {
        self.eigen().values.iter().map(|v| v.max(0.0)).collect()
    }
}

/// Purity `Tr ρ²`.
pub fn purity(rho: &DensityOperator) -> f64 {
    let m = rho.matrix();
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Fidelity with the diagnostics of the positive-part repair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fidelity {
    pub value: f64,
    /// Smallest eigenvalue of `√ρ σ √ρ` before clipping.
    pub min_inner_eigenvalue: f64,
    /// Set when that eigenvalue was below `−PSD_TOL` and had to be clipped.
    pub repaired: bool,
}

/// `(Tr √(√ρ σ √ρ))²` with clipping of negative round-off in the inner root.
pub fn fidelity_detailed(rho: &DensityOperator, sigma: &DensityOperator) -> Result<Fidelity> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: sigma.dim() });
    }
    let sqrt_rho = rho.eigen().map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    let inner = hermitize(&(&sqrt_rho * sigma.matrix() * &sqrt_rho));
    let eig = eigh(&inner);
    let min = eig.values.first().copied().unwrap_or(0.0);
    let root: f64 = eig.values.iter().map(|v| v.max(0.0).sqrt()).sum();
    Ok(Fidelity { value: (root * root).clamp(0.0, 1.0), min_inner_eigenvalue: min, repaired: min < -PSD_TOL })
}

pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    Ok(fidelity_detailed(rho, sigma)?.value)
}

/// Bures angle `arccos √F`.
pub fn bures_angle(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    Ok(fidelity(rho, sigma)?.sqrt().clamp(0.0, 1.0).acos())
}

/// Distance between unitary orbits: the Bhattacharyya arccos distance of the
/// ascending-sorted spectra. Never exceeds the Bures angle.
pub fn residual_bures(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: sigma.dim() });
    }
    Ok(bhattacharyya_slices(&resolved_spectrum(rho), &resolved_spectrum(sigma)))
}

/// Multiple of `dim·ε·λ_max` below which an eigenvalue is treated as zero.
pub const RANK_CUTOFF: f64 = 10.0;

/// Spectrum with eigenvalues below the solver's resolution set to zero.
/// A zero eigenvalue comes back as noise of order `dim·ε·λ_max`, and the
/// square roots in the spectral distance would amplify that to `~1e-8`.
fn resolved_spectrum(rho: &DensityOperator) -> Vec<f64> {
    let s = rho.spectrum();
    let max = s.iter().copied().fold(0.0, f64::max);
    let cut = RANK_CUTOFF * s.len() as f64 * f64::EPSILON * max;
    s.into_iter().map(|x| if x <= cut { 0.0 } else { x }).collect()
}
