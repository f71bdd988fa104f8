use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    commutator, eigh, ensure_hermitian, from_real_diag, hermitize, identity, kron, partial_trace_env, pauli_x, pauli_z,
    trace, unitary_propagator, CMatrix,
};

use super::spectral::{spectral_rates, SpectralTrack};
use super::state::DensityOperator;

const HAMILTONIAN_TOL: f64 = 1e-12;

/// System ⊗ environment under the time-independent Hamiltonian
/// `H = H_S ⊗ I + I ⊗ H_E + H_SE` (ħ = 1, system index slow).
#[derive(Debug, Clone)]
pub struct CompositeSystem {
    dim_s: usize,
    dim_e: usize,
    h_s: CMatrix,
    h_e: CMatrix,
    h_se: CMatrix,
    state: DensityOperator,
}

impl CompositeSystem {
    pub fn new(h_s: CMatrix, h_e: CMatrix, h_se: CMatrix, state: DensityOperator) -> Result<Self> {
        ensure_hermitian(&h_s, HAMILTONIAN_TOL)?;
        ensure_hermitian(&h_e, HAMILTONIAN_TOL)?;
        ensure_hermitian(&h_se, HAMILTONIAN_TOL)?;
        let (dim_s, dim_e) = (h_s.nrows(), h_e.nrows());
        let n = dim_s * dim_e;
        if h_se.nrows() != n {
            return Err(Error::DimensionMismatch { expected: n, got: h_se.nrows() });
        }
        if state.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: state.dim() });
        }
        Ok(Self { dim_s, dim_e, h_s, h_e, h_se, state })
    }

    /// `H_SE = g σx⊗σx` on two qubits with no local terms, starting in `|00⟩`.
    /// The reduced state is `diag(cos²gt, sin²gt)` and the interaction bound
    /// is saturated at every time.
    pub fn two_qubit_xx(g: f64) -> Result<Self> {
        let zero = CMatrix::zeros(2, 2);
        let psi =
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        Self::new(zero.clone(), zero, kron(&pauli_x(), &pauli_x()).scale(g), DensityOperator::pure(&psi)?)
    }

    /// Qubit coupled to a truncated oscillator: `H_S = ω_S σz/2`,
    /// `H_E = ω_E diag(0, 1, …, dim_E − 1)`, `H_SE = g σx ⊗ (a + a†)`,
    /// starting in `|0⟩⊗|0⟩`. With `dim_E = 2` the environment is a qubit.
    pub fn qubit_env(g: f64, omega_s: f64, omega_e: f64, dim_e: usize) -> Result<Self> {
        if dim_e < 2 {
            return Err(Error::InvalidModel(format!("environment dimension must be ≥ 2, got {dim_e}")));
        }
        let levels: Vec<f64> = (0..dim_e).map(|k| omega_e * k as f64).collect();
        let mut x = CMatrix::zeros(dim_e, dim_e);
        for k in 1..dim_e {
            let amp = Complex64::new((k as f64).sqrt(), 0.0);
            x[(k - 1, k)] = amp;
            x[(k, k - 1)] = amp;
        }
        let mut psi = vec![Complex64::new(0.0, 0.0); 2 * dim_e];
        psi[0] = Complex64::new(1.0, 0.0);
        Self::new(
            pauli_z().scale(omega_s / 2.0),
            from_real_diag(&levels),
            kron(&pauli_x(), &x).scale(g),
            DensityOperator::pure(&psi)?,
        )
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    pub fn dim_e(&self) -> usize {
        self.dim_e
    }

    pub fn h_s(&self) -> &CMatrix {
        &self.h_s
    }

    pub fn h_e(&self) -> &CMatrix {
        &self.h_e
    }

    pub fn h_se(&self) -> &CMatrix {
        &self.h_se
    }

    pub fn state(&self) -> &DensityOperator {
        &self.state
    }

    pub fn total_hamiltonian(&self) -> CMatrix {
        kron(&self.h_s, &identity(self.dim_e)) + kron(&identity(self.dim_s), &self.h_e) + &self.h_se
    }

    /// Same Hamiltonian, different joint state.
    pub fn with_state(&self, state: DensityOperator) -> Result<Self> {
        Self::new(self.h_s.clone(), self.h_e.clone(), self.h_se.clone(), state)
    }

    /// Applies a precomputed propagator `U`: `ρ ↦ U ρ U†`.
    pub(crate) fn propagate(&self, u: &CMatrix) -> Result<Self> {
        let next = hermitize(&(u * self.state.matrix() * u.adjoint()));
        let mut s = self.clone();
        s.state = DensityOperator::new(next)?;
        Ok(s)
    }

    /// Reduced system state `Tr_E ρ_SE`.
    pub fn reduced_state(&self) -> Result<DensityOperator> {
        partial_trace_e(&self.state, self.dim_s, self.dim_e)
    }
}

/// `ρ_SE(t + dt) = U ρ_SE U†` with `U = exp(−iH dt)` from the eigen-decomposition of `H`.
pub fn evolve_composite(sys: &CompositeSystem, dt: f64) -> Result<CompositeSystem> {
    let u = unitary_propagator(&eigh(&sys.total_hamiltonian()), dt);
    sys.propagate(&u)
}

/// Partial trace over the environment factor.
pub fn partial_trace_e(rho_se: &DensityOperator, dim_s: usize, dim_e: usize) -> Result<DensityOperator> {
    DensityOperator::new(hermitize(&partial_trace_env(rho_se.matrix(), dim_s, dim_e)?))
}

/// `ρ̇_S = −i Tr_E [H_SE, ρ_SE]`, the part of the reduced dynamics that can
/// change the spectrum (the local term `−i[H_S, ρ_S]` cannot).
pub fn reduced_dissipative_derivative(sys: &CompositeSystem) -> Result<CMatrix> {
    let comm = commutator(&sys.h_se, sys.state.matrix());
    let traced = partial_trace_env(&comm, sys.dim_s, sys.dim_e)?;
    Ok(hermitize(&(traced * Complex64::new(0.0, -1.0))))
}

/// Spectrum of `ρ_S` and the eigenvalue rates `ṗᵢ = −i⟨pᵢ|Tr_E[δH_SE, ρ_SE]|pᵢ⟩`.
/// Subtracting `⟨H_SE⟩` from `H_SE` leaves the commutator unchanged.
pub fn eigen_rates(sys: &CompositeSystem) -> Result<SpectralTrack> {
    let rho_s = partial_trace_env(sys.state.matrix(), sys.dim_s, sys.dim_e)?;
    Ok(spectral_rates(&hermitize(&rho_s), &reduced_dissipative_derivative(sys)?))
}

/// Standard deviation of `H_SE` in the joint state, `√(⟨H_SE²⟩ − ⟨H_SE⟩²)`.
pub fn interaction_std(sys: &CompositeSystem) -> f64 {
    operator_std(&sys.h_se, sys.state.matrix())
}

/// `Λ_OQ = 4 ⟨⟨H_SE⟩⟩²`.
pub fn lambda_oq(sys: &CompositeSystem) -> f64 {
    let s = interaction_std(sys);
    4.0 * s * s
}

/// `√(Tr[X²ρ] − Tr[Xρ]²)` for Hermitian `X`, clipped at zero.
pub(crate) fn operator_std(x: &CMatrix, rho: &CMatrix) -> f64 {
    let xr = x * rho;
    let mean = trace(&xr).re;
    let second = trace(&(x * &xr)).re;
    (second - mean * mean).max(0.0).sqrt()
}
