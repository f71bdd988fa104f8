use serde::Serialize;

use crate::linalg::{eigh, CMatrix};

/// Eigenvalues closer than this are handled as one degenerate cluster.
pub const DEGENERACY_GAP: f64 = 1e-8;

/// Instantaneous spectrum of a density operator and the rates of change of
/// its eigenvalues.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralTrack {
    /// Eigenvalues, ascending, clipped at zero.
    pub values: Vec<f64>,
    #[serde(skip)]
    pub vectors: CMatrix,
    /// `dpᵢ/dt`, aligned with `values`.
    pub rates: Vec<f64>,
    /// Number of eigenvalue clusters with more than one member.
    pub degenerate_clusters: usize,
}

/// Eigenvalue rates of `ρ(t)` given `ρ̇(t)`.
///
/// A simple eigenvalue moves at `⟨pᵢ|ρ̇|pᵢ⟩`. Inside a cluster of (nearly)
/// coincident eigenvalues the individual eigenvectors are ill-defined, but the
/// one-sided derivatives of the eigenvalue branches are the eigenvalues of
/// `ρ̇` compressed onto the cluster's eigenspace; those are used instead, so
/// that a crossing does not have to be excluded from the Fisher sum.
pub fn spectral_rates(rho: &CMatrix, rho_dot: &CMatrix) -> SpectralTrack {
    let eig = eigh(rho);
    let n = eig.values.len();
    let mut rates = vec![0.0; n];
    let mut clusters = 0;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eig.values[end] - eig.values[end - 1] < DEGENERACY_GAP {
            end += 1;
        }
        let block = eig.vectors.columns(start, end - start);
        let compressed = block.adjoint() * rho_dot * block;
        if end - start == 1 {
            rates[start] = compressed[(0, 0)].re;
        } else {
            clusters += 1;
            let local = eigh(&compressed.into_owned());
            rates[start..end].copy_from_slice(&local.values);
        }
        start = end;
    }
    SpectralTrack {
        values: eig.values.iter().map(|v| v.max(0.0)).collect(),
        vectors: eig.vectors,
        rates,
        degenerate_clusters: clusters,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, from_real_diag, pauli_x};

    #[test]
    fn simple_and_degenerate_rates() {
        let rho = from_real_diag(&[0.2, 0.8]);
        let dot = from_real_diag(&[0.1, -0.1]);
        let t = spectral_rates(&rho, &dot);
        assert_eq!(t.rates, vec![0.1, -0.1]);
        assert_eq!(t.degenerate_clusters, 0);

        // at ρ = I/2 moving along σx the branches split at rates ±|a|
        let rho = from_real_diag(&[0.5, 0.5]);
        let dot = pauli_x().scale(0.3);
        let t = spectral_rates(&rho, &dot);
        assert_eq!(t.degenerate_clusters, 1);
        assert!((t.rates[0] + 0.3).abs() < 1e-14 && (t.rates[1] - 0.3).abs() < 1e-14);
        let _ = c(0.0, 0.0);
    }
}
