//! Dense complex matrix helpers on top of `nalgebra`.

use nalgebra::DMatrix;
pub use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn from_real_diag(d: &[f64]) -> CMatrix {
    let mut m = CMatrix::zeros(d.len(), d.len());
    for (i, &x) in d.iter().enumerate() {
        m[(i, i)] = c(x, 0.0);
    }
    m
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn pauli_z() -> CMatrix {
    from_real_diag(&[1.0, -1.0])
}

/// Kronecker product `a ⊗ b` (first factor is the slow index).
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// Largest entrywise deviation `|mᵢⱼ − conj(mⱼᵢ)|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn ensure_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    Ok(m.nrows())
}

pub fn ensure_hermitian(m: &CMatrix, tol: f64) -> Result<()> {
    ensure_square(m)?;
    let dev = hermitian_deviation(m);
    if dev > tol {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

/// `(m + m†)/2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending and
/// eigenvectors as the matching columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

pub fn eigh(m: &CMatrix) -> HermitianEigen {
    let n = m.nrows();
    let eig = hermitize(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    HermitianEigen { values, vectors }
}

impl HermitianEigen {
    /// `V f(Λ) V†` for a real function of the eigenvalues.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let w = f(self.values[j]);
            for i in 0..n {
                scaled[(i, j)] *= w;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// `exp(−i H t)` via the eigen-decomposition of Hermitian `H`.
pub fn unitary_propagator(eig: &HermitianEigen, t: f64) -> CMatrix {
    eig.map(|l| Complex64::from_polar(1.0, -l * t))
}

/// Square root of a Hermitian PSD matrix. Eigenvalues below zero are
/// clipped; the most negative eigenvalue is returned for diagnostics.
pub fn psd_sqrt(m: &CMatrix) -> (CMatrix, f64) {
    let eig = eigh(m);
    let min = eig.values.first().copied().unwrap_or(0.0);
    (eig.map(|l| c(l.max(0.0).sqrt(), 0.0)), min)
}

/// Operator 2-norm (largest singular value).
pub fn spectral_norm(m: &CMatrix) -> f64 {
    let gram = m.adjoint() * m;
    eigh(&gram).values.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// `Tr_E` of an operator on `S ⊗ E` (system index slow).
pub fn partial_trace_env(m: &CMatrix, dim_s: usize, dim_e: usize) -> Result<CMatrix> {
    check_factor(m, dim_s, dim_e)?;
    let mut out = CMatrix::zeros(dim_s, dim_s);
    for a in 0..dim_s {
        for b in 0..dim_s {
            let mut acc = Complex64::new(0.0, 0.0);
            for e in 0..dim_e {
                acc += m[(a * dim_e + e, b * dim_e + e)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// `Tr_S` of an operator on `S ⊗ E`.
pub fn partial_trace_sys(m: &CMatrix, dim_s: usize, dim_e: usize) -> Result<CMatrix> {
    check_factor(m, dim_s, dim_e)?;
    let mut out = CMatrix::zeros(dim_e, dim_e);
    for e in 0..dim_e {
        for f in 0..dim_e {
            let mut acc = Complex64::new(0.0, 0.0);
            for s in 0..dim_s {
                acc += m[(s * dim_e + e, s * dim_e + f)];
            }
            out[(e, f)] = acc;
        }
    }
    Ok(out)
}

fn check_factor(m: &CMatrix, dim_s: usize, dim_e: usize) -> Result<()> {
    let n = ensure_square(m)?;
    if dim_s == 0 || dim_e == 0 || n != dim_s * dim_e {
        return Err(Error::DimensionMismatch { expected: dim_s * dim_e, got: n });
    }
    Ok(())
}

/// `‖m − I‖` in the max-entry norm.
pub fn distance_from_identity(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
            worst = worst.max((m[(i, j)] - target).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_sorts_and_reconstructs() {
        let m = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(-1.0, 0.0)]);
        let e = eigh(&m);
        assert!(e.values[0] < e.values[1]);
        let back = e.map(|l| c(l, 0.0));
        assert!((back - &m).norm() < 1e-13);
    }

    #[test]
    fn propagator_is_unitary() {
        let h = kron(&pauli_x(), &pauli_x()) + kron(&pauli_z(), &identity(2)).scale(0.3);
        let u = unitary_propagator(&eigh(&h), 0.7);
        assert!(distance_from_identity(&(u.adjoint() * &u)) < 1e-14);
    }

    #[test]
    fn partial_traces_of_product() {
        let a = from_real_diag(&[0.3, 0.7]);
        let b = from_real_diag(&[0.1, 0.2, 0.7]);
        let ab = kron(&a, &b);
        assert!((partial_trace_env(&ab, 2, 3).unwrap() - &a).norm() < 1e-15);
        assert!((partial_trace_sys(&ab, 2, 3).unwrap() - &b).norm() < 1e-15);
        assert!(partial_trace_env(&ab, 3, 3).is_err());
    }

    #[test]
    fn sqrt_squares_back() {
        let m = from_real_diag(&[0.25, 0.0, 0.04]);
        let (s, min) = psd_sqrt(&m);
        assert_eq!(min, 0.0);
        assert!((&s * &s - &m).norm() < 1e-15);
    }

    #[test]
    fn spectral_norm_of_pauli() {
        assert!((spectral_norm(&pauli_y()) - 1.0).abs() < 1e-14);
    }
}
