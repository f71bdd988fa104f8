use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info_geometry::{Boundary, Grid, GridDensity};

/// Time-independent drift, applied component-wise: the force along axis `a`
/// depends only on `x_a` (`F_a(x) = f(x_a)`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Force {
    /// `f(x) = −k x`.
    Ou {
        k: f64,
    },
    /// `f(x) = −a x³ + b x`, the force of `V = a x⁴/4 − b x²/2`.
    DoubleWell {
        a: f64,
        b: f64,
    },
    Zero,
    /// `f(x) = Σₙ cₙ xⁿ`, coefficients in ascending order.
    Polynomial(Vec<f64>),
}

impl Force {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Force::Ou { k } => -k * x,
            Force::DoubleWell { a, b } => -a * x * x * x + b * x,
            Force::Zero => 0.0,
            Force::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &cn| acc * x + cn),
        }
    }
}

/// Overdamped Langevin dynamics `ẋ = F(x) + √(2D) ξ` discretized on a grid.
///
/// The Fokker–Planck equation is solved with a conservative finite-volume
/// scheme: the flux through the face between neighbouring cells is
/// `J = F_face (p_i + p_{i+1})/2 − D (p_{i+1} − p_i)/Δx`. Reflecting walls
/// carry zero flux; periodic grids wrap the last face around.
#[derive(Debug, Clone, PartialEq)]
pub struct LangevinModel {
    force: Force,
    diffusion: f64,
    grid: Grid,
    boundary: Boundary,
    /// Drift at the `+` face of every cell, per axis.
    face_force: Vec<Vec<f64>>,
    /// Drift at cell centres, per axis.
    center_force: Vec<Vec<f64>>,
}

/// Explicit RK4 step limit `dt ≤ STABILITY_C / Σ_a (D/Δx_a² + max|F_a|/2Δx_a)`;
/// in 1D without drift this is `dt ≤ 0.25 Δx²/D`.
pub const STABILITY_C: f64 = 0.25;

impl LangevinModel {
    /// Validates `D > 0`, finiteness of the drift, and a cell Péclet number
    /// `|F| Δx / 2D < 1` on every face (the central flux is then monotone).
    pub fn new(force: Force, diffusion: f64, grid: Grid, boundary: Boundary) -> Result<Self> {
        if !(diffusion > 0.0) || !diffusion.is_finite() {
            return Err(Error::InvalidModel(format!("diffusion must be positive, got {diffusion}")));
        }
        let mut face_force = Vec::new();
        let mut center_force = Vec::new();
        for axis in grid.axes() {
            let dx = axis.spacing();
            let faces: Vec<f64> = (0..axis.n).map(|i| force.eval(axis.lo + (i + 1) as f64 * dx)).collect();
            let centers: Vec<f64> = (0..axis.n).map(|i| force.eval(axis.center(i))).collect();
            for &f in faces.iter().chain(&centers) {
                if !f.is_finite() {
                    return Err(Error::InvalidModel("force is not finite on the grid".into()));
                }
            }
            let worst = faces.iter().fold(0.0f64, |m, f| m.max(f.abs()));
            if worst * dx / (2.0 * diffusion) >= 1.0 {
                return Err(Error::InvalidModel(format!(
                    "grid too coarse for the drift: |F|Δx/2D = {} ≥ 1",
                    worst * dx / (2.0 * diffusion)
                )));
            }
            face_force.push(faces);
            center_force.push(centers);
        }
        Ok(Self { force, diffusion, grid, boundary, face_force, center_force })
    }

    pub fn force(&self) -> &Force {
        &self.force
    }

    pub fn diffusion(&self) -> f64 {
        self.diffusion
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub(crate) fn center_force(&self, axis: usize) -> &[f64] {
        &self.center_force[axis]
    }

    /// Largest step accepted by the RK4 integrator.
    pub fn max_stable_dt(&self) -> f64 {
        let rate: f64 = self
            .grid
            .axes()
            .iter()
            .zip(&self.face_force)
            .map(|(a, f)| {
                let dx = a.spacing();
                let fmax = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                self.diffusion / (dx * dx) + fmax / (2.0 * dx)
            })
            .sum();
        STABILITY_C / rate
    }

    /// Visits every interior (and, if periodic, wrap-around) face as
    /// `(axis, lower cell, upper cell, face force)`.
    pub(crate) fn for_each_face(&self, mut f: impl FnMut(usize, usize, usize, f64)) {
        let len = self.grid.len();
        for (a, axis) in self.grid.axes().iter().enumerate() {
            let stride = self.grid.stride(a);
            let n = axis.n;
            for idx in 0..len {
                let i = (idx / stride) % n;
                let nb = if i + 1 < n {
                    idx + stride
                } else if self.boundary == Boundary::Periodic {
                    idx - (n - 1) * stride
                } else {
                    continue;
                };
                f(a, idx, nb, self.face_force[a][i]);
            }
        }
    }

    /// Face flux between `lo` and `hi` cells along `axis`.
    #[inline]
    pub(crate) fn flux(&self, axis: usize, p_lo: f64, p_hi: f64, face_force: f64) -> f64 {
        let dx = self.grid.axes()[axis].spacing();
        face_force * 0.5 * (p_lo + p_hi) - self.diffusion * (p_hi - p_lo) / dx
    }

    /// Stationary density of the discrete scheme (zero flux on every face).
    ///
    /// On reflecting grids each 1D factor obeys
    /// `p_{i+1}/p_i = (D/Δx + F/2)/(D/Δx − F/2)`, the discrete analogue of
    /// the Boltzmann weight `e^{−V/D}`. Periodic grids have a zero-current
    /// stationary state only without drift.
    pub fn discrete_equilibrium(&self) -> Result<GridDensity> {
        if self.boundary == Boundary::Periodic {
            if self.force != Force::Zero {
                return Err(Error::InvalidModel(
                    "a drifting periodic model has no zero-current stationary state".into(),
                ));
            }
            let v = 1.0 / (self.grid.len() as f64 * self.grid.cell_volume());
            return GridDensity::new(self.grid.clone(), self.boundary, vec![v; self.grid.len()]);
        }
        let factors: Vec<Vec<f64>> = self
            .grid
            .axes()
            .iter()
            .zip(&self.face_force)
            .map(|(axis, faces)| {
                let g = self.diffusion / axis.spacing();
                let mut logs = vec![0.0; axis.n];
                for i in 1..axis.n {
                    let f = faces[i - 1];
                    logs[i] = logs[i - 1] + ((g + 0.5 * f) / (g - 0.5 * f)).ln();
                }
                let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                logs.iter().map(|l| (l - top).exp()).collect()
            })
            .collect();
        let nd = self.grid.ndim();
        let mut idx = [0usize; 3];
        let values = (0..self.grid.len())
            .map(|c| {
                self.grid.unravel(c, &mut idx[..nd]);
                (0..nd).map(|a| factors[a][idx[a]]).product()
            })
            .collect();
        GridDensity::renormalized(self.grid.clone(), self.boundary, values)
    }
}
