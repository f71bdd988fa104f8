use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::info_geometry::{Boundary, GridDensity};
use crate::numeric::{uniform_steps, KahanSum};

use super::fpe::{ep_rate_values, fpe_rhs, rk4_values, velocity_values};
use super::model::LangevinModel;

/// Smallest accepted trajectory count.
pub const MIN_TRAJECTORIES: usize = 1000;

/// Monte Carlo estimate of the path-probability Fisher information at `θ = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathFisherEstimate {
    /// Sample variance of the score `∂_θ ln ℙ|_{θ=0}`.
    pub estimate: f64,
    pub std_error: f64,
    pub n_trajectories: usize,
    /// Euler–Maruyama step.
    pub dt: f64,
    /// Sample mean of the score; zero in expectation.
    pub mean_score: f64,
    /// `Σ(t)` of the Fokker–Planck solution evolved alongside.
    pub fpe_entropy: f64,
    /// Fokker–Planck RK4 steps per trajectory step.
    pub fpe_substeps: usize,
}

/// Estimates the Fisher information of the path probability under the
/// time-rescaling perturbation at `θ = 0`, which equals `Σ(t)/2`.
///
/// Trajectories are Euler–Maruyama samples of `ẋ = F(x) + √(2D) ξ`, started
/// from `initial`. Each one accumulates the score
/// `Σ_k ν(x_k, t_k)·(Δx_k − F(x_k) dt) / 2D`, where the local mean velocity
/// `ν` is linearly interpolated from the Fokker–Planck density evolved on the
/// same grid. The estimate is the variance of the score, with standard error
/// `√((m₄ − s⁴)/n)`.
///
/// Trajectory `j` draws from its own ChaCha8 stream `(seed, j)` and the
/// reductions run in index order, so the result does not depend on the
/// thread count.
pub fn path_fisher_mc(
    model: &LangevinModel,
    initial: &GridDensity,
    t: f64,
    dt: f64,
    n_traj: usize,
    seed: u64,
) -> Result<PathFisherEstimate> {
    if n_traj < MIN_TRAJECTORIES {
        return Err(Error::InvalidArgument(format!("need at least {MIN_TRAJECTORIES} trajectories, got {n_traj}")));
    }
    if initial.grid() != model.grid() || initial.boundary() != model.boundary() {
        return Err(Error::GridMismatch("initial density and model grids differ".into()));
    }
    let (steps, h) = uniform_steps(t, dt)?;
    let substeps = (h / model.max_stable_dt()).ceil().max(1.0) as usize;
    let hf = h / substeps as f64;

    // ν snapshots at the left end of every trajectory step, and Σ(t).
    let mut p = initial.values().to_vec();
    let mut rate = ep_rate_values(model, &p);
    let mut entropy = 0.0;
    let mut snapshots = Vec::with_capacity(steps);
    for _ in 0..steps {
        snapshots.push(velocity_values(model, &p).components);
        for _ in 0..substeps {
            let k1 = fpe_rhs(model, &p);
            p = rk4_values(model, &p, &k1, hf)?.0;
            let next = ep_rate_values(model, &p);
            entropy += 0.5 * hf * (rate + next);
            rate = next;
        }
    }

    let sampler = CellSampler::new(initial);
    let d = model.diffusion();
    let noise = (2.0 * d * h).sqrt();
    let nd = model.grid().ndim();
    let scores: Vec<f64> = (0..n_traj)
        .into_par_iter()
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(j as u64);
            let mut x = [0.0; 3];
            sampler.sample(&mut rng, &mut x[..nd]);
            let mut score = 0.0;
            for snap in &snapshots {
                for a in 0..nd {
                    let nu = interpolate(model, snap, &x[..nd], a);
                    let xi: f64 = rng.sample(StandardNormal);
                    let f = model.force().eval(x[a]);
                    score += nu * noise * xi / (2.0 * d);
                    x[a] += f * h + noise * xi;
                }
                confine(model, &mut x[..nd]);
            }
            score
        })
        .collect();

    let n = n_traj as f64;
    let mean = kahan(scores.iter().copied()) / n;
    let m2 = kahan(scores.iter().map(|s| (s - mean).powi(2))) / n;
    let m4 = kahan(scores.iter().map(|s| (s - mean).powi(4))) / n;
    let variance = m2 * n / (n - 1.0);
    let std_error = ((m4 - m2 * m2).max(0.0) / n).sqrt();
    Ok(PathFisherEstimate {
        estimate: variance,
        std_error,
        n_trajectories: n_traj,
        dt: h,
        mean_score: mean,
        fpe_entropy: entropy,
        fpe_substeps: substeps,
    })
}

fn kahan(it: impl Iterator<Item = f64>) -> f64 {
    let mut k = KahanSum::new();
    it.for_each(|v| k.add(v));
    k.value()
}

/// Draws positions from a grid density: a cell by inverse CDF, then a uniform
/// point inside it.
struct CellSampler<'a> {
    density: &'a GridDensity,
    cdf: Vec<f64>,
}

impl<'a> CellSampler<'a> {
    fn new(density: &'a GridDensity) -> Self {
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = density
            .values()
            .iter()
            .map(|v| {
                acc += v;
                acc
            })
            .collect();
        cdf.iter_mut().for_each(|c| *c /= acc);
        Self { density, cdf }
    }

    fn sample(&self, rng: &mut impl Rng, out: &mut [f64]) {
        let u: f64 = rng.gen();
        let cell = self.cdf.partition_point(|&c| c < u).min(self.cdf.len() - 1);
        let grid = self.density.grid();
        let mut idx = [0usize; 3];
        grid.unravel(cell, &mut idx[..grid.ndim()]);
        for (a, axis) in grid.axes().iter().enumerate() {
            let r: f64 = rng.gen();
            out[a] = axis.lo + (idx[a] as f64 + r) * axis.spacing();
        }
    }
}

/// Multilinear interpolation of the cell-centred component `a` of `ν`.
fn interpolate(model: &LangevinModel, field: &[Vec<f64>], x: &[f64], a: usize) -> f64 {
    let grid = model.grid();
    let periodic = model.boundary() == Boundary::Periodic;
    let nd = grid.ndim();
    let mut base = [0usize; 3];
    let mut next = [0usize; 3];
    let mut w = [0.0; 3];
    for (d, axis) in grid.axes().iter().enumerate() {
        let n = axis.n;
        let u = (x[d] - axis.lo) / axis.spacing() - 0.5;
        if periodic {
            let u = u.rem_euclid(n as f64);
            let i = (u.floor() as usize).min(n - 1);
            base[d] = i;
            next[d] = (i + 1) % n;
            w[d] = u - i as f64;
        } else {
            let u = u.clamp(0.0, (n - 1) as f64);
            let i = (u.floor() as usize).min(n - 2);
            base[d] = i;
            next[d] = i + 1;
            w[d] = u - i as f64;
        }
    }
    let comp = &field[a];
    let mut value = 0.0;
    for corner in 0..(1usize << nd) {
        let mut flat = 0;
        let mut weight = 1.0;
        for d in 0..nd {
            let hi = corner >> d & 1 == 1;
            flat += if hi { next[d] } else { base[d] } * grid.stride(d);
            weight *= if hi { w[d] } else { 1.0 - w[d] };
        }
        value += weight * comp[flat];
    }
    value
}

/// Reflects at walls or wraps around, according to the boundary condition.
fn confine(model: &LangevinModel, x: &mut [f64]) {
    for (d, axis) in model.grid().axes().iter().enumerate() {
        let (lo, hi) = (axis.lo, axis.hi);
        let width = hi - lo;
        match model.boundary() {
            Boundary::Periodic => x[d] = lo + (x[d] - lo).rem_euclid(width),
            Boundary::Reflecting => {
                let y = (x[d] - lo).rem_euclid(2.0 * width);
                x[d] = lo + if y > width { 2.0 * width - y } else { y };
            }
        }
    }
}
