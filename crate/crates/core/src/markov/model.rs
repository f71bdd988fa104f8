use crate::error::{Error, Result};

/// Time-independent rate matrix `W` of a Markov jump process.
///
/// `W[i][j]` (i ≠ j) is the rate of jumping from state `j` to state `i`;
/// diagonal entries are `W[i][i] = −Σ_{j≠i} W[j][i]` so columns sum to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovModel {
    n: usize,
    w: Vec<f64>,
}

impl MarkovModel {
    /// Builds a model from off-diagonal rates; the diagonal of `rates` is
    /// ignored and recomputed.
    pub fn from_off_diagonal(rates: &[Vec<f64>]) -> Result<Self> {
        let n = rates.len();
        if n < 2 {
            return Err(Error::InvalidModel("need at least two states".into()));
        }
        let mut w = vec![0.0; n * n];
        for (i, row) in rates.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            for (j, &r) in row.iter().enumerate() {
                if i == j {
                    continue;
                }
                if !(r >= 0.0) || !r.is_finite() {
                    return Err(Error::InvalidModel(format!("rate W[{i}][{j}] = {r} must be finite and non-negative")));
                }
                w[i * n + j] = r;
            }
        }
        for j in 0..n {
            let out: f64 = (0..n).filter(|&i| i != j).map(|i| w[i * n + j]).sum();
            w[j * n + j] = -out;
        }
        let model = Self { n, w };
        model.check_bidirectional()?;
        Ok(model)
    }

    /// Builds a model from a full generator and validates that every column
    /// sums to zero.
    pub fn from_generator(matrix: &[Vec<f64>]) -> Result<Self> {
        let model = Self::from_off_diagonal(matrix)?;
        let n = model.n;
        for i in 0..n {
            let given = matrix[i][i];
            let expected = model.w[i * n + i];
            if (given - expected).abs() > 1e-12 * (1.0 + expected.abs()) {
                return Err(Error::InvalidModel(format!(
                    "diagonal W[{i}][{i}] = {given} but column sum requires {expected}"
                )));
            }
        }
        Ok(model)
    }

    /// Two states; `k12` is the rate from state 1 to state 2 and `k21` the
    /// reverse (states numbered from 1).
    pub fn two_state(k12: f64, k21: f64) -> Result<Self> {
        Self::from_off_diagonal(&[vec![0.0, k21], vec![k12, 0.0]])
    }

    /// Ring of `n` states with rate `forward` from `i` to `i+1` and
    /// `backward` from `i+1` to `i`.
    pub fn ring(n: usize, forward: f64, backward: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidModel(format!("ring needs n >= 3, got {n}")));
        }
        let mut rates = vec![vec![0.0; n]; n];
        for i in 0..n {
            let next = (i + 1) % n;
            rates[next][i] = forward;
            rates[i][next] = backward;
        }
        Self::from_off_diagonal(&rates)
    }

    fn check_bidirectional(&self) -> Result<()> {
        for i in 0..self.n {
            for j in 0..i {
                let (a, b) = (self.rate(i, j), self.rate(j, i));
                if (a > 0.0) != (b > 0.0) {
                    return Err(Error::InvalidModel(format!(
                        "edge between states {j} and {i} is unidirectional ({b} vs {a})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `W[i][j]`.
    pub fn rate(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    pub fn max_escape_rate(&self) -> f64 {
        (0..self.n).map(|i| -self.rate(i, i)).fold(0.0, f64::max)
    }

    /// `ṗ = W p`.
    pub fn apply(&self, p: &[f64], out: &mut [f64]) {
        for i in 0..self.n {
            let row = &self.w[i * self.n..(i + 1) * self.n];
            out[i] = row.iter().zip(p).map(|(w, x)| w * x).sum();
        }
    }

    pub fn generator(&self, p: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.apply(p, &mut out);
        out
    }

    /// The same model with every rate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self { n: self.n, w: self.w.iter().map(|x| x * factor).collect() }
    }
}
