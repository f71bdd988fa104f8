//! Small numeric helpers shared across modules.

/// Probability floor below which a component is treated as extinct.
pub const PROB_FLOOR: f64 = 1e-12;

/// Neumaier-compensated accumulator. Summation order still matters for
/// bit-exact results, so callers reduce in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn kahan_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = KahanSum::new();
    for x in iter {
        acc.add(x);
    }
    acc.value()
}

/// Angle between two non-negative unit vectors `a` and `b`.
///
/// Equals `arccos(a·b)` but stays accurate when the vectors nearly coincide,
/// where the arccos form loses half the significant digits.
pub fn unit_vector_angle(a: &[f64], b: &[f64]) -> f64 {
    let mut diff = KahanSum::new();
    let mut sum = KahanSum::new();
    for (x, y) in a.iter().zip(b) {
        diff.add((x - y) * (x - y));
        sum.add((x + y) * (x + y));
    }
    2.0 * diff.value().max(0.0).sqrt().atan2(sum.value().max(0.0).sqrt())
}

/// Splits `[0, tau]` into `n = ⌈tau/dt⌉` equal steps and returns `(n, tau/n)`.
pub fn uniform_steps(tau: f64, dt: f64) -> crate::Result<(usize, f64)> {
    if !(tau > 0.0) || !(dt > 0.0) || !tau.is_finite() || !dt.is_finite() {
        return Err(crate::Error::InvalidArgument(format!("need tau > 0 and dt > 0, got tau={tau}, dt={dt}")));
    }
    let n = (tau / dt - 1e-9).ceil().max(1.0) as usize;
    Ok((n, tau / n as f64))
}

/// Index of the first recorded bound sample: `t0` rounded to the step grid,
/// at least one step and strictly before the final step.
pub fn start_index(t0: f64, h: f64, n: usize) -> crate::Result<usize> {
    let k = (t0 / h).round().max(1.0) as usize;
    if k >= n {
        return Err(crate::Error::InvalidArgument(format!(
            "t0 = {t0} must lie strictly before tau = {}",
            n as f64 * h
        )));
    }
    Ok(k)
}
