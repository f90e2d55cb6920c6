//! Small numerical helpers shared by the estimator and the flows.

/// Neumaier-compensated running sum. Adding the same values in the same
/// order always produces the same bits.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
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

pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Sample mean and unbiased standard deviation (0 for fewer than two values).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = compensated_sum(values.iter().copied()) / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean)));
    (mean, (ss / (n - 1.0)).sqrt())
}

/// C² ramp from 0 at s <= 0 to 1 at s >= 1.
pub fn smootherstep(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        s * s * s * (s * (6.0 * s - 15.0) + 10.0)
    }
}

/// Antiderivative of [`smootherstep`] with value 0 at s = 0; for s > 1 it
/// continues linearly with slope 1.
pub fn smootherstep_integral(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        0.5 + (s - 1.0)
    } else {
        let s4 = s * s * s * s;
        s4 * (s * (s - 3.0) + 2.5)
    }
}

/// Aitken delta-squared extrapolation of three successive values.
pub fn aitken(v0: f64, v1: f64, v2: f64) -> f64 {
    let d1 = v1 - v0;
    let d2 = v2 - v1;
    let denom = d2 - d1;
    if denom.abs() < 1e-300 || !denom.is_finite() {
        return v2;
    }
    let a = v2 - d2 * d2 / denom;
    if a.is_finite() {
        a
    } else {
        v2
    }
}
