//! Slope estimation over an SNR grid.

use serde::{Deserialize, Serialize};

/// How the sample mean is turned into a straight line in `log P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    /// Average power: `log10(mean)` against `log10(P)`.
    Power,
    /// Rate in bits: `mean` against `log2(P)`.
    Rate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub snr: f64,
    pub mean: f64,
    pub stderr: f64,
}

/// Running sums of one quantity at one SNR.
#[derive(Clone, Copy, Debug, Default)]
pub struct Moments {
    pub n: usize,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let var = ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}

/// Ordinary least-squares slope of `y` on `x` with the standard error propagated from per-point errors.
pub fn ols_slope(x: &[f64], y: &[f64], y_err: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = x.iter().zip(y_err).map(|(a, e)| ((a - mx) * e).powi(2)).sum();
    (sxy / sxx, var.sqrt() / sxx)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentMeasurement {
    pub label: String,
    pub scale: Scale,
    pub expected: f64,
    pub grid: Vec<GridPoint>,
    pub slope: f64,
    pub stderr: f64,
    pub trials: usize,
}

impl ExponentMeasurement {
    pub fn from_moments(label: String, scale: Scale, expected: f64, snrs: &[f64], m: &[Moments]) -> Self {
        let grid: Vec<GridPoint> = snrs
            .iter()
            .zip(m)
            .map(|(&snr, m)| GridPoint { snr, mean: m.mean(), stderr: m.stderr() })
            .collect();
        let (x, y, e): (Vec<f64>, Vec<f64>, Vec<f64>) = match scale {
            Scale::Power => (
                grid.iter().map(|g| g.snr.log10()).collect(),
                grid.iter().map(|g| g.mean.log10()).collect(),
                grid.iter().map(|g| g.stderr / (g.mean * std::f64::consts::LN_10)).collect(),
            ),
            Scale::Rate => (
                grid.iter().map(|g| g.snr.log2()).collect(),
                grid.iter().map(|g| g.mean).collect(),
                grid.iter().map(|g| g.stderr).collect(),
            ),
        };
        let (slope, stderr) = ols_slope(&x, &y, &e);
        ExponentMeasurement { label, scale, expected, grid, slope, stderr, trials: m.first().map_or(0, |m| m.n) }
    }

    pub fn deviation(&self) -> f64 {
        self.slope - self.expected
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.deviation().abs() <= tol
    }
}
