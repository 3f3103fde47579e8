//! Rotated-QAM lattice codes for the vector common symbols.
//!
//! A codeword is `c = θ·M·q` with `q` drawn from the `T`-fold product of a
//! square QAM alphabet on the odd-integer grid, `θ = P^{(1−r)/2}` and `M` a
//! unitary circulant of roots of unity. Because every coordinate of `M·d` is
//! non-zero for a non-zero integer difference `d`, the product distance does
//! not vanish, and after whitening by `P^{−α_t/2}` the minimum distance grows
//! like `P^δ`.
//!
//! Distances are enumerated over the per-coordinate difference set rather
//! than over codeword pairs; the two minima coincide because the alphabet is
//! a product set.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sim::channel::{block_rng, cn};

pub const ENUMERATION_BUDGET: usize = 1_000_000;
pub const DEFAULT_DELTA: f64 = 0.1;

/// Phase offset of the circulant rows, in units of `2πk/T`.
///
/// A quarter turn makes `x³ − i` reducible over `Q(i)` and leaves `T = 3` with
/// vanishing coordinates; a sixth does not.
pub const TWIST: f64 = 1.0 / 6.0;

#[derive(Clone, Debug, Serialize)]
pub struct LatticeCodebook {
    dimension: usize,
    rate: f64,
    snr: f64,
    delta: f64,
    theta: f64,
    qam: usize,
    #[serde(skip)]
    generator: Vec<Vec<Complex64>>,
}

/// `M_{t,k} = e^{i2πk(t+TWIST)/T} / √T`.
pub fn generator(t: usize) -> Vec<Vec<Complex64>> {
    let n = t as f64;
    (0..t)
        .map(|row| {
            (0..t)
                .map(|k| Complex64::from_polar(1.0 / n.sqrt(), 2.0 * std::f64::consts::PI * k as f64 * (row as f64 + TWIST) / n))
                .collect()
        })
        .collect()
}

/// Square QAM size nearest to `P^r` on a log scale, at least 4.
pub fn qam_size(rate: f64, snr: f64) -> usize {
    let k = (rate * snr.log2() / 2.0).round().max(1.0);
    4usize.saturating_pow(k as u32)
}

impl LatticeCodebook {
    /// QAM size picked by [`qam_size`].
    pub fn build(dimension: usize, rate: f64, snr: f64, delta: f64) -> Result<Self> {
        Self::with_qam(dimension, rate, snr, delta, qam_size(rate, snr))
    }

    /// Codebook for the common vector of a block with average exponent `abar`: `r = 1 − ᾱ − δ`.
    pub fn for_common_vector(dimension: usize, abar: f64, snr: f64, delta: f64, qam: Option<usize>) -> Result<Self> {
        let rate = 1.0 - abar - delta;
        match qam {
            Some(q) => Self::with_qam(dimension, rate, snr, delta, q),
            None => Self::build(dimension, rate, snr, delta),
        }
    }

    pub fn with_qam(dimension: usize, rate: f64, snr: f64, delta: f64, qam: usize) -> Result<Self> {
        if !(1..=4).contains(&dimension) {
            return Err(Error::Domain(format!("dimension T = {dimension} not in 1..=4")));
        }
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::Domain(format!("rate prelog r = {rate} not in (0, 1]")));
        }
        if !(snr.is_finite() && snr >= 1.0) {
            return Err(Error::Domain(format!("SNR {snr} must be at least 1")));
        }
        if !(delta > 0.0) {
            return Err(Error::InvalidDelta(format!("delta = {delta} must be positive")));
        }
        let side = (qam as f64).sqrt().round() as usize;
        if qam < 4 || side * side != qam || side % 2 != 0 {
            return Err(Error::Domain(format!("QAM size {qam} is not an even square of at least 4")));
        }
        let size = (qam as f64).powi(dimension as i32);
        if size > ENUMERATION_BUDGET as f64 {
            return Err(Error::Budget(format!(
                "{qam}-QAM in {dimension} dimensions has {size:.0} codewords, budget is {ENUMERATION_BUDGET}"
            )));
        }
        Ok(LatticeCodebook {
            dimension,
            rate,
            snr,
            delta,
            theta: snr.powf((1.0 - rate) / 2.0),
            qam,
            generator: generator(dimension),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn snr(&self) -> f64 {
        self.snr
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn qam(&self) -> usize {
        self.qam
    }

    pub fn generator(&self) -> &[Vec<Complex64>] {
        &self.generator
    }

    pub fn size(&self) -> usize {
        self.qam.pow(self.dimension as u32)
    }

    /// One-dimensional QAM points, odd integers per real dimension.
    pub fn alphabet(&self) -> Vec<Complex64> {
        let side = (self.qam as f64).sqrt() as i64;
        let levels: Vec<f64> = (0..side).map(|i| (2 * i - side + 1) as f64).collect();
        levels.iter().flat_map(|&re| levels.iter().map(move |&im| Complex64::new(re, im))).collect()
    }

    /// `M·q` without the `θ` scaling.
    pub fn rotate(&self, q: &[Complex64]) -> Vec<Complex64> {
        self.generator.iter().map(|row| row.iter().zip(q).map(|(m, x)| m * x).sum()).collect()
    }

    pub fn codeword(&self, q: &[Complex64]) -> Vec<Complex64> {
        self.rotate(q).into_iter().map(|x| x * self.theta).collect()
    }

    /// Every codeword in lexicographic order of the alphabet indices.
    pub fn codewords(&self) -> Vec<Vec<Complex64>> {
        let a = self.alphabet();
        product(&a, self.dimension).map(|q| self.codeword(&q)).collect()
    }

    /// Average `‖c‖²` over the alphabet.
    pub fn mean_power(&self) -> f64 {
        let a = self.alphabet();
        let per = a.iter().map(|x| x.norm_sqr()).sum::<f64>() / a.len() as f64;
        self.theta * self.theta * per * self.dimension as f64
    }

    /// Non-zero differences `q − q′` of the alphabet, rotated but not scaled.
    fn rotated_differences(&self) -> Vec<Vec<Complex64>> {
        let side = (self.qam as f64).sqrt() as i64;
        let steps: Vec<f64> = (-(side - 1)..=(side - 1)).map(|i| 2.0 * i as f64).collect();
        let diff: Vec<Complex64> =
            steps.iter().flat_map(|&re| steps.iter().map(move |&im| Complex64::new(re, im))).collect();
        product(&diff, self.dimension)
            .filter(|d| d.iter().any(|x| x.norm_sqr() > 0.0))
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|d| self.rotate(&d))
            .collect()
    }
}

/// Cartesian power of `set`, first index slowest.
fn product(set: &[Complex64], dim: usize) -> impl Iterator<Item = Vec<Complex64>> + '_ {
    let n = set.len();
    let total = n.pow(dim as u32);
    (0..total).map(move |mut i| {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        for slot in v.iter_mut().rev() {
            *slot = set[i % n];
            i /= n;
        }
        v
    })
}

fn min_over<F: Fn(&[Complex64]) -> f64 + Sync>(diffs: &[Vec<Complex64>], f: F) -> f64 {
    diffs.par_iter().map(|d| f(d)).reduce(|| f64::INFINITY, f64::min)
}

fn check_non_vanishing(diffs: &[Vec<Complex64>]) -> Result<()> {
    // Differences are multiples of 2 in each real dimension, so anything this small is a true zero.
    match diffs.iter().find(|d| d.iter().any(|x| x.norm() < 1e-9)) {
        Some(d) => Err(Error::Construction(format!("rotated difference {d:?} has a zero coordinate"))),
        None => Ok(()),
    }
}

/// `min Π_t |c_t − c′_t|²` over distinct codeword pairs.
pub fn min_product_distance(cb: &LatticeCodebook) -> Result<f64> {
    let diffs = cb.rotated_differences();
    check_non_vanishing(&diffs)?;
    let scale = (cb.theta * cb.theta).powi(cb.dimension as i32);
    Ok(scale * min_over(&diffs, |d| d.iter().map(|x| x.norm_sqr()).product()))
}

fn whitening(cb: &LatticeCodebook, alphas: &[f64]) -> Result<Vec<f64>> {
    if alphas.len() != cb.dimension {
        return Err(Error::Domain(format!("{} exponents for dimension {}", alphas.len(), cb.dimension)));
    }
    if alphas.iter().any(|a| !(0.0..=1.0).contains(a)) {
        return Err(Error::Domain("exponents must lie in [0, 1]".into()));
    }
    Ok(alphas.iter().map(|a| cb.snr.powf(-a / 2.0) * cb.theta).collect())
}

/// `min Σ_t |P^{−α_t/2}(c_t − c′_t)|²` over distinct codeword pairs.
pub fn whitened_min_distance(cb: &LatticeCodebook, alphas: &[f64]) -> Result<f64> {
    let w = whitening(cb, alphas)?;
    let diffs = cb.rotated_differences();
    check_non_vanishing(&diffs)?;
    Ok(min_over(&diffs, |d| d.iter().zip(&w).map(|(x, s)| (x * s).norm_sqr()).sum()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Noise {
    Gaussian,
    /// No noise; nearest-codeword decoding must then be exact.
    Zero,
}

/// Word-error rate of nearest-codeword decoding in the whitened metric, unit-power noise.
pub fn decode_error_rate(cb: &LatticeCodebook, alphas: &[f64], trials: usize, seed: u64, noise: Noise) -> Result<f64> {
    let w = whitening(cb, alphas)?;
    let alphabet = cb.alphabet();
    let received: Vec<Vec<Complex64>> =
        product(&alphabet, cb.dimension).map(|q| cb.rotate(&q).iter().zip(&w).map(|(x, s)| x * s).collect()).collect();
    let errors: usize = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = block_rng(seed, i as u64);
            let sent = rng.random_range(0..received.len());
            let y: Vec<Complex64> = received[sent]
                .iter()
                .map(|x| match noise {
                    Noise::Gaussian => x + cn(&mut rng),
                    Noise::Zero => *x,
                })
                .collect();
            let dist = |c: &Vec<Complex64>| c.iter().zip(&y).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>();
            let mut best = (f64::INFINITY, 0);
            for (j, c) in received.iter().enumerate() {
                let d = dist(c);
                if d < best.0 {
                    best = (d, j);
                }
            }
            usize::from(best.1 != sent)
        })
        .sum();
    Ok(errors as f64 / trials as f64)
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn generator_is_unitary() {
        for t in 1..=4 {
            let m = generator(t);
            for i in 0..t {
                for j in 0..t {
                    let ip: Complex64 = (0..t).map(|k| m[k][i].conj() * m[k][j]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - want).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn theta_example() {
        let cb = LatticeCodebook::with_qam(2, 0.5, 1e4, 0.1, 4).unwrap();
        assert!((cb.theta() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn scalar_qam_product_distance() {
        let cb = LatticeCodebook::with_qam(1, 0.5, 1e4, 0.1, 4).unwrap();
        let d = min_product_distance(&cb).unwrap();
        assert!((d - 4.0 * cb.theta().powi(2)).abs() < 1e-9 * d);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(LatticeCodebook::with_qam(4, 0.5, 1e4, 0.1, 64), Err(Error::Budget(_))));
        assert!(matches!(LatticeCodebook::with_qam(2, 0.5, 1e4, 0.1, 8), Err(Error::Domain(_))));
    }

    #[test]
    fn qam_rounding() {
        assert_eq!(qam_size(0.5, 1e4), 64);
        assert_eq!(qam_size(0.01, 1e2), 4);
    }

    #[test]
    fn zero_noise_decodes() {
        let cb = LatticeCodebook::with_qam(2, 0.5, 1e2, 0.1, 4).unwrap();
        assert_eq!(decode_error_rate(&cb, &[0.2, 0.6], 200, 1, Noise::Zero).unwrap(), 0.0);
    }
}
