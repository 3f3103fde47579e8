//! Uniform scalar quantization of overheard interference.
//!
//! `φ·log P` bits per complex value, split evenly across the two real
//! dimensions. The step is `2R / P^{φ/2}`, so the level count may be
//! fractional; over a block the index stream is entropy-coded to that rate.
//! With a subtractive dither shared by transmitter and receivers the error is
//! uniform over one step and independent of the input.

use num_complex::Complex64;

/// Range in units of the standard deviation of one real dimension of the source.
pub const RANGE_SIGMAS: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quantizer {
    prelog_bits: f64,
    range: f64,
    step: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quantized {
    pub quantized: Complex64,
    pub residual: Complex64,
    pub overflow: bool,
}

impl Quantizer {
    /// Per-dimension range `±range`.
    pub fn new(prelog_bits: f64, snr: f64, range: f64) -> Self {
        assert!(prelog_bits >= 0.0, "prelog_bits must be nonnegative");
        let levels = snr.powf(prelog_bits / 2.0);
        Quantizer { prelog_bits, range, step: 2.0 * range / levels }
    }

    /// Range `±4·P^{e/2}` for a source whose power scales as `P^e`.
    pub fn for_exponent(prelog_bits: f64, source_exponent: f64, snr: f64) -> Self {
        Self::new(prelog_bits, snr, RANGE_SIGMAS * snr.powf(source_exponent / 2.0))
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    /// Residual power of the dithered quantizer inside its range.
    pub fn noise_variance(&self) -> f64 {
        self.step * self.step / 6.0
    }

    /// Plain midpoint quantizer without dither.
    pub fn quantize(&self, value: Complex64) -> Quantized {
        self.quantize_dithered(value, [0.0, 0.0])
    }

    /// `dither` holds per-dimension offsets in units of one step, uniform on `[-1/2, 1/2)`.
    pub fn quantize_dithered(&self, value: Complex64, dither: [f64; 2]) -> Quantized {
        if self.prelog_bits == 0.0 {
            let overflow = value.re.abs() > self.range || value.im.abs() > self.range;
            return Quantized { quantized: Complex64::new(0.0, 0.0), residual: value, overflow };
        }
        let kmax = (self.range / self.step).floor();
        let dim = |x: f64, d: f64| -> (f64, bool) {
            let over = x.abs() > self.range;
            let x = x.clamp(-self.range, self.range);
            let u = d * self.step;
            let k = ((x + u) / self.step).round().clamp(-kmax - 1.0, kmax + 1.0);
            (k * self.step - u, over)
        };
        let (re, o1) = dim(value.re, dither[0]);
        let (im, o2) = dim(value.im, dither[1]);
        let quantized = Complex64::new(re, im);
        Quantized { quantized, residual: value - quantized, overflow: o1 || o2 }
    }
}

/// One-shot quantization of `value` from a source with power exponent `source_exponent`.
pub fn quantize_interference(value: Complex64, prelog_bits: f64, source_exponent: f64, snr: f64) -> Quantized {
    Quantizer::for_exponent(prelog_bits, source_exponent, snr).quantize(value)
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn zero_bits_returns_value() {
        let v = Complex64::new(0.3, -2.0);
        let q = quantize_interference(v, 0.0, 0.5, 1e4);
        assert_eq!(q.residual, v);
        assert_eq!(q.quantized, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn residual_within_half_step() {
        let q = Quantizer::for_exponent(0.5, 0.5, 1e4);
        for i in 0..200 {
            let x = Complex64::new((i as f64 * 0.37).sin() * 20.0, (i as f64 * 0.11).cos() * 20.0);
            let r = q.quantize_dithered(x, [0.25, -0.4]);
            assert!(!r.overflow);
            assert!(r.residual.re.abs() <= q.step() / 2.0 + 1e-12);
            assert!(r.residual.im.abs() <= q.step() / 2.0 + 1e-12);
        }
    }

    #[test]
    fn overflow_is_flagged_and_clamped() {
        let q = Quantizer::new(1.0, 1e4, 1.0);
        let r = q.quantize(Complex64::new(5.0, 0.0));
        assert!(r.overflow);
        assert!(r.quantized.re <= 1.0 + q.step());
    }
}
