//! Block-fading channels with quality-controlled current and delayed estimates.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::quality::{QualityProfile, User};

pub type CVec = Vec<Complex64>;

/// Bilinear product `xᵀy` (no conjugation), the way a receiver sees a precoded signal.
pub fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum()
}

pub fn cn(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn cn_vec(rng: &mut impl Rng, m: usize) -> CVec {
    (0..m).map(|_| cn(rng)).collect()
}

fn unit(mut x: CVec) -> CVec {
    let n = norm_sqr(&x).sqrt();
    x.iter_mut().for_each(|a| *a /= n);
    x
}

/// Unit vector `u` with `estᵀu = 0`.
///
/// Two antennas: the rotated estimate `[e₂, −e₁]/‖e‖`. More antennas: the
/// first standard basis vector with its component along `conj(e)` removed.
pub fn null_precoder(est: &[Complex64]) -> CVec {
    let m = est.len();
    if m == 2 {
        return unit(vec![est[1], -est[0]]);
    }
    let n = norm_sqr(est).sqrt();
    let q: CVec = est.iter().map(|e| e.conj() / n).collect();
    for k in 0..m {
        // e_k − q (qᴴ e_k)
        let proj = q[k].conj();
        let x: CVec = (0..m).map(|i| if i == k { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) } - q[i] * proj).collect();
        if norm_sqr(&x) > 1e-6 {
            return unit(x);
        }
    }
    unreachable!("a nonzero vector has an (m-1)-dimensional null space")
}

/// SNR-independent randomness of one block. Scaling by `P` happens in [`BlockDraw::realize`],
/// so every SNR point of a sweep sees the same fading, symbols and dithers.
#[derive(Clone, Debug)]
pub struct BlockDraw {
    pub h: CVec,
    pub g: CVec,
    h_err: Vec<CVec>,
    g_err: Vec<CVec>,
    h_derr: CVec,
    g_derr: CVec,
    /// Per slot: `w`, `u′`, `v′`.
    pub random_precoders: Vec<[CVec; 3]>,
    /// Per slot unit-power symbols for `a, a′, b, b′, c`.
    pub symbols: Vec<[Complex64; 5]>,
    /// Per slot, per user, per real dimension, uniform on `[-1/2, 1/2)`.
    pub dithers: Vec<[[f64; 2]; 2]>,
}

impl BlockDraw {
    pub fn draw(rng: &mut impl Rng, slots: usize, antennas: usize) -> Self {
        let m = antennas;
        let h = cn_vec(rng, m);
        let g = cn_vec(rng, m);
        let h_err = (0..slots).map(|_| cn_vec(rng, m)).collect();
        let g_err = (0..slots).map(|_| cn_vec(rng, m)).collect();
        let h_derr = cn_vec(rng, m);
        let g_derr = cn_vec(rng, m);
        let random_precoders = (0..slots)
            .map(|_| [unit(cn_vec(rng, m)), unit(cn_vec(rng, m)), unit(cn_vec(rng, m))])
            .collect();
        let symbols = (0..slots).map(|_| std::array::from_fn(|_| cn(rng))).collect();
        let dithers = (0..slots)
            .map(|_| std::array::from_fn(|_| std::array::from_fn(|_| rng.random::<f64>() - 0.5)))
            .collect();
        BlockDraw { h, g, h_err, g_err, h_derr, g_derr, random_precoders, symbols, dithers }
    }

    /// Channel and estimates at SNR `snr`.
    pub fn realize(&self, snr: f64, p: &QualityProfile) -> BlockRealization {
        let scaled = |truth: &CVec, err: &CVec, exponent: f64| -> CVec {
            let s = snr.powf(-exponent / 2.0);
            truth.iter().zip(err).map(|(t, e)| t - e * s).collect()
        };
        let (a1, a2) = (p.alpha(User::One), p.alpha(User::Two));
        BlockRealization {
            h: self.h.clone(),
            g: self.g.clone(),
            h_hat: self.h_err.iter().zip(a1).map(|(e, &a)| scaled(&self.h, e, a)).collect(),
            g_hat: self.g_err.iter().zip(a2).map(|(e, &a)| scaled(&self.g, e, a)).collect(),
            h_check: scaled(&self.h, &self.h_derr, p.beta_of(User::One)),
            g_check: scaled(&self.g, &self.g_derr, p.beta_of(User::Two)),
        }
    }
}

/// One coherence block: true channels, per-slot current estimates and delayed estimates.
#[derive(Clone, Debug)]
pub struct BlockRealization {
    pub h: CVec,
    pub g: CVec,
    pub h_hat: Vec<CVec>,
    pub g_hat: Vec<CVec>,
    pub h_check: CVec,
    pub g_check: CVec,
}

impl BlockRealization {
    pub fn channel(&self, user: User) -> &CVec {
        match user {
            User::One => &self.h,
            User::Two => &self.g,
        }
    }

    pub fn current(&self, user: User, t: usize) -> &CVec {
        match user {
            User::One => &self.h_hat[t],
            User::Two => &self.g_hat[t],
        }
    }

    pub fn delayed(&self, user: User) -> &CVec {
        match user {
            User::One => &self.h_check,
            User::Two => &self.g_check,
        }
    }
}

/// RNG for block `index` of a run seeded with `seed`.
pub fn block_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Deterministic in `(seed, block_index)`.
pub fn sample_block(snr: f64, p: &QualityProfile, antennas: usize, seed: u64, block_index: u64) -> BlockRealization {
    let mut rng = block_rng(seed, block_index);
    BlockDraw::draw(&mut rng, p.slots(), antennas).realize(snr, p)
}

/// Precoders of one slot.
#[derive(Clone, Debug)]
pub struct PrecoderSet {
    /// Nulls user 2's current estimate.
    pub u: CVec,
    /// Nulls user 1's current estimate.
    pub v: CVec,
    pub w: CVec,
    pub u_prime: CVec,
    pub v_prime: CVec,
}

impl PrecoderSet {
    pub fn new(real: &BlockRealization, draw: &BlockDraw, t: usize) -> Self {
        let [w, u_prime, v_prime] = draw.random_precoders[t].clone();
        PrecoderSet { u: null_precoder(&real.g_hat[t]), v: null_precoder(&real.h_hat[t]), w, u_prime, v_prime }
    }
}
