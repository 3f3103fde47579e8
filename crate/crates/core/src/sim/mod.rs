//! Monte Carlo measurement of power and rate exponents.
//!
//! Every quantity is averaged over independent blocks at each SNR of a grid
//! and its exponent is read off as an ordinary least-squares slope. A block's
//! randomness is drawn once and rescaled for each SNR, so the grid points
//! share fading, symbols and dithers.

pub mod channel;
pub mod quantizer;
pub mod stats;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quality::User;
use crate::scheme::{CommonCoding, DelayedCsit, PhaseRole, SchemeConfig, SlotAllocation, SymbolClass};
use channel::{block_rng, dot, norm_sqr, BlockDraw, BlockRealization, PrecoderSet};
use quantizer::{Quantizer, RANGE_SIGMAS};
use stats::{ExponentMeasurement, Moments, Scale};

pub use channel::sample_block;
pub use quantizer::quantize_interference;

/// Grid, trial count and seed of a measurement run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimSettings {
    pub grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub antennas: usize,
    pub tolerance: f64,
}

impl Default for SimSettings {
    fn default() -> Self {
        SimSettings { grid: log_grid(1e2, 1e6, 5), trials: 2000, seed: 1, antennas: 2, tolerance: 0.05 }
    }
}

/// `n` points log-spaced from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n).map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)).collect()
}

impl SimSettings {
    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if g.len() < 3 {
            return Err(Error::Grid(format!("need at least 3 SNR points, got {}", g.len())));
        }
        if g.iter().any(|&p| !(p.is_finite() && p > 1.0)) {
            return Err(Error::Grid("every SNR must exceed 1".into()));
        }
        if g.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Grid("SNR grid must be strictly increasing".into()));
        }
        if (g[g.len() - 1] / g[0]).log10() < 3.0 - 1e-9 {
            return Err(Error::Grid("SNR grid must span at least 3 decades".into()));
        }
        if self.trials < 100 {
            return Err(Error::Grid(format!("need at least 100 trials per point, got {}", self.trials)));
        }
        if self.antennas < 2 {
            return Err(Error::Domain("schemes need at least 2 transmit antennas".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuantityKind {
    /// Average power of one received summand or interference aggregate.
    Term,
    /// Estimation-error power of the channel model itself.
    EstimationError,
    /// Quantization residual of overheard interference.
    Residual,
    /// Mutual information of the common symbol.
    Common,
    /// Log-det rate of the two-row effective channel.
    Mimo,
    /// Transmit power `‖x‖²`.
    TxPower,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub kind: QuantityKind,
    #[serde(flatten)]
    pub value: ExponentMeasurement,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OverflowStats {
    pub quantized: u64,
    pub overflowed: u64,
}

impl OverflowStats {
    pub fn fraction(&self) -> f64 {
        if self.quantized == 0 {
            0.0
        } else {
            self.overflowed as f64 / self.quantized as f64
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Counters {
    overflow: OverflowStats,
    leakage: f64,
}

/// Everything measured for one phase.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseReport {
    pub phase: usize,
    pub measurements: Vec<Measurement>,
    /// Quantizer overflow at each grid SNR.
    pub overflow: Vec<OverflowStats>,
    /// Largest `|êᵀu|/‖ê‖` seen for a zero-forcing precoder.
    pub max_leakage: f64,
}

impl PhaseReport {
    pub fn of_kind(&self, kind: QuantityKind) -> impl Iterator<Item = &ExponentMeasurement> {
        self.measurements.iter().filter(move |m| m.kind == kind).map(|m| &m.value)
    }

    pub fn get(&self, label: &str) -> Option<&ExponentMeasurement> {
        self.measurements.iter().map(|m| &m.value).find(|m| m.label == label)
    }
}

trait Sink {
    fn put(&mut self, kind: QuantityKind, scale: Scale, expected: f64, label: &dyn Fn() -> String, value: f64);
}

struct SpecSink(Vec<(QuantityKind, Scale, f64, String)>);

impl Sink for SpecSink {
    fn put(&mut self, kind: QuantityKind, scale: Scale, expected: f64, label: &dyn Fn() -> String, _: f64) {
        self.0.push((kind, scale, expected, label()));
    }
}

struct ValueSink<'a>(&'a mut Vec<f64>);

impl Sink for ValueSink<'_> {
    fn put(&mut self, _: QuantityKind, _: Scale, _: f64, _: &dyn Fn() -> String, value: f64) {
        self.0.push(value);
    }
}

/// Per-user quantities of one slot needed by the rate computations.
#[derive(Clone, Copy, Default)]
struct Overheard {
    /// Power of the other user's private signals at this receiver.
    iota: f64,
    /// Power of their reconstruction from the delayed estimate.
    check: f64,
    /// Power of the part the delayed estimate misses.
    resid: f64,
    /// Quantization noise power when `φ > 0`.
    qnoise: Option<f64>,
}

fn user_label(u: User) -> usize {
    u.index() + 1
}

struct PhaseCtx<'a> {
    cfg: &'a SchemeConfig,
    phase: usize,
    role: PhaseRole,
    allocs: Vec<SlotAllocation>,
    noisy: bool,
}

impl<'a> PhaseCtx<'a> {
    fn new(cfg: &'a SchemeConfig, phase: usize) -> Result<Self> {
        let role = cfg.role(phase)?;
        let allocs = (1..=cfg.slots()).map(|t| cfg.allocation(phase, t)).collect::<Result<_>>()?;
        Ok(PhaseCtx { cfg, phase, role, allocs, noisy: cfg.kind().delayed_csit() == DelayedCsit::Noisy })
    }

    fn probe(&self, draw: &BlockDraw, real: &BlockRealization, snr: f64, sink: &mut impl Sink, ctr: &mut Counters) {
        use QuantityKind as Q;
        let s = self.phase;
        let profile = self.cfg.profile();
        let m = real.h.len() as f64;
        let mut block_common = [0.0f64; 2];
        let mut block_rate = 0.0;
        let has_block = self.allocs[0].get(SymbolClass::C).is_some()
            && self.allocs[0].common_coding == CommonCoding::Block;

        for (ti, al) in self.allocs.iter().enumerate() {
            let t = ti + 1;
            let pre = PrecoderSet::new(real, draw, ti);
            let prec = |k: SymbolClass| -> &Vec<Complex64> {
                match k {
                    SymbolClass::A => &pre.u,
                    SymbolClass::APrime => &pre.u_prime,
                    SymbolClass::B => &pre.v,
                    SymbolClass::BPrime => &pre.v_prime,
                    SymbolClass::C => &pre.w,
                }
            };
            let sym = |k: SymbolClass| draw.symbols[ti][k as usize];
            let power = |p: f64| snr.powf(p);

            for user in [User::One, User::Two] {
                let u = user_label(user);
                let chan = real.channel(user);
                let est = real.current(user, ti);
                let alpha = profile.alpha(user)[ti];
                let err: Vec<Complex64> = chan.iter().zip(est).map(|(a, b)| a - b).collect();
                sink.put(Q::EstimationError, Scale::Power, -alpha, &|| format!("s{s}.t{t}.u{u}.est_err"), norm_sqr(&err) / m);
                if self.noisy && ti == 0 {
                    let derr: Vec<Complex64> = chan.iter().zip(real.delayed(user)).map(|(a, b)| a - b).collect();
                    let beta = profile.beta_of(user);
                    sink.put(Q::EstimationError, Scale::Power, -beta, &|| format!("s{s}.u{u}.delayed_err"), norm_sqr(&derr) / m);
                }
            }

            let mut over = [Overheard::default(); 2];
            for user in [User::One, User::Two] {
                let u = user_label(user);
                let chan = real.channel(user);
                let dchan = if self.noisy { real.delayed(user) } else { chan };
                let alpha = profile.alpha(user)[ti];
                for (k, a) in al.active() {
                    let pw = dot(chan, prec(k)).norm_sqr() * power(a.power);
                    let exp = a.power - if a.precoder.nulls() == Some(user) { alpha } else { 0.0 };
                    sink.put(Q::Term, Scale::Power, exp, &|| format!("s{s}.t{t}.u{u}.{}", k.label()), pw);
                }
                sink.put(Q::Term, Scale::Power, 0.0, &|| format!("s{s}.t{t}.u{u}.z"), 1.0);

                let foreign: Vec<_> = al.active().filter(|(k, _)| k.owner() == Some(user.other())).collect();
                if foreign.is_empty() {
                    continue;
                }
                let exp_of = |a: &crate::scheme::ClassAllocation| {
                    a.power - if a.precoder.nulls() == Some(user) { alpha } else { 0.0 }
                };
                let expected = foreign.iter().map(|(_, a)| exp_of(a)).fold(f64::NEG_INFINITY, f64::max);
                let mut o = Overheard::default();
                let mut value = Complex64::new(0.0, 0.0);
                for &(k, a) in &foreign {
                    let pk = power(a.power);
                    let c = dot(chan, prec(k));
                    let dc = dot(dchan, prec(k));
                    o.iota += c.norm_sqr() * pk;
                    o.check += dc.norm_sqr() * pk;
                    o.resid += (c - dc).norm_sqr() * pk;
                    value += dc * pk.sqrt() * sym(k);
                }
                sink.put(Q::Term, Scale::Power, expected, &|| format!("s{s}.t{t}.u{u}.iota"), o.iota);
                if self.noisy {
                    let beta = profile.beta_of(user);
                    let top = foreign.iter().map(|(_, a)| a.power).fold(f64::NEG_INFINITY, f64::max);
                    sink.put(Q::Term, Scale::Power, expected, &|| format!("s{s}.t{t}.u{u}.iota_check"), o.check);
                    sink.put(Q::Term, Scale::Power, top - beta, &|| format!("s{s}.t{t}.u{u}.iota_resid"), o.resid);
                }
                let phi = al.quant_of(user);
                if phi > 0.0 && o.check > 0.0 {
                    let q = Quantizer::new(phi, snr, RANGE_SIGMAS * (o.check / 2.0).sqrt());
                    let r = q.quantize_dithered(value, draw.dithers[ti][user.index()]);
                    ctr.overflow.quantized += 1;
                    ctr.overflow.overflowed += u64::from(r.overflow);
                    o.qnoise = Some(q.noise_variance());
                    sink.put(Q::Residual, Scale::Power, expected - phi, &|| format!("s{s}.t{t}.u{u}.qres"), r.residual.norm_sqr());
                }
                over[user.index()] = o;
            }

            if let Some(c) = al.get(SymbolClass::C) {
                for user in [User::One, User::Two] {
                    let chan = real.channel(user);
                    let sig = dot(chan, &pre.w).norm_sqr() * power(c.power);
                    let noise = 1.0
                        + al.active()
                            .filter(|(k, _)| *k != SymbolClass::C)
                            .map(|(k, a)| dot(chan, prec(k)).norm_sqr() * power(a.power))
                            .sum::<f64>();
                    let mi = (1.0 + sig / noise).log2();
                    match al.common_coding {
                        CommonCoding::PerSlot => {
                            let u = user_label(user);
                            sink.put(Q::Common, Scale::Rate, c.rate, &|| format!("s{s}.t{t}.u{u}.common"), mi);
                        }
                        CommonCoding::Block => block_common[user.index()] += mi,
                    }
                }
                block_rate += c.rate;
            }

            if matches!(self.role, PhaseRole::First | PhaseRole::Middle) {
                for user in [User::One, User::Two] {
                    let own: Vec<_> = al.active().filter(|(k, _)| k.owner() == Some(user)).collect();
                    if own.is_empty() {
                        continue;
                    }
                    let u = user_label(user);
                    let mine = over[user.index()];
                    let theirs = over[user.other().index()];
                    let chan = real.channel(user);
                    let ochan = if self.noisy { real.delayed(user.other()) } else { real.channel(user.other()) };
                    let row1: Vec<Complex64> =
                        own.iter().map(|&(k, a)| dot(chan, prec(k)) * power(a.power).sqrt()).collect();
                    let n1 = 1.0 + mine.qnoise.map_or(mine.iota, |q| mine.resid + q);
                    let mut rows = vec![(row1, n1)];
                    if let Some(q) = theirs.qnoise {
                        let row2 = own.iter().map(|&(k, a)| dot(ochan, prec(k)) * power(a.power).sqrt()).collect();
                        rows.push((row2, q));
                    }
                    let mi = log2_det_gram(&rows);
                    let rate = al.private_rate(user);
                    sink.put(Q::Mimo, Scale::Rate, rate, &|| format!("s{s}.t{t}.u{u}.mimo"), mi);
                }
            }

            let mut x = vec![Complex64::new(0.0, 0.0); real.h.len()];
            let mut top = f64::NEG_INFINITY;
            for (k, a) in al.active() {
                let amp = power(a.power).sqrt() * sym(k);
                x.iter_mut().zip(prec(k)).for_each(|(xi, pi)| *xi += pi * amp);
                top = top.max(a.power);
            }
            sink.put(Q::TxPower, Scale::Power, top, &|| format!("s{s}.t{t}.tx"), norm_sqr(&x));

            let leak_g = dot(real.current(User::Two, ti), &pre.u).norm() / norm_sqr(real.current(User::Two, ti)).sqrt();
            let leak_h = dot(real.current(User::One, ti), &pre.v).norm() / norm_sqr(real.current(User::One, ti)).sqrt();
            ctr.leakage = ctr.leakage.max(leak_g).max(leak_h);
        }

        if has_block {
            for user in [User::One, User::Two] {
                let u = user_label(user);
                sink.put(Q::Common, Scale::Rate, block_rate, &|| format!("s{s}.u{u}.common_block"), block_common[user.index()]);
            }
        }
    }
}

/// `log2 det(I + Σ_r h_rᴴ h_r / n_r)` for rows of length one or two.
fn log2_det_gram(rows: &[(Vec<Complex64>, f64)]) -> f64 {
    let k = rows[0].0.len();
    let mut g = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..k {
        g[i][i] = Complex64::new(1.0, 0.0);
    }
    for (h, n) in rows {
        for i in 0..k {
            for j in 0..k {
                g[i][j] += h[i].conj() * h[j] / *n;
            }
        }
    }
    let det = if k == 1 { g[0][0].re } else { (g[0][0] * g[1][1] - g[0][1] * g[1][0]).re };
    det.log2()
}

/// Runs every probe of `phase` (1-based) over the grid.
pub fn simulate_phase(cfg: &SchemeConfig, phase: usize, settings: &SimSettings) -> Result<PhaseReport> {
    settings.validate()?;
    let ctx = PhaseCtx::new(cfg, phase)?;
    let slots = cfg.slots();
    let m = settings.antennas;
    let stream = |i: usize| ((phase as u64) << 40) | i as u64;

    let specs = {
        let draw = BlockDraw::draw(&mut block_rng(settings.seed, stream(0)), slots, m);
        let real = draw.realize(settings.grid[0], cfg.profile());
        let mut sink = SpecSink(Vec::new());
        ctx.probe(&draw, &real, settings.grid[0], &mut sink, &mut Counters::default());
        sink.0
    };
    let nq = specs.len();
    let np = settings.grid.len();

    let per_trial: Vec<(Vec<f64>, Vec<Counters>)> = (0..settings.trials)
        .into_par_iter()
        .map(|i| {
            let draw = BlockDraw::draw(&mut block_rng(settings.seed, stream(i)), slots, m);
            let mut vals = Vec::with_capacity(nq * np);
            let mut ctrs = vec![Counters::default(); np];
            for (pi, &snr) in settings.grid.iter().enumerate() {
                let real = draw.realize(snr, cfg.profile());
                ctx.probe(&draw, &real, snr, &mut ValueSink(&mut vals), &mut ctrs[pi]);
            }
            (vals, ctrs)
        })
        .collect();

    let mut moments = vec![vec![Moments::default(); np]; nq];
    let mut overflow = vec![OverflowStats::default(); np];
    let mut max_leakage = 0.0f64;
    for (vals, ctrs) in &per_trial {
        debug_assert_eq!(vals.len(), nq * np);
        for pi in 0..np {
            for q in 0..nq {
                moments[q][pi].push(vals[pi * nq + q]);
            }
            overflow[pi].quantized += ctrs[pi].overflow.quantized;
            overflow[pi].overflowed += ctrs[pi].overflow.overflowed;
            max_leakage = max_leakage.max(ctrs[pi].leakage);
        }
    }
    let measurements = specs
        .into_iter()
        .zip(&moments)
        .map(|((kind, scale, expected, label), m)| Measurement {
            kind,
            value: ExponentMeasurement::from_moments(label, scale, expected, &settings.grid, m),
        })
        .collect();
    Ok(PhaseReport { phase, measurements, overflow, max_leakage })
}

/// Received-summand, estimation-error and transmit-power exponents of `phase`.
pub fn term_exponents(cfg: &SchemeConfig, phase: usize, settings: &SimSettings) -> Result<Vec<ExponentMeasurement>> {
    let r = simulate_phase(cfg, phase, settings)?;
    Ok(r.measurements
        .into_iter()
        .filter(|m| matches!(m.kind, QuantityKind::Term | QuantityKind::EstimationError | QuantityKind::TxPower))
        .map(|m| m.value)
        .collect())
}

/// Common-symbol rate prelogs of `phase`, one per user (and per slot for scalar coding).
pub fn rate_prelog_common(cfg: &SchemeConfig, phase: usize, settings: &SimSettings) -> Result<Vec<ExponentMeasurement>> {
    let al = cfg.allocation(phase, 1)?;
    if al.get(SymbolClass::C).is_none() {
        return Err(Error::Domain(format!("phase {phase} sends no common symbol")));
    }
    let r = simulate_phase(cfg, phase, settings)?;
    Ok(r.of_kind(QuantityKind::Common).cloned().collect())
}

/// Log-det rate prelogs of `user`'s effective channel, one per slot of `phase`.
pub fn rate_prelog_mimo(
    cfg: &SchemeConfig,
    phase: usize,
    user: User,
    settings: &SimSettings,
) -> Result<Vec<ExponentMeasurement>> {
    if !matches!(cfg.role(phase)?, PhaseRole::First | PhaseRole::Middle) {
        return Err(Error::Domain(format!("phase {phase} has no retrospective decoding")));
    }
    let r = simulate_phase(cfg, phase, settings)?;
    let tag = format!(".u{}.mimo", user_label(user));
    Ok(r.of_kind(QuantityKind::Mimo).filter(|m| m.label.ends_with(&tag)).cloned().collect())
}
