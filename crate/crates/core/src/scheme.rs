//! Multi-phase precoding schemes resolved into durations, per-slot exponent
//! allocations, a quantization ledger and DoF accounting.
//!
//! Phase `s` lasts `T_s` coherence blocks of `T` slots each. Within a slot the
//! transmitter sends up to five symbol classes: `a, a′` for user 1, `b, b′`
//! for user 2 and a common symbol `c`. Each class gets a power exponent
//! (`P^{p}`) and a rate prelog. Phases after the first carry, in `c`, the
//! quantized interference overheard in the phase before.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quality::{ProfileMode, QualityProfile, User};
use crate::region::{beta_threshold, corner_c, is_case1, DofPoint};

/// Values below this are treated as zero when deciding whether a class is active.
const ZERO: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchemeKind {
    X11,
    X12,
    X13,
    X2,
    X3,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] = [SchemeKind::X11, SchemeKind::X12, SchemeKind::X13, SchemeKind::X2, SchemeKind::X3];

    pub fn mode(self) -> ProfileMode {
        match self {
            SchemeKind::X11 | SchemeKind::X12 | SchemeKind::X13 => ProfileMode::Asymmetric,
            SchemeKind::X2 | SchemeKind::X3 => ProfileMode::PartiallySymmetric,
        }
    }

    /// X3 is the only scheme that works from a noisy delayed estimate.
    pub fn delayed_csit(self) -> DelayedCsit {
        match self {
            SchemeKind::X3 => DelayedCsit::Noisy,
            _ => DelayedCsit::Perfect,
        }
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "X11" => Ok(SchemeKind::X11),
            "X12" => Ok(SchemeKind::X12),
            "X13" => Ok(SchemeKind::X13),
            "X2" => Ok(SchemeKind::X2),
            "X3" => Ok(SchemeKind::X3),
            _ => Err(Error::Malformed(format!("unknown scheme kind {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DelayedCsit {
    Perfect,
    Noisy,
}

/// Who gets the fresh common information.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CommonAssignment {
    /// Multi-phase scheme; X3 gives a fraction `omega` of its first-phase common bits to user 1.
    Split { omega: f64 },
    /// Truncated to the terminal block, fresh common bits to user 1.
    User1,
    /// Truncated to the terminal block, fresh common bits to user 2.
    User2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymbolClass {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "a'")]
    APrime,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "b'")]
    BPrime,
    #[serde(rename = "c")]
    C,
}

impl SymbolClass {
    pub const ALL: [SymbolClass; 5] =
        [SymbolClass::A, SymbolClass::APrime, SymbolClass::B, SymbolClass::BPrime, SymbolClass::C];

    pub fn label(self) -> &'static str {
        match self {
            SymbolClass::A => "a",
            SymbolClass::APrime => "a'",
            SymbolClass::B => "b",
            SymbolClass::BPrime => "b'",
            SymbolClass::C => "c",
        }
    }

    /// Intended receiver of a private class.
    pub fn owner(self) -> Option<User> {
        match self {
            SymbolClass::A | SymbolClass::APrime => Some(User::One),
            SymbolClass::B | SymbolClass::BPrime => Some(User::Two),
            SymbolClass::C => None,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrecoderTag {
    /// Zero-forced against user 2's current estimate.
    OrthToGHat,
    /// Zero-forced against user 1's current estimate.
    OrthToHHat,
    Random,
}

impl PrecoderTag {
    /// User whose current estimate this precoder nulls.
    pub fn nulls(self) -> Option<User> {
        match self {
            PrecoderTag::OrthToGHat => Some(User::Two),
            PrecoderTag::OrthToHHat => Some(User::One),
            PrecoderTag::Random => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassAllocation {
    /// Power exponent: the class is sent with power `P^power`.
    pub power: f64,
    pub rate: f64,
    pub precoder: PrecoderTag,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CommonRole {
    /// Carries quantized interference from the previous phase.
    Retransmit,
    /// Carries new information, a fraction `share1` of it for user 1.
    Fresh { share1: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommonCoding {
    /// One scalar codeword per slot.
    PerSlot,
    /// One lattice codeword across the `T` slots of a block.
    Block,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlotAllocation {
    classes: [Option<ClassAllocation>; 5],
    pub common_role: CommonRole,
    pub common_coding: CommonCoding,
    /// Quantization prelog `φ` spent on the interference overheard by user 1 and user 2.
    pub quant: [f64; 2],
}

impl SlotAllocation {
    fn empty() -> Self {
        SlotAllocation {
            classes: [None; 5],
            common_role: CommonRole::Retransmit,
            common_coding: CommonCoding::PerSlot,
            quant: [0.0, 0.0],
        }
    }

    fn set(&mut self, class: SymbolClass, power: f64, rate: f64, precoder: PrecoderTag) {
        let (power, rate) = (power.max(0.0), rate.max(0.0));
        self.classes[class.index()] = (rate > ZERO).then_some(ClassAllocation { power, rate, precoder });
    }

    pub fn get(&self, class: SymbolClass) -> Option<&ClassAllocation> {
        self.classes[class.index()].as_ref()
    }

    pub fn active(&self) -> impl Iterator<Item = (SymbolClass, &ClassAllocation)> {
        SymbolClass::ALL.into_iter().filter_map(|k| self.get(k).map(|a| (k, a)))
    }

    /// Sum of the private rates intended for `user`.
    pub fn private_rate(&self, user: User) -> f64 {
        self.active().filter(|(k, _)| k.owner() == Some(user)).map(|(_, a)| a.rate).sum()
    }

    pub fn quant_of(&self, user: User) -> f64 {
        self.quant[user.index()]
    }

    /// Fresh common rate credited to `user`.
    pub fn fresh_common(&self, user: User) -> f64 {
        match (self.get(SymbolClass::C), self.common_role) {
            (Some(c), CommonRole::Fresh { share1 }) => match user {
                User::One => c.rate * share1,
                User::Two => c.rate * (1.0 - share1),
            },
            _ => 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseRole {
    First,
    Middle,
    Last,
    /// The single block of a truncated variant.
    Terminal,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Derived {
    X11 { delta: f64, mu: f64, eps1: f64, eps2: f64 },
    X12 { eta: f64, phi1: f64, phi2: f64 },
    X3 { xi: f64, zeta: f64 },
    None,
}

/// Free parameters of [`SchemeConfig::build`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeOptions {
    /// Phase count `S`; ignored by X2 and by truncated variants.
    pub phases: usize,
    /// Duration of the first phase in blocks.
    pub t1: f64,
    pub delta: Option<f64>,
    pub omega: Option<f64>,
    pub common: Option<CommonAssignment>,
    pub round_durations: bool,
}

impl Default for SchemeOptions {
    fn default() -> Self {
        SchemeOptions { phases: 3, t1: 1.0, delta: None, omega: None, common: None, round_durations: false }
    }
}

/// A fully resolved, immutable scheme instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchemeConfig {
    kind: SchemeKind,
    profile: QualityProfile,
    common: CommonAssignment,
    t1: f64,
    rounded: bool,
    durations: Vec<f64>,
    derived: Derived,
    abar1: f64,
    abar2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub phase: usize,
    /// `T_s · Σ_t (φ(ι^(1)) + φ(ι^(2)))`.
    pub produced: f64,
    /// `T_{s+1} · Σ_t r_c` of the next phase; zero after the last phase.
    pub consumed: f64,
    pub balanced: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantizationLedger {
    pub entries: Vec<LedgerEntry>,
    pub residual_exponent_target: f64,
}

impl QuantizationLedger {
    pub fn balanced(&self) -> bool {
        self.entries.iter().all(|e| e.balanced)
    }
}

/// `|a − b| ≤ 1e−9`, relative once the values exceed one.
pub fn ledger_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

impl SchemeConfig {
    pub fn build(kind: SchemeKind, profile: &QualityProfile, opts: SchemeOptions) -> Result<Self> {
        profile.require(kind.mode())?;
        if !(opts.t1.is_finite() && opts.t1 > 0.0) {
            return Err(Error::Domain(format!("T1 = {} must be positive", opts.t1)));
        }
        let abar1 = profile.average_exponent(User::One);
        let abar2 = profile.average_exponent(User::Two);
        let common = resolve_common(kind, &opts)?;
        let truncated = !matches!(common, CommonAssignment::Split { .. });
        let s = opts.phases;
        let t1 = opts.t1;

        let (durations, derived) = if truncated {
            (vec![1.0], Derived::None)
        } else {
            match kind {
                SchemeKind::X11 => {
                    if !is_case1(abar1, abar2) {
                        return Err(Error::WrongCase(format!(
                            "X11 needs 2*abar1 - abar2 < 1, got {}",
                            2.0 * abar1 - abar2
                        )));
                    }
                    need_phases(kind, s, 3)?;
                    // Every middle-phase slot also needs α_t^(1) + Δ < 1, or `a` outgrows the power budget.
                    let top = profile.alpha(User::One).iter().copied().fold(0.0, f64::max);
                    let hi = ((1.0 - 2.0 * abar1 + abar2) / 3.0).min(1.0 - top);
                    if hi <= ZERO {
                        return Err(Error::Degenerate(format!("X11 needs max alpha1 < 1, got {top}")));
                    }
                    let delta = opts.delta.unwrap_or(hi / 2.0);
                    if !(delta > 0.0 && delta < hi) {
                        return Err(Error::InvalidDelta(format!("delta = {delta} outside (0, {hi})")));
                    }
                    let den = 1.0 - abar1 - delta;
                    if den <= ZERO || 1.0 - abar2 <= ZERO {
                        return Err(Error::Degenerate("1 - abar1 - delta or 1 - abar2 vanishes".into()));
                    }
                    let mu = (abar1 - abar2 + 2.0 * delta) / den;
                    let eps1 = (2.0 - abar1 - abar2) / den;
                    let eps2 = (abar1 - abar2 + 2.0 * delta) / (1.0 - abar2);
                    (geometric(t1, eps1, mu, eps2, s), Derived::X11 { delta, mu, eps1, eps2 })
                }
                SchemeKind::X12 => {
                    need_phases(kind, s, 3)?;
                    if 1.0 - abar1 <= ZERO {
                        return Err(Error::Degenerate("X12 needs abar1 < 1".into()));
                    }
                    let eta = (abar1 - abar2) / (1.0 - abar1);
                    let phi1 = (1.0 - abar2) / (1.0 - abar1);
                    let phi2 = (abar1 - abar2) / (1.0 - abar2);
                    (geometric(t1, phi1, eta, phi2, s), Derived::X12 { eta, phi1, phi2 })
                }
                SchemeKind::X13 => unreachable!("X13 is always truncated"),
                SchemeKind::X2 => (vec![1.0, 2.0], Derived::None),
                SchemeKind::X3 => {
                    need_phases(kind, s, 2)?;
                    let beta = profile.beta();
                    let abar = 0.5 * (abar1 + abar2);
                    if 1.0 - beta <= ZERO || 1.0 - abar <= ZERO {
                        return Err(Error::Degenerate("X3 needs beta < 1 and abar < 1".into()));
                    }
                    let xi = 2.0 * (beta - abar) / (1.0 - beta);
                    let zeta = 2.0 * (beta - abar) / (1.0 - abar);
                    let mut d: Vec<f64> = (1..s).map(|i| t1 * xi.powi(i as i32 - 1)).collect();
                    d.push(d[s - 2] * zeta);
                    (d, Derived::X3 { xi, zeta })
                }
            }
        };
        let durations = if opts.round_durations {
            durations.iter().map(|d| (d + 1e-9).floor().max(1.0)).collect()
        } else {
            durations
        };
        Ok(SchemeConfig {
            kind,
            profile: profile.clone(),
            common,
            t1,
            rounded: opts.round_durations,
            durations,
            derived,
            abar1,
            abar2,
        })
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn profile(&self) -> &QualityProfile {
        &self.profile
    }

    pub fn common(&self) -> CommonAssignment {
        self.common
    }

    pub fn derived(&self) -> Derived {
        self.derived
    }

    pub fn durations(&self) -> &[f64] {
        &self.durations
    }

    pub fn phase_count(&self) -> usize {
        self.durations.len()
    }

    pub fn is_rounded(&self) -> bool {
        self.rounded
    }

    pub fn slots(&self) -> usize {
        self.profile.slots()
    }

    /// Role of 1-based phase `phase`.
    pub fn role(&self, phase: usize) -> Result<PhaseRole> {
        let s = self.phase_count();
        if phase == 0 || phase > s {
            return Err(Error::OutOfRange(format!("phase {phase} not in 1..={s}")));
        }
        Ok(if s == 1 {
            PhaseRole::Terminal
        } else if phase == 1 {
            PhaseRole::First
        } else if phase == s {
            PhaseRole::Last
        } else {
            PhaseRole::Middle
        })
    }

    fn abar(&self) -> f64 {
        0.5 * (self.abar1 + self.abar2)
    }

    /// Exponents, rates and precoders of every class in slot `t` (1-based) of `phase`.
    pub fn allocation(&self, phase: usize, t: usize) -> Result<SlotAllocation> {
        use PrecoderTag::{OrthToGHat as OG, OrthToHHat as OH, Random as R};
        use SymbolClass::*;
        let role = self.role(phase)?;
        let big_t = self.slots();
        if t == 0 || t > big_t {
            return Err(Error::OutOfRange(format!("slot {t} not in 1..={big_t}")));
        }
        let a1 = self.profile.alpha(User::One)[t - 1];
        let a2 = self.profile.alpha(User::Two)[t - 1];
        let beta = self.profile.beta();
        let mut s = SlotAllocation::empty();
        let fresh = |s: &mut SlotAllocation| {
            s.common_role = CommonRole::Fresh {
                share1: match self.common {
                    CommonAssignment::Split { omega } => omega,
                    CommonAssignment::User1 => 1.0,
                    CommonAssignment::User2 => 0.0,
                },
            }
        };
        match (self.kind, role) {
            (SchemeKind::X11, PhaseRole::First) => {
                s.set(A, 1.0, 1.0, OG);
                s.set(APrime, 1.0 - a2, 1.0 - a2, R);
                s.set(B, 1.0, 1.0, OH);
                s.set(BPrime, 1.0 - a1, 1.0 - a1, R);
                s.quant = [1.0 - a1, 1.0 - a2];
            }
            (SchemeKind::X11, PhaseRole::Middle) => {
                let d = self.delta();
                s.set(C, 1.0, 1.0 - a1 - d, R);
                s.set(A, a1 + d, a1 + d, OG);
                s.set(APrime, a1 - a2 + d, a1 - a2 + d, R);
                s.set(B, a1 + d, a1 + d, OH);
                s.set(BPrime, d, d, R);
                s.quant = [d, a1 - a2 + d];
            }
            (SchemeKind::X11 | SchemeKind::X12, PhaseRole::Last) | (SchemeKind::X13, PhaseRole::Terminal) => {
                s.set(C, 1.0, 1.0 - a2, R);
                s.set(A, a2, a2, OG);
                s.set(B, a2, a2, OH);
                if role == PhaseRole::Terminal {
                    fresh(&mut s);
                }
            }
            (SchemeKind::X12, PhaseRole::First) => {
                s.set(A, 1.0, 1.0, OG);
                s.set(APrime, 1.0 - a2, 1.0 - a2, R);
                s.set(B, a1, a1, OH);
                s.quant = [0.0, 1.0 - a2];
            }
            (SchemeKind::X12, PhaseRole::Middle) => {
                s.set(C, 1.0, 1.0 - a1, R);
                s.set(A, a1, a1, OG);
                s.set(APrime, a1 - a2, a1 - a2, R);
                s.set(B, a1, a1, OH);
                s.quant = [0.0, a1 - a2];
            }
            (SchemeKind::X2, PhaseRole::First) => {
                s.set(A, 1.0, 1.0, OG);
                s.set(APrime, 1.0 - a2, 1.0 - a2, R);
                s.set(B, 1.0, 1.0, OH);
                s.set(BPrime, 1.0 - a1, 1.0 - a1, R);
                s.quant = [1.0 - a1, 1.0 - a2];
            }
            (SchemeKind::X3, PhaseRole::First | PhaseRole::Middle) => {
                s.set(C, 1.0, 1.0 - beta, R);
                s.set(A, beta, beta, OG);
                s.set(APrime, beta - a2, beta - a2, R);
                s.set(B, beta, beta, OH);
                s.set(BPrime, beta - a1, beta - a1, R);
                s.quant = [beta - a1, beta - a2];
                if role == PhaseRole::First {
                    fresh(&mut s);
                }
            }
            (SchemeKind::X2 | SchemeKind::X3, PhaseRole::Last | PhaseRole::Terminal) => {
                s.set(C, 1.0, 1.0 - self.abar(), R);
                s.set(A, a2, a2, OG);
                s.set(B, a1, a1, OH);
                s.common_coding = CommonCoding::Block;
                if role == PhaseRole::Terminal {
                    fresh(&mut s);
                }
            }
            (kind, role) => unreachable!("{kind:?} has no {role:?} phase"),
        }
        s.quant = [s.quant[0].max(0.0), s.quant[1].max(0.0)];
        Ok(s)
    }

    fn delta(&self) -> f64 {
        match self.derived {
            Derived::X11 { delta, .. } => delta,
            _ => 0.0,
        }
    }

    fn phase_sum(&self, phase: usize, f: impl Fn(&SlotAllocation) -> f64) -> f64 {
        (1..=self.slots()).map(|t| f(&self.allocation(phase, t).expect("indices in range"))).sum()
    }

    /// Quantized-interference prelog produced by each phase against the common prelog that carries it next.
    pub fn quantization_ledger(&self) -> QuantizationLedger {
        let s = self.phase_count();
        let entries = (1..=s)
            .map(|phase| {
                let produced = self.durations[phase - 1] * self.phase_sum(phase, |a| a.quant[0] + a.quant[1]);
                let consumed = if phase < s {
                    self.durations[phase]
                        * self.phase_sum(phase + 1, |a| match (a.get(SymbolClass::C), a.common_role) {
                            (Some(c), CommonRole::Retransmit) => c.rate,
                            _ => 0.0,
                        })
                } else {
                    0.0
                };
                LedgerEntry { phase, produced, consumed, balanced: ledger_close(produced, consumed) }
            })
            .collect();
        QuantizationLedger { entries, residual_exponent_target: 0.0 }
    }

    /// Exact DoF of this finite instance: duration-weighted rate prelogs over total duration.
    pub fn dof_finite(&self) -> DofPoint {
        let total: f64 = self.durations.iter().sum::<f64>() * self.slots() as f64;
        let mut d = [0.0f64; 2];
        for (i, &dur) in self.durations.iter().enumerate() {
            for user in [User::One, User::Two] {
                d[user.index()] += dur * self.phase_sum(i + 1, |a| a.private_rate(user) + a.fresh_common(user));
            }
        }
        DofPoint::new(d[0] / total, d[1] / total)
    }

    /// Limit of [`dof_finite`](Self::dof_finite) as the phase count grows.
    pub fn dof_limit(&self) -> Result<DofPoint> {
        dof_limit(self.kind, &self.profile, self.common)
    }
}

fn need_phases(kind: SchemeKind, s: usize, min: usize) -> Result<()> {
    if s < min {
        Err(Error::Domain(format!("{kind:?} needs at least {min} phases, got {s}")))
    } else {
        Ok(())
    }
}

/// `T_1, T_1·f·r^0, …, T_1·f·r^{S−3}, T_{S−1}·l`.
fn geometric(t1: f64, first: f64, ratio: f64, last: f64, s: usize) -> Vec<f64> {
    let mut d = vec![t1];
    for i in 2..s {
        d.push(t1 * first * ratio.powi(i as i32 - 2));
    }
    d.push(d[s - 2] * last);
    d
}

fn resolve_common(kind: SchemeKind, opts: &SchemeOptions) -> Result<CommonAssignment> {
    let omega = opts.omega.unwrap_or(0.5);
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::Domain(format!("omega = {omega} outside [0,1]")));
    }
    let common = match (kind, opts.common) {
        (SchemeKind::X13, None | Some(CommonAssignment::Split { .. })) => CommonAssignment::User2,
        (SchemeKind::X13, Some(c)) => c,
        (_, None) => CommonAssignment::Split { omega },
        (SchemeKind::X11 | SchemeKind::X12, Some(CommonAssignment::Split { .. })) => CommonAssignment::Split { omega },
        (SchemeKind::X11 | SchemeKind::X12, Some(c)) => {
            return Err(Error::Domain(format!("{kind:?} has no truncated variant {c:?}; use X13")));
        }
        (_, Some(CommonAssignment::Split { omega })) if !(0.0..=1.0).contains(&omega) => {
            return Err(Error::Domain(format!("omega = {omega} outside [0,1]")));
        }
        (_, Some(c)) => c,
    };
    Ok(common)
}

/// Closed-form limiting DoF pair of a scheme.
pub fn dof_limit(kind: SchemeKind, p: &QualityProfile, common: CommonAssignment) -> Result<DofPoint> {
    p.require(kind.mode())?;
    let abar1 = p.average_exponent(User::One);
    let abar2 = p.average_exponent(User::Two);
    let abar = 0.5 * (abar1 + abar2);
    Ok(match (kind, common) {
        (SchemeKind::X11, _) => {
            if !is_case1(abar1, abar2) {
                return Err(Error::WrongCase("X11 needs 2*abar1 - abar2 < 1".into()));
            }
            corner_c(abar1, abar2)
        }
        (SchemeKind::X12, _) => {
            if is_case1(abar1, abar2) {
                DofPoint::new(1.0, abar1)
            } else {
                DofPoint::new(1.0, (1.0 + abar2) / 2.0)
            }
        }
        (SchemeKind::X13, CommonAssignment::User1) => DofPoint::new(1.0, abar2),
        (SchemeKind::X13, _) => DofPoint::new(abar2, 1.0),
        (SchemeKind::X2 | SchemeKind::X3, CommonAssignment::User1) => DofPoint::new(1.0, abar),
        (SchemeKind::X2 | SchemeKind::X3, CommonAssignment::User2) => DofPoint::new(abar, 1.0),
        (SchemeKind::X2, CommonAssignment::Split { .. }) => {
            let k = (2.0 + abar) / 3.0;
            DofPoint::new(k, k)
        }
        (SchemeKind::X3, CommonAssignment::Split { omega: w }) => {
            let b = p.beta().min(beta_threshold(abar));
            DofPoint::new(
                b * (2.0 - 3.0 * w) + abar * (2.0 * w - 1.0) + w,
                b * (3.0 * w - 1.0) + abar * (1.0 - 2.0 * w) + 1.0 - w,
            )
        }
    })
}
