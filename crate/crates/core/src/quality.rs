//! CSIT quality profiles.
//!
//! A profile holds, for each of the `T` slots of a coherence block, the
//! exponent `α_t` at which the current estimation-error power of each user
//! decays (`P^{-α_t}`), plus the exponent `β` of the delayed estimate.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for every exponent comparison.
pub const PROFILE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum User {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl User {
    pub fn index(self) -> usize {
        match self {
            User::One => 0,
            User::Two => 1,
        }
    }

    pub fn other(self) -> User {
        match self {
            User::One => User::Two,
            User::Two => User::One,
        }
    }
}

impl fmt::Display for User {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index() + 1)
    }
}

/// Which relation between the two users' exponent sequences is required.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileMode {
    /// Both users share the same sequence.
    Symmetric,
    /// Sequences may differ but share a common average.
    PartiallySymmetric,
    /// `α_t^(2) ≤ α_t^(1)` slot by slot.
    Asymmetric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    OutOfRange { user: User, slot: usize, value: f64 },
    NonMonotone { user: User, slot: usize, prev: f64, value: f64 },
    AboveBeta { user: User, slot: usize, value: f64, beta: f64 },
    BetaOutOfRange { user: User, value: f64 },
    UnequalBeta { beta1: f64, beta2: f64 },
    NotSymmetric { slot: usize, alpha1: f64, alpha2: f64 },
    UnequalAverages { abar1: f64, abar2: f64 },
    AsymmetricOrder { slot: usize, alpha1: f64, alpha2: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutOfRange { user, slot, value } => {
                write!(f, "alpha{user}[{slot}] = {value} outside [0,1]")
            }
            Violation::NonMonotone { user, slot, prev, value } => {
                write!(f, "alpha{user}[{slot}] = {value} < alpha{user}[{}] = {prev}", slot - 1)
            }
            Violation::AboveBeta { user, slot, value, beta } => {
                write!(f, "alpha{user}[{slot}] = {value} exceeds beta = {beta}")
            }
            Violation::BetaOutOfRange { user, value } => {
                write!(f, "beta{user} = {value} outside [0,1]")
            }
            Violation::UnequalBeta { beta1, beta2 } => {
                write!(f, "per-user delayed exponents differ ({beta1} vs {beta2})")
            }
            Violation::NotSymmetric { slot, alpha1, alpha2 } => {
                write!(f, "slot {slot}: alpha1 = {alpha1} differs from alpha2 = {alpha2}")
            }
            Violation::UnequalAverages { abar1, abar2 } => {
                write!(f, "averages differ: abar1 = {abar1}, abar2 = {abar2}")
            }
            Violation::AsymmetricOrder { slot, alpha1, alpha2 } => {
                write!(f, "slot {slot}: alpha2 = {alpha2} exceeds alpha1 = {alpha1}")
            }
        }
    }
}

/// Every violated constraint of a profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violations(pub Vec<Violation>);

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Immutable per-slot CSIT exponents for both users.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileFile", into = "ProfileFile")]
pub struct QualityProfile {
    alpha1: Vec<f64>,
    alpha2: Vec<f64>,
    beta1: f64,
    beta2: f64,
}

/// On-disk shape: `{"T": 3, "alpha1": [...], "alpha2": [...], "beta": 0.5}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    #[serde(rename = "T")]
    t: usize,
    alpha1: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha2: Option<Vec<f64>>,
    beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta2: Option<f64>,
}

impl TryFrom<ProfileFile> for QualityProfile {
    type Error = Error;

    fn try_from(f: ProfileFile) -> Result<Self> {
        if f.alpha1.len() != f.t {
            return Err(Error::Malformed(format!(
                "T = {} but alpha1 has {} entries",
                f.t,
                f.alpha1.len()
            )));
        }
        let alpha2 = f.alpha2.unwrap_or_else(|| f.alpha1.clone());
        QualityProfile::with_betas(f.alpha1, alpha2, f.beta, f.beta2.unwrap_or(f.beta))
    }
}

impl From<QualityProfile> for ProfileFile {
    fn from(p: QualityProfile) -> Self {
        let alpha2 = (p.alpha2 != p.alpha1).then(|| p.alpha2.clone());
        let beta2 = (p.beta2 != p.beta1).then_some(p.beta2);
        ProfileFile { t: p.alpha1.len(), alpha1: p.alpha1, alpha2, beta: p.beta1, beta2 }
    }
}

impl QualityProfile {
    /// Both users with their own sequences and a common `β`.
    pub fn new(alpha1: Vec<f64>, alpha2: Vec<f64>, beta: f64) -> Result<Self> {
        Self::with_betas(alpha1, alpha2, beta, beta)
    }

    /// Same sequence for both users.
    pub fn symmetric(alpha: Vec<f64>, beta: f64) -> Result<Self> {
        Self::new(alpha.clone(), alpha, beta)
    }

    /// Per-user delayed exponents. Only structural checks happen here; see [`validate`](Self::validate).
    pub fn with_betas(alpha1: Vec<f64>, alpha2: Vec<f64>, beta1: f64, beta2: f64) -> Result<Self> {
        if alpha1.is_empty() {
            return Err(Error::Malformed("profile needs T >= 1 slots".into()));
        }
        if alpha1.len() != alpha2.len() {
            return Err(Error::Malformed(format!(
                "alpha1 has {} slots, alpha2 has {}",
                alpha1.len(),
                alpha2.len()
            )));
        }
        let finite = alpha1.iter().chain(&alpha2).chain([&beta1, &beta2]).all(|x| x.is_finite());
        if !finite {
            return Err(Error::Malformed("exponents must be finite".into()));
        }
        Ok(QualityProfile { alpha1, alpha2, beta1, beta2 })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("profile serializes")
    }

    /// Slots per coherence block.
    pub fn slots(&self) -> usize {
        self.alpha1.len()
    }

    pub fn alpha(&self, user: User) -> &[f64] {
        match user {
            User::One => &self.alpha1,
            User::Two => &self.alpha2,
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta1
    }

    pub fn beta_of(&self, user: User) -> f64 {
        match user {
            User::One => self.beta1,
            User::Two => self.beta2,
        }
    }

    /// `ᾱ = (1/T) Σ_t α_t`.
    pub fn average_exponent(&self, user: User) -> f64 {
        let a = self.alpha(user);
        a.iter().sum::<f64>() / a.len() as f64
    }

    /// Fraction of the block, from its start, during which the current CSIT has exponent zero.
    pub fn fractional_delay(&self, user: User) -> f64 {
        let a = self.alpha(user);
        let zeros = a.iter().take_while(|x| x.abs() <= PROFILE_TOL).count();
        zeros as f64 / a.len() as f64
    }

    pub fn summary(&self) -> ProfileSummary {
        ProfileSummary {
            abar1: self.average_exponent(User::One),
            abar2: self.average_exponent(User::Two),
            gamma1: self.fractional_delay(User::One),
            gamma2: self.fractional_delay(User::Two),
        }
    }

    /// Collects every violated ordering/range constraint for `mode`.
    pub fn validate(&self, mode: ProfileMode) -> std::result::Result<(), Violations> {
        let mut out = Vec::new();
        for user in [User::One, User::Two] {
            let beta = self.beta_of(user);
            if !(-PROFILE_TOL..=1.0 + PROFILE_TOL).contains(&beta) {
                out.push(Violation::BetaOutOfRange { user, value: beta });
            }
            let a = self.alpha(user);
            for (t, &x) in a.iter().enumerate() {
                if !(-PROFILE_TOL..=1.0 + PROFILE_TOL).contains(&x) {
                    out.push(Violation::OutOfRange { user, slot: t, value: x });
                }
                if t > 0 && x < a[t - 1] - PROFILE_TOL {
                    out.push(Violation::NonMonotone { user, slot: t, prev: a[t - 1], value: x });
                }
            }
            let last = a[a.len() - 1];
            if last > beta + PROFILE_TOL {
                out.push(Violation::AboveBeta { user, slot: a.len() - 1, value: last, beta });
            }
        }
        if (self.beta1 - self.beta2).abs() > PROFILE_TOL {
            out.push(Violation::UnequalBeta { beta1: self.beta1, beta2: self.beta2 });
        }
        match mode {
            ProfileMode::Symmetric => {
                for (t, (&a1, &a2)) in self.alpha1.iter().zip(&self.alpha2).enumerate() {
                    if (a1 - a2).abs() > PROFILE_TOL {
                        out.push(Violation::NotSymmetric { slot: t, alpha1: a1, alpha2: a2 });
                    }
                }
            }
            ProfileMode::PartiallySymmetric => {
                let (abar1, abar2) = (self.average_exponent(User::One), self.average_exponent(User::Two));
                if (abar1 - abar2).abs() > PROFILE_TOL {
                    out.push(Violation::UnequalAverages { abar1, abar2 });
                }
            }
            ProfileMode::Asymmetric => {
                for (t, (&a1, &a2)) in self.alpha1.iter().zip(&self.alpha2).enumerate() {
                    if a2 > a1 + PROFILE_TOL {
                        out.push(Violation::AsymmetricOrder { slot: t, alpha1: a1, alpha2: a2 });
                    }
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(Violations(out))
        }
    }

    /// [`validate`](Self::validate) lifted into the crate error type.
    pub fn require(&self, mode: ProfileMode) -> Result<()> {
        self.validate(mode).map_err(Error::InvalidProfile)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileSummary {
    pub abar1: f64,
    pub abar2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn worked_example_profile_is_valid() {
        let p = QualityProfile::symmetric(vec![0.0, 4.0 / 9.0, 5.0 / 9.0], 5.0 / 9.0).unwrap();
        assert!(p.validate(ProfileMode::Symmetric).is_ok());
        assert!((p.average_exponent(User::One) - 1.0 / 3.0).abs() < 1e-15);
        assert!((p.fractional_delay(User::One) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ordering_violations_are_reported_with_index() {
        let p = QualityProfile::symmetric(vec![0.5, 0.3], 1.0).unwrap();
        let v = p.validate(ProfileMode::Symmetric).unwrap_err();
        assert!(v.0.iter().any(|x| matches!(x, Violation::NonMonotone { slot: 1, .. })));

        let p = QualityProfile::symmetric(vec![0.2, 0.6], 0.5).unwrap();
        let v = p.validate(ProfileMode::Symmetric).unwrap_err();
        assert!(v.0.iter().any(|x| matches!(x, Violation::AboveBeta { slot: 1, .. })));
    }

    #[test]
    fn delay_counts_leading_zeros_only() {
        let p = QualityProfile::symmetric(vec![0.0, 0.0, 1.0], 1.0).unwrap();
        assert!((p.fractional_delay(User::One) - 2.0 / 3.0).abs() < 1e-15);
        let p = QualityProfile::symmetric(vec![0.1, 0.2], 1.0).unwrap();
        assert_eq!(p.fractional_delay(User::Two), 0.0);
    }

    #[test]
    fn empty_profile_is_malformed() {
        assert!(matches!(QualityProfile::symmetric(vec![], 1.0), Err(Error::Malformed(_))));
        assert!(QualityProfile::from_json(r#"{"T":0,"alpha1":[],"beta":1}"#).is_err());
        assert!(QualityProfile::from_json(r#"{"T":2,"alpha1":[0.1],"beta":1}"#).is_err());
    }

    #[test]
    fn json_round_trip_and_default_alpha2() {
        let p = QualityProfile::from_json(r#"{"T":2,"alpha1":[0.3,0.5],"beta":1}"#).unwrap();
        assert_eq!(p.alpha(User::Two), &[0.3, 0.5]);
        let q = QualityProfile::from_json(&p.to_json()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn modes() {
        let p = QualityProfile::new(vec![0.2, 0.6], vec![0.4, 0.4], 1.0).unwrap();
        assert!(p.validate(ProfileMode::PartiallySymmetric).is_ok());
        assert!(p.validate(ProfileMode::Symmetric).is_err());
        assert!(p.validate(ProfileMode::Asymmetric).is_err());
        let p = QualityProfile::with_betas(vec![0.2], vec![0.2], 0.5, 0.6).unwrap();
        assert!(p.validate(ProfileMode::Symmetric).is_err());
    }
}
