//! Closed-form answers to "how much CSIT do I need for symmetric DoF `d′`?".

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quality::QualityProfile;
use crate::region::DofPoint;

/// Largest slot count tried when looking for a block length with integral `γ·T`.
pub const WITNESS_MAX_SLOTS: usize = 720;

const EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QualityNote {
    /// `d′ ≤ 2/3` is reachable with delayed CSIT alone.
    NoCurrentCsitNeeded,
    /// `d′ = 1` needs perfect, immediately available CSIT.
    PerfectImmediateCsit,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinQuality {
    pub abar_min: f64,
    pub beta_min: f64,
    pub note: Option<QualityNote>,
}

fn check_dprime(dprime: f64) -> Result<()> {
    if !dprime.is_finite() || dprime < 0.0 {
        return Err(Error::Domain(format!("d' = {dprime} must be a nonnegative number")));
    }
    if dprime > 1.0 + EPS {
        return Err(Error::Infeasible(format!("d' = {dprime} exceeds one DoF per user")));
    }
    Ok(())
}

/// Minimum average current exponent and delayed exponent for symmetric DoF `d′`.
pub fn solve_min_quality(dprime: f64) -> Result<MinQuality> {
    check_dprime(dprime)?;
    if dprime < 2.0 / 3.0 {
        return Ok(MinQuality { abar_min: 0.0, beta_min: 0.0, note: Some(QualityNote::NoCurrentCsitNeeded) });
    }
    let note = ((dprime - 1.0).abs() <= EPS).then_some(QualityNote::PerfectImmediateCsit);
    Ok(MinQuality {
        abar_min: (3.0 * dprime - 2.0).max(0.0),
        beta_min: (2.0 * dprime - 1.0).max(0.0),
        note,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum DelayConstraint {
    None,
    AlphaMax(f64),
    BetaMax(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxDelay {
    pub gamma: f64,
    /// Zero prefix followed by a constant suffix.
    pub witness: QualityProfile,
}

/// Largest fraction of the block that may pass without current CSIT while keeping `(d′, d′)`.
pub fn solve_max_delay(dprime: f64, constraint: DelayConstraint) -> Result<MaxDelay> {
    check_dprime(dprime)?;
    let need = (3.0 * dprime - 2.0).max(0.0);
    let beta_need = (2.0 * dprime - 1.0).max(0.0);
    let (suffix, beta) = match constraint {
        DelayConstraint::None => (1.0, 1.0),
        DelayConstraint::AlphaMax(a) => {
            check_unit(a)?;
            if a < need - EPS {
                return Err(Error::Infeasible(format!(
                    "alpha_max = {a} is below the required average 3d'-2 = {need}"
                )));
            }
            (a, a.max(beta_need))
        }
        DelayConstraint::BetaMax(b) => {
            check_unit(b)?;
            if b < beta_need - EPS {
                return Err(Error::Infeasible(format!(
                    "beta_max = {b} is below the required 2d'-1 = {beta_need}"
                )));
            }
            (b, b)
        }
    };
    let gamma = if need <= EPS { 1.0 } else { (1.0 - need / suffix).clamp(0.0, 1.0) };
    let witness = witness_profile(gamma, suffix, beta)?;
    Ok(MaxDelay { gamma, witness })
}

fn check_unit(x: f64) -> Result<()> {
    if x.is_finite() && (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("constraint value {x} outside [0,1]")))
    }
}

/// Shortest block with `γ·T` integral; otherwise the zero prefix is rounded down, which only raises the average.
fn witness_profile(gamma: f64, suffix: f64, beta: f64) -> Result<QualityProfile> {
    let t = (1..=WITNESS_MAX_SLOTS)
        .find(|&t| {
            let x = gamma * t as f64;
            (x - x.round()).abs() < 1e-9
        })
        .unwrap_or(WITNESS_MAX_SLOTS);
    let zeros = ((gamma * t as f64) + 1e-9).floor() as usize;
    let alpha: Vec<f64> = (0..t).map(|i| if i < zeros { 0.0 } else { suffix }).collect();
    QualityProfile::symmetric(alpha, beta)
}

/// DoF pair reachable when user 2's average drops from `ᾱ` to `ᾱ′`, and the loss against `(ᾱ′, ᾱ′)`.
pub fn asymmetry_penalty(abar: f64, abar_prime: f64) -> Result<(DofPoint, f64)> {
    if !(0.0..=1.0).contains(&abar) || !(0.0..=1.0).contains(&abar_prime) {
        return Err(Error::Domain("exponents must lie in [0,1]".into()));
    }
    if abar_prime >= abar {
        return Err(Error::Domain(format!("need abar' < abar, got {abar_prime} >= {abar}")));
    }
    let shortfall = (abar - abar_prime) / 6.0;
    let pair = DofPoint::new((2.0 + abar) / 3.0, (2.0 + abar_prime) / 3.0 - shortfall);
    Ok((pair, shortfall))
}
