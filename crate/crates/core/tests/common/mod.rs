// Oracles shared by the integration tests. Power and rate exponents are
// transcribed straight from the scheme summary tables, independent of the
// allocation code under test.
#![allow(dead_code)]

use miso_dof::quality::QualityProfile;
use miso_dof::scheme::{Derived, SchemeConfig, SchemeKind};
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Role {
    First,
    Middle,
    Last,
}

/// One row of a summary table: class label, transmit power exponent, rate prelog.
#[derive(Clone, Copy, Debug)]
pub struct Row {
    pub class: &'static str,
    pub power: f64,
    pub rate: f64,
}

fn row(class: &'static str, power: f64, rate: f64) -> Row {
    Row { class, power, rate }
}

pub fn role_of(cfg: &SchemeConfig, phase: usize) -> Role {
    let s = cfg.phase_count();
    if cfg.kind() == SchemeKind::X13 || s == 1 || phase == s {
        Role::Last
    } else if phase == 1 {
        Role::First
    } else {
        Role::Middle
    }
}

/// Rows for slot exponents `a1 = α_t^(1)`, `a2 = α_t^(2)`. The `c` rate of block-coded
/// last phases is per vector and returned as NaN here.
pub fn table(kind: SchemeKind, role: Role, a1: f64, a2: f64, beta: f64, delta: f64) -> Vec<Row> {
    use Role::*;
    use SchemeKind::*;
    match (kind, role) {
        (X11 | X2, First) => vec![row("a", 1.0, 1.0), row("a'", 1.0 - a2, 1.0 - a2), row("b", 1.0, 1.0), row("b'", 1.0 - a1, 1.0 - a1)],
        (X11, Middle) => vec![
            row("c", 1.0, 1.0 - a1 - delta),
            row("a", a1 + delta, a1 + delta),
            row("a'", a1 - a2 + delta, a1 - a2 + delta),
            row("b", a1 + delta, a1 + delta),
            row("b'", delta, delta),
        ],
        (X11 | X12 | X13, Last) => vec![row("c", 1.0, 1.0 - a2), row("a", a2, a2), row("b", a2, a2)],
        (X12, First) => vec![row("a", 1.0, 1.0), row("a'", 1.0 - a2, 1.0 - a2), row("b", a1, a1)],
        (X12, Middle) => vec![
            row("c", 1.0, 1.0 - a1),
            row("a", a1, a1),
            row("a'", a1 - a2, a1 - a2),
            row("b", a1, a1),
        ],
        (X2 | X3, Last) => vec![row("c", 1.0, f64::NAN), row("a", a2, a2), row("b", a1, a1)],
        (X3, First | Middle) => vec![
            row("c", 1.0, 1.0 - beta),
            row("a", beta, beta),
            row("a'", beta - a2, beta - a2),
            row("b", beta, beta),
            row("b'", beta - a1, beta - a1),
        ],
        (k, r) => panic!("no table for {k:?} {r:?}"),
    }
}

/// Rows actually transmitted: classes with a vanishing rate are dropped.
pub fn active(rows: Vec<Row>) -> Vec<Row> {
    rows.into_iter().filter(|r| r.rate.is_nan() || r.rate > 1e-12).collect()
}

/// `a` is zero-forced against user 2's estimate and `b` against user 1's.
pub fn received(r: &Row, user: usize, a1: f64, a2: f64) -> f64 {
    match (r.class, user) {
        ("a", 2) => r.power - a2,
        ("b", 1) => r.power - a1,
        _ => r.power,
    }
}

pub fn owner(class: &str) -> Option<usize> {
    match class {
        "a" | "a'" => Some(1),
        "b" | "b'" => Some(2),
        _ => None,
    }
}

pub fn delta_of(cfg: &SchemeConfig) -> f64 {
    match cfg.derived() {
        Derived::X11 { delta, .. } => delta,
        _ => 0.0,
    }
}

/// Parsed `s{phase}[.t{slot}][.u{user}].{name}`.
#[derive(Debug, PartialEq)]
pub struct Label {
    pub phase: usize,
    pub slot: Option<usize>,
    pub user: Option<usize>,
    pub name: String,
}

pub fn parse_label(label: &str) -> Label {
    let mut parts = label.split('.');
    let phase = parts.next().unwrap()[1..].parse().unwrap();
    let mut slot = None;
    let mut user = None;
    let mut rest = Vec::new();
    for p in parts {
        if rest.is_empty() && p.starts_with('t') && p[1..].parse::<usize>().is_ok() {
            slot = Some(p[1..].parse().unwrap());
        } else if rest.is_empty() && p.starts_with('u') && p[1..].parse::<usize>().is_ok() {
            user = Some(p[1..].parse().unwrap());
        } else {
            rest.push(p);
        }
    }
    Label { phase, slot, user, name: rest.join(".") }
}

/// Declared exponent of one probe label, from the tables alone. `None` for labels the tables do not annotate.
pub fn declared(cfg: &SchemeConfig, label: &str) -> Option<f64> {
    let l = parse_label(label);
    let p = cfg.profile();
    let (al1, al2) = (p.alpha(miso_dof::quality::User::One), p.alpha(miso_dof::quality::User::Two));
    let beta = p.beta();
    let role = role_of(cfg, l.phase);
    let delta = delta_of(cfg);
    let abar = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    match (l.slot, l.user, l.name.as_str()) {
        (None, Some(_), "delayed_err") => Some(-beta),
        (None, Some(_), "common_block") => Some(al1.len() as f64 * (1.0 - abar(al1))),
        (Some(_), None, "tx") => Some(1.0),
        (Some(t), Some(u), name) => {
            let (a1, a2) = (al1[t - 1], al2[t - 1]);
            let rows = active(table(cfg.kind(), role, a1, a2, beta, delta));
            let alpha_u = if u == 1 { a1 } else { a2 };
            let foreign_max = rows
                .iter()
                .filter(|r| owner(r.class) == Some(3 - u))
                .map(|r| received(r, u, a1, a2))
                .fold(f64::NEG_INFINITY, f64::max);
            match name {
                "est_err" => Some(-alpha_u),
                "z" => Some(0.0),
                "iota" | "iota_check" => Some(foreign_max),
                "iota_resid" => {
                    let top = rows.iter().filter(|r| owner(r.class) == Some(3 - u)).map(|r| r.power).fold(f64::NEG_INFINITY, f64::max);
                    Some(top - beta)
                }
                "qres" => Some(0.0),
                "common" => rows.iter().find(|r| r.class == "c").map(|r| r.rate),
                "mimo" => Some(rows.iter().filter(|r| owner(r.class) == Some(u)).map(|r| r.rate).sum()),
                class => rows.iter().find(|r| r.class == class).map(|r| received(r, u, a1, a2)),
            }
        }
        _ => None,
    }
}

/// Non-decreasing exponents in `[0, hi]`.
pub fn sorted_exponents(rng: &mut impl Rng, t: usize, hi: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..t).map(|_| rng.random::<f64>() * hi).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Asymmetric profile with `α^(2) = λ·α^(1)` and perfect delayed CSIT.
pub fn asymmetric_profile(rng: &mut impl Rng, hi: f64) -> QualityProfile {
    let t = rng.random_range(1..=4);
    let a1 = sorted_exponents(rng, t, hi);
    let lambda: f64 = rng.random();
    let a2 = a1.iter().map(|x| x * lambda).collect();
    QualityProfile::new(a1, a2, 1.0).unwrap()
}

/// Partially symmetric profile: user 2 gets a mean-preserving tilt of user 1's sequence.
pub fn partially_symmetric_profile(rng: &mut impl Rng, beta_of: impl Fn(f64) -> f64) -> QualityProfile {
    let t = rng.random_range(1..=4);
    let a1 = sorted_exponents(rng, t, 0.9);
    let mean = a1.iter().sum::<f64>() / t as f64;
    let k: f64 = rng.random();
    // Pull every slot toward the mean: order and average survive, the last slot only drops.
    let a2: Vec<f64> = a1.iter().map(|x| mean + k * (x - mean)).collect();
    let beta = beta_of(mean).max(a1[t - 1]).min(1.0);
    QualityProfile::with_betas(a1, a2, beta, beta).unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
