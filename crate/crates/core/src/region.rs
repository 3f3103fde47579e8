//! DoF regions as convex polygons in the `(d1, d2)` plane.
//!
//! A region is the intersection of the nonnegative quadrant with a set of
//! half-planes `a·d1 + b·d2 ≤ c`. Vertices are kept alongside, deduplicated and
//! ordered counterclockwise from the origin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for membership, deduplication and vertex comparison.
pub const REGION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DofPoint {
    pub d1: f64,
    pub d2: f64,
}

impl DofPoint {
    pub const fn new(d1: f64, d2: f64) -> Self {
        DofPoint { d1, d2 }
    }

    pub fn dist(self, other: DofPoint) -> f64 {
        (self.d1 - other.d1).hypot(self.d2 - other.d2)
    }
}

/// `a·d1 + b·d2 ≤ c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl HalfPlane {
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        HalfPlane { a, b, c }
    }

    pub fn slack(&self, p: DofPoint) -> f64 {
        self.c - self.a * p.d1 - self.b * p.d2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionStatus {
    Optimal,
    InnerBound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DofRegion {
    halfplanes: Vec<HalfPlane>,
    vertices: Vec<DofPoint>,
    status: RegionStatus,
}

impl DofRegion {
    /// Region whose vertices come from generic enumeration of `halfplanes`.
    pub fn from_halfplanes(halfplanes: Vec<HalfPlane>, status: RegionStatus) -> Self {
        let vertices = enumerate_vertices(&halfplanes);
        DofRegion { halfplanes, vertices, status }
    }

    /// Region with a closed-form corner list; corners are merged and ordered.
    fn from_corners(halfplanes: Vec<HalfPlane>, corners: &[DofPoint], status: RegionStatus) -> Self {
        let vertices = normalize_vertices(corners.to_vec());
        DofRegion { halfplanes, vertices, status }
    }

    pub fn halfplanes(&self) -> &[HalfPlane] {
        &self.halfplanes
    }

    pub fn vertices(&self) -> &[DofPoint] {
        &self.vertices
    }

    pub fn status(&self) -> RegionStatus {
        self.status
    }

    pub fn contains(&self, p: DofPoint) -> bool {
        p.d1 >= -REGION_TOL
            && p.d2 >= -REGION_TOL
            && self.halfplanes.iter().all(|h| h.slack(p) >= -REGION_TOL)
    }

    /// Convexity makes vertex containment sufficient.
    pub fn is_subset_of(&self, other: &DofRegion) -> bool {
        self.vertices.iter().all(|&v| other.contains(v))
    }

    /// Point-set equality via vertex-set equality.
    pub fn same_vertices(&self, other: &DofRegion) -> bool {
        same_point_set(&self.vertices, &other.vertices, REGION_TOL)
    }

    /// Re-derives the vertex set from the half-planes and compares it with the stored one.
    pub fn is_consistent(&self) -> bool {
        same_point_set(&self.vertices, &enumerate_vertices(&self.halfplanes), REGION_TOL)
    }

    /// Closed boundary polyline (first vertex repeated at the end).
    pub fn boundary(&self) -> Vec<DofPoint> {
        let mut out = self.vertices.clone();
        if let Some(&first) = self.vertices.first() {
            out.push(first);
        }
        out
    }
}

fn unit_box() -> Vec<HalfPlane> {
    vec![HalfPlane::new(1.0, 0.0, 1.0), HalfPlane::new(0.0, 1.0, 1.0)]
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {x} outside [0,1]")))
    }
}

/// Optimal region with symmetric average current-CSIT exponent `ᾱ` and perfect delayed CSIT.
pub fn region_theorem1(abar: f64) -> Result<DofRegion> {
    check_unit("abar", abar)?;
    let mut hp = unit_box();
    hp.push(HalfPlane::new(2.0, 1.0, 2.0 + abar));
    hp.push(HalfPlane::new(1.0, 2.0, 2.0 + abar));
    let k = (2.0 + abar) / 3.0;
    let corners = [
        DofPoint::new(0.0, 0.0),
        DofPoint::new(0.0, 1.0),
        DofPoint::new(abar, 1.0),
        DofPoint::new(k, k),
        DofPoint::new(1.0, abar),
        DofPoint::new(1.0, 0.0),
    ];
    Ok(DofRegion::from_corners(hp, &corners, RegionStatus::Optimal))
}

/// `β` at or above which delayed CSIT is as good as perfect delayed CSIT.
pub fn beta_threshold(abar: f64) -> f64 {
    (1.0 + 2.0 * abar) / 3.0
}

/// Region with imperfect delayed CSIT of exponent `β`; an inner bound below the threshold.
pub fn region_theorem2(abar: f64, beta: f64) -> Result<DofRegion> {
    check_unit("abar", abar)?;
    check_unit("beta", beta)?;
    if abar > beta + REGION_TOL {
        return Err(Error::Domain(format!("abar = {abar} exceeds beta = {beta}")));
    }
    if beta >= beta_threshold(abar) - REGION_TOL {
        return region_theorem1(abar);
    }
    let mut hp = unit_box();
    hp.push(HalfPlane::new(2.0, 1.0, 2.0 + abar));
    hp.push(HalfPlane::new(1.0, 2.0, 2.0 + abar));
    hp.push(HalfPlane::new(1.0, 1.0, 1.0 + beta));
    let corners = [
        DofPoint::new(0.0, 0.0),
        DofPoint::new(0.0, 1.0),
        DofPoint::new(abar, 1.0),
        DofPoint::new(2.0 * beta - abar, 1.0 + abar - beta),
        DofPoint::new(1.0 + abar - beta, 2.0 * beta - abar),
        DofPoint::new(1.0, abar),
        DofPoint::new(1.0, 0.0),
    ];
    Ok(DofRegion::from_corners(hp, &corners, RegionStatus::InnerBound))
}

fn asymmetric_halfplanes(abar1: f64, abar2: f64) -> Vec<HalfPlane> {
    let mut hp = unit_box();
    hp.push(HalfPlane::new(2.0, 1.0, 2.0 + abar1));
    hp.push(HalfPlane::new(1.0, 2.0, 2.0 + abar2));
    hp
}

/// `2ᾱ^(1) − ᾱ^(2) < 1`: the inner corner `C` exists.
pub fn is_case1(abar1: f64, abar2: f64) -> bool {
    2.0 * abar1 - abar2 < 1.0
}

/// Optimal region for asymmetric and evolving current CSIT with perfect delayed CSIT.
pub fn region_theorem4(abar1: f64, abar2: f64) -> Result<DofRegion> {
    check_unit("abar1", abar1)?;
    check_unit("abar2", abar2)?;
    if abar2 > abar1 + REGION_TOL {
        return Err(Error::Domain(format!("abar2 = {abar2} exceeds abar1 = {abar1}")));
    }
    let hp = asymmetric_halfplanes(abar1, abar2);
    let corners: Vec<DofPoint> = if is_case1(abar1, abar2) {
        vec![
            DofPoint::new(0.0, 0.0),
            DofPoint::new(1.0, 0.0),
            DofPoint::new(1.0, abar1),
            corner_c(abar1, abar2),
            DofPoint::new(abar2, 1.0),
            DofPoint::new(0.0, 1.0),
        ]
    } else {
        vec![
            DofPoint::new(0.0, 0.0),
            DofPoint::new(1.0, 0.0),
            DofPoint::new(1.0, (1.0 + abar2) / 2.0),
            DofPoint::new(abar2, 1.0),
            DofPoint::new(0.0, 1.0),
        ]
    };
    Ok(DofRegion::from_corners(hp, &corners, RegionStatus::Optimal))
}

/// Intersection of `2d1+d2 = 2+ᾱ^(1)` and `2d2+d1 = 2+ᾱ^(2)`.
pub fn corner_c(abar1: f64, abar2: f64) -> DofPoint {
    DofPoint::new((2.0 + 2.0 * abar1 - abar2) / 3.0, (2.0 + 2.0 * abar2 - abar1) / 3.0)
}

/// Outer bound for asymmetric current CSIT, vertices by generic enumeration.
pub fn outer_bound_lemma1(abar1: f64, abar2: f64) -> Result<DofRegion> {
    check_unit("abar1", abar1)?;
    check_unit("abar2", abar2)?;
    Ok(DofRegion::from_halfplanes(asymmetric_halfplanes(abar1, abar2), RegionStatus::Optimal))
}

/// Extreme points of `{d1 ≥ 0, d2 ≥ 0} ∩ halfplanes` by pairwise intersection and feasibility filtering.
pub fn enumerate_vertices(halfplanes: &[HalfPlane]) -> Vec<DofPoint> {
    let mut all = halfplanes.to_vec();
    all.push(HalfPlane::new(-1.0, 0.0, 0.0));
    all.push(HalfPlane::new(0.0, -1.0, 0.0));
    let mut pts = Vec::new();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            let (p, q) = (all[i], all[j]);
            let det = p.a * q.b - p.b * q.a;
            if det.abs() < 1e-14 {
                continue;
            }
            let x = DofPoint::new((p.c * q.b - p.b * q.c) / det, (p.a * q.c - p.c * q.a) / det);
            if all.iter().all(|h| h.slack(x) >= -REGION_TOL) {
                pts.push(x);
            }
        }
    }
    normalize_vertices(pts)
}

/// Dedupe at [`REGION_TOL`] and order counterclockwise starting from the origin.
fn normalize_vertices(pts: Vec<DofPoint>) -> Vec<DofPoint> {
    let mut uniq: Vec<DofPoint> = Vec::new();
    for p in pts {
        if !uniq.iter().any(|q| q.dist(p) <= REGION_TOL) {
            uniq.push(p);
        }
    }
    if uniq.len() < 3 {
        return uniq;
    }
    let n = uniq.len() as f64;
    let cx = uniq.iter().map(|p| p.d1).sum::<f64>() / n;
    let cy = uniq.iter().map(|p| p.d2).sum::<f64>() / n;
    let angle = |p: &DofPoint| (p.d2 - cy).atan2(p.d1 - cx);
    uniq.sort_by(|p, q| angle(p).total_cmp(&angle(q)));
    let start = uniq
        .iter()
        .enumerate()
        .min_by(|(_, p), (_, q)| (p.d1.hypot(p.d2)).total_cmp(&q.d1.hypot(q.d2)))
        .map(|(i, _)| i)
        .unwrap_or(0);
    uniq.rotate_left(start);
    uniq
}

/// Set equality of point lists at tolerance `tol`.
pub fn same_point_set(a: &[DofPoint], b: &[DofPoint], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|p| b.iter().any(|q| q.dist(*p) <= tol))
        && b.iter().all(|p| a.iter().any(|q| q.dist(*p) <= tol))
}
