//! The Hopf fibration `P: S³₂ → S², r ↦ r⁻¹ i r`, its fibres, horizontal
//! lifts of piecewise geodesics and the fibre displacement (holonomy) of
//! closed curves.
//!
//! Fibres are the circles `θ ↦ e^{iθ/2} r` of length 4π. Over `r = 2p`
//! (`|p| = 1`, `P(r) = u`) the unique horizontal unit vector pushed forward
//! to the S² tangent `w` is `w̃ = −i p w`, and the lift of the arc
//! `u cos s + w sin s` is `2(cos(s/2) p + sin(s/2) w̃)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quat::{Quaternion, Rotation3};
use crate::sphere2::{check_chain, GeodesicArc2, GeodesicPolygon2, S2Point, SphereError};
use crate::tol::{RADIUS, UNIT_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HopfError {
    #[error("point has norm {0}, expected 2")]
    NotOnS32(f64),
    #[error("start point projects to a point at distance {0} from the path's first point")]
    BasePointMismatch(f64),
    #[error("tangent is not orthogonal to its base point (inner product {0})")]
    NotTangent(f64),
    #[error(transparent)]
    Sphere(#[from] SphereError),
}

/// A point of the radius-2 sphere S³₂ ⊂ ℍ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct S32Point(Quaternion);

impl S32Point {
    pub fn new(r: Quaternion) -> Result<Self, HopfError> {
        let n = r.norm();
        if (n - RADIUS).abs() > UNIT_TOL {
            return Err(HopfError::NotOnS32(n));
        }
        Ok(S32Point(r * (RADIUS / n)))
    }

    /// Rescales any non-zero quaternion onto S³₂.
    pub fn project(r: Quaternion) -> Self {
        S32Point(r.normalized() * RADIUS)
    }

    pub fn get(self) -> Quaternion {
        self.0
    }

    /// The unit quaternion `r/2`.
    pub fn unit(self) -> Quaternion {
        self.0 / RADIUS
    }

    /// Geodesic distance on S³₂.
    pub fn distance(self, o: S32Point) -> f64 {
        let (a, b) = (self.unit(), o.unit());
        RADIUS * (a - b).norm().atan2((a + b).norm()) * 2.0
    }
}

/// `r⁻¹ i r`.
pub fn hopf_project(r: S32Point) -> S2Point {
    let p = r.unit();
    S2Point::normalize(p.conj() * Quaternion::I * p)
}

/// Unit quaternion `p` with `p⁻¹ i p = u`: the half-angle rotation taking i to u.
pub fn conjugator(u: S2Point) -> Quaternion {
    let v = Quaternion::ONE - Quaternion::I * u.get();
    if v.norm() < 1e-8 {
        // u = −i: j⁻¹ i j = −i.
        Quaternion::J
    } else {
        v.normalized()
    }
}

/// The fibre `θ ↦ e^{iθ/2} base` (length 4π).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fibre {
    pub base: S32Point,
}

impl Fibre {
    pub fn point(&self, theta: f64) -> Quaternion {
        Quaternion::exp_i(theta / 2.0) * self.base.get()
    }

    /// Unit tangent `d/dθ` of the parametrization (which has unit speed).
    pub fn tangent(&self, theta: f64) -> Quaternion {
        Quaternion::I * self.point(theta) / RADIUS
    }

    pub fn contains(&self, r: Quaternion, tol: f64) -> bool {
        let p = self.base.unit();
        // Distance from r/2 to the plane span{p, i p}.
        let q = r / RADIUS;
        let ip = Quaternion::I * p;
        let proj = p * p.dot(q) + ip * ip.dot(q);
        (q - proj).norm() * RADIUS <= tol
    }
}

/// The fibre over `u` with base point `2p`, `p⁻¹ i p = u`.
pub fn fiber_through(u: S2Point) -> Fibre {
    Fibre { base: S32Point(conjugator(u) * RADIUS) }
}

/// The horizontal unit vector at `r` over the S² tangent `w` at `P(r)`.
pub fn horizontal_lift_of_tangent(r: S32Point, w: Quaternion) -> Quaternion {
    -(Quaternion::I * r.unit() * w.vector())
}

/// A geodesic arc `s ↦ 2(cos(s/2)·start/2 + sin(s/2)·tangent)` of S³₂,
/// parametrized by arc length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc32 {
    pub start: S32Point,
    pub tangent: Quaternion,
    pub length: f64,
}

impl Arc32 {
    pub fn new(start: S32Point, tangent: Quaternion, length: f64) -> Result<Self, HopfError> {
        let dot = start.unit().dot(tangent);
        if dot.abs() > UNIT_TOL || (tangent.norm() - 1.0).abs() > UNIT_TOL {
            return Err(HopfError::NotTangent(dot));
        }
        let p = start.unit();
        let t = (tangent - p * p.dot(tangent)).normalized();
        Ok(Arc32 { start, tangent: t, length })
    }

    /// The shorter arc between two non-antipodal points.
    pub fn between(a: S32Point, b: S32Point) -> Result<Self, HopfError> {
        let (p, q) = (a.unit(), b.unit());
        let w = q - p * p.dot(q);
        if w.norm() < 1e-12 {
            return Err(HopfError::Sphere(SphereError::AmbiguousArc));
        }
        Ok(Arc32 { start: a, tangent: w.normalized(), length: a.distance(b) })
    }

    pub fn point(&self, s: f64) -> Quaternion {
        (self.start.unit() * (s / RADIUS).cos() + self.tangent * (s / RADIUS).sin()) * RADIUS
    }

    pub fn tangent_at(&self, s: f64) -> Quaternion {
        self.tangent * (s / RADIUS).cos() - self.start.unit() * (s / RADIUS).sin()
    }

    pub fn end(&self) -> S32Point {
        S32Point::project(self.point(self.length))
    }

    pub fn end_tangent(&self) -> Quaternion {
        self.tangent_at(self.length)
    }

    pub fn midpoint(&self) -> Quaternion {
        self.point(self.length / 2.0)
    }

    pub fn reversed(&self) -> Self {
        Arc32 { start: self.end(), tangent: -self.end_tangent(), length: self.length }
    }

    /// The great circle containing the arc, as the 2-plane `span{start, tangent}`.
    pub fn plane(&self) -> [Quaternion; 2] {
        [self.start.unit(), self.tangent]
    }

    /// Image under an isometry `[p, q]`.
    pub fn transformed(&self, g: &crate::quat::Rotation4) -> Self {
        Arc32 {
            start: S32Point::project(g.apply(self.start.get())),
            tangent: g.apply(self.tangent),
            length: self.length,
        }
    }
}

/// A horizontal piecewise geodesic of S³₂.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedPath {
    pub arcs: Vec<Arc32>,
}

impl LiftedPath {
    pub fn end(&self) -> Option<S32Point> {
        self.arcs.last().map(Arc32::end)
    }

    pub fn length(&self) -> f64 {
        self.arcs.iter().map(|a| a.length).sum()
    }
}

/// Horizontal lift of a chain of S² arcs starting at `start`.
pub fn lift_path(chain: &[GeodesicArc2], start: S32Point) -> Result<LiftedPath, HopfError> {
    if chain.is_empty() {
        return Ok(LiftedPath { arcs: Vec::new() });
    }
    check_chain(chain, false)?;
    let gap = hopf_project(start).get().dist(chain[0].start.get());
    if gap > 1e-7 {
        return Err(HopfError::BasePointMismatch(gap));
    }
    let mut arcs = Vec::with_capacity(chain.len());
    let mut r = start;
    for arc in chain {
        let w = horizontal_lift_of_tangent(r, arc.tangent);
        let lifted = Arc32::new(r, w, arc.length)?;
        r = lifted.end();
        arcs.push(lifted);
    }
    Ok(LiftedPath { arcs })
}

/// Section `u ↦ σ(u)` of the fibration over `S² ∖ {−c}` with `P∘σ = id`,
/// where `q⁻¹ i q = c`: `σ(u) = 2·normalize(1 − i q u q⁻¹)·q`.
fn section(u: Quaternion, q: Quaternion) -> Quaternion {
    let v = q * u * q.conj();
    (Quaternion::ONE - Quaternion::I * v).normalized() * q * RADIUS
}

/// Signed fibre displacement θ of the lift of the closed curve `poly` from
/// `start`: the lift ends at `e^{iθ/2}·start`. Measured by continuous
/// tracking against a local section, so θ ∈ (−4π, 4π); θ = −Area when the
/// enclosed region lies on the left of travel and +Area when on the right.
pub fn lift_displacement(poly: &GeodesicPolygon2, start: S32Point) -> Result<f64, HopfError> {
    let lifted = lift_path(poly.arcs(), start)?;
    let samples = sample_path(poly.arcs(), &lifted);
    let c = section_centre(poly);
    let q = conjugator(c);
    let mut prev: Option<f64> = None;
    let mut total = 0.0;
    for (u, r) in samples {
        let phase = r * section(u, q).conj() / (RADIUS * RADIUS);
        let half = phase.x.atan2(phase.t);
        if let Some(p) = prev {
            let mut d = half - p;
            d -= (d / (2.0 * PI)).round() * 2.0 * PI;
            total += d;
        }
        prev = Some(half);
    }
    Ok(2.0 * total)
}

fn sample_path(chain: &[GeodesicArc2], lifted: &LiftedPath) -> Vec<(Quaternion, Quaternion)> {
    let mut out = Vec::new();
    for (base, up) in chain.iter().zip(&lifted.arcs) {
        let steps = ((base.length / 0.01).ceil() as usize).max(1);
        for s in 0..=steps {
            let t = base.length * s as f64 / steps as f64;
            out.push((base.point(t), up.point(t)));
        }
    }
    out
}

/// Picks a centre `c` so that the section singularity `−c` stays far from the curve.
fn section_centre(poly: &GeodesicPolygon2) -> S2Point {
    let pts: Vec<Quaternion> = poly
        .arcs()
        .iter()
        .flat_map(|a| (0..=16).map(move |s| a.point(a.length * f64::from(s) / 16.0)))
        .collect();
    let sum = pts.iter().fold(Quaternion::ZERO, |acc, &p| acc + p);
    let mut candidates = vec![];
    if sum.norm() > 1e-6 {
        candidates.push(S2Point::normalize(sum));
    }
    for v in [Quaternion::I, Quaternion::J, Quaternion::K] {
        candidates.push(S2Point::normalize(v));
        candidates.push(S2Point::normalize(-v));
    }
    let clearance = |c: &S2Point| {
        pts.iter().map(|p| (*p + c.get()).norm()).fold(f64::INFINITY, f64::min)
    };
    candidates
        .into_iter()
        .max_by(|a, b| clearance(a).total_cmp(&clearance(b)))
        .expect("non-empty candidate list")
}

/// The identification SO(3) ≅ UTS²: `[p] ↦ (p⁻¹ i p, p⁻¹ j p)`.
pub fn uts2_identify(r: Rotation3) -> (S2Point, Quaternion) {
    (S2Point::normalize(r.rotate(Quaternion::I)), r.rotate(Quaternion::J))
}
