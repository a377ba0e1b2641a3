//! Geometry on the unit sphere S² ⊂ Im ℍ: geodesic arcs and polygons,
//! parallel transport, Gauss–Bonnet area and holonomy, and the five finite
//! reflection groups with their tessellation graphs and typical pieces.
//!
//! Orientation convention: i, j, k are right-handed in E³; "left of travel"
//! means the side towards `P × T` where `P` is the position and `T` the
//! direction of motion, so a counter-clockwise loop seen from outside
//! encloses its left side.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quat::{Quaternion, Rotation3, UnitQuaternion};
use crate::tol::{GROUP_TOL, UNIT_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphereError {
    #[error("point is not on the unit sphere of Im H (norm {norm}, real part {t})")]
    NotOnSphere { norm: f64, t: f64 },
    #[error("tangent is not orthogonal to its base point (inner product {dot})")]
    NotTangent { dot: f64 },
    #[error("invalid arc length {0}; expected a value in (0, 2π)")]
    BadLength(f64),
    #[error("endpoints are equal or antipodal; no unique minor arc")]
    AmbiguousArc,
    #[error("arc {index} does not end where arc {next} starts (gap {gap})")]
    NotChained { index: usize, next: usize, gap: f64 },
    #[error("polygon has an anti-parallel corner at arc {0}; its angle is undefined")]
    DegeneratePolygon(usize),
    #[error("polygon has no arcs")]
    Empty,
    #[error("group closure exceeded {0} elements")]
    ClosureOverflow(usize),
}

/// A unit vector of E³ = Im ℍ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct S2Point(Quaternion);

impl S2Point {
    pub const I: S2Point = S2Point(Quaternion::I);
    pub const J: S2Point = S2Point(Quaternion::J);
    pub const K: S2Point = S2Point(Quaternion::K);

    /// Validates (within [`UNIT_TOL`]), renormalizes and zeroes the real part.
    pub fn new(v: Quaternion) -> Result<Self, SphereError> {
        let n = v.vector().norm();
        if v.t.abs() > UNIT_TOL || (n - 1.0).abs() > UNIT_TOL {
            return Err(SphereError::NotOnSphere { norm: v.norm(), t: v.t });
        }
        Ok(S2Point(v.vector() / n))
    }

    /// Normalizes the imaginary part of any non-zero quaternion.
    pub fn normalize(v: Quaternion) -> Self {
        S2Point(v.vector().normalized())
    }

    pub fn from_xyz(x: f64, y: f64, z: f64) -> Self {
        S2Point::normalize(Quaternion::imag(x, y, z))
    }

    pub fn get(self) -> Quaternion {
        self.0
    }

    pub fn antipode(self) -> Self {
        S2Point(-self.0)
    }

    pub fn dot(self, o: S2Point) -> f64 {
        self.0.dot(o.0)
    }

    /// Great-circle distance.
    pub fn angle_to(self, o: S2Point) -> f64 {
        self.0.cross(o.0).norm().atan2(self.0.dot(o.0))
    }

    pub fn rotate(self, r: &Rotation3) -> Self {
        S2Point::normalize(r.rotate(self.0))
    }
}

/// `cos α · k + sin α · j = e^{−iα} k`, the points of the equator through k and j.
pub fn equator_point(alpha: f64) -> S2Point {
    S2Point(Quaternion::imag(0.0, alpha.sin(), alpha.cos()))
}

/// The special points u_T, u_T′, u_O, u_I, u_I′.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecialPoints {
    pub u_t: S2Point,
    pub u_t_prime: S2Point,
    pub u_o: S2Point,
    pub u_i: S2Point,
    pub u_i_prime: S2Point,
}

impl SpecialPoints {
    pub fn new() -> Self {
        let s3 = 3f64.sqrt();
        let s5 = 5f64.sqrt();
        SpecialPoints {
            u_t: S2Point(Quaternion::imag(1.0, 1.0, 1.0) / s3),
            u_t_prime: S2Point(Quaternion::imag(1.0, 1.0, -1.0) / s3),
            u_o: S2Point(Quaternion::imag(1.0, 1.0, 0.0) / 2f64.sqrt()),
            u_i: S2Point(Quaternion::imag(s5 + 1.0, s5 - 1.0, 0.0) / (2.0 * s3)),
            u_i_prime: S2Point(
                Quaternion::imag((10.0 + 2.0 * s5).sqrt(), 0.0, -(10.0 - 2.0 * s5).sqrt())
                    / (2.0 * s5),
            ),
        }
    }
}

impl Default for SpecialPoints {
    fn default() -> Self {
        SpecialPoints::new()
    }
}

/// The geodesic `s ↦ start·cos s + tangent·sin s`, `s ∈ [0, length]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicArc2 {
    pub start: S2Point,
    pub tangent: Quaternion,
    pub length: f64,
}

impl GeodesicArc2 {
    pub fn new(start: S2Point, tangent: Quaternion, length: f64) -> Result<Self, SphereError> {
        let dot = start.get().dot(tangent);
        if dot.abs() > UNIT_TOL || (tangent.vector().norm() - 1.0).abs() > UNIT_TOL {
            return Err(SphereError::NotTangent { dot });
        }
        if !(length > 0.0 && length < 2.0 * PI) {
            return Err(SphereError::BadLength(length));
        }
        let t = tangent.vector();
        let t = (t - start.get() * start.get().dot(t)).normalized();
        Ok(GeodesicArc2 { start, tangent: t, length })
    }

    /// The minor arc from `a` to `b`.
    pub fn between(a: S2Point, b: S2Point) -> Result<Self, SphereError> {
        let (p, q) = (a.get(), b.get());
        let w = q - p * p.dot(q);
        let n = w.norm();
        if n < 1e-12 {
            return Err(SphereError::AmbiguousArc);
        }
        let length = a.angle_to(b);
        Ok(GeodesicArc2 { start: a, tangent: w / n, length })
    }

    pub fn point(&self, s: f64) -> Quaternion {
        self.start.get() * s.cos() + self.tangent * s.sin()
    }

    pub fn tangent_at(&self, s: f64) -> Quaternion {
        self.tangent * s.cos() - self.start.get() * s.sin()
    }

    pub fn end(&self) -> S2Point {
        S2Point::normalize(self.point(self.length))
    }

    pub fn end_tangent(&self) -> Quaternion {
        self.tangent_at(self.length)
    }

    /// Unit normal of the great circle, `start × tangent`.
    pub fn binormal(&self) -> Quaternion {
        self.start.get().cross(self.tangent)
    }

    pub fn reversed(&self) -> Self {
        GeodesicArc2 {
            start: self.end(),
            tangent: -self.end_tangent(),
            length: self.length,
        }
    }
}

/// Transports the tangent vector `v` at `arc.start` to the end of `arc`.
pub fn parallel_transport(v: Quaternion, arc: &GeodesicArc2) -> Result<Quaternion, SphereError> {
    let dot = v.dot(arc.start.get());
    if dot.abs() > UNIT_TOL {
        return Err(SphereError::NotTangent { dot });
    }
    let b = arc.binormal();
    let alpha = v.dot(arc.tangent);
    let beta = v.dot(b);
    Ok(arc.end_tangent() * alpha + b * beta)
}

/// Signed turning angle from direction `t_in` to `t_out` at `p`, positive
/// when turning left.
pub fn turning_angle(p: Quaternion, t_in: Quaternion, t_out: Quaternion) -> f64 {
    p.dot(t_in.cross(t_out)).atan2(t_in.dot(t_out))
}

/// A closed chain of geodesic arcs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicPolygon2 {
    arcs: Vec<GeodesicArc2>,
}

impl GeodesicPolygon2 {
    pub fn new(arcs: Vec<GeodesicArc2>) -> Result<Self, SphereError> {
        if arcs.is_empty() {
            return Err(SphereError::Empty);
        }
        check_chain(&arcs, true)?;
        Ok(GeodesicPolygon2 { arcs })
    }

    /// Closed polygon through `vertices` using minor arcs.
    pub fn from_vertices(vertices: &[S2Point]) -> Result<Self, SphereError> {
        let n = vertices.len();
        let arcs = (0..n)
            .map(|t| GeodesicArc2::between(vertices[t], vertices[(t + 1) % n]))
            .collect::<Result<Vec<_>, _>>()?;
        GeodesicPolygon2::new(arcs)
    }

    pub fn arcs(&self) -> &[GeodesicArc2] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn vertices(&self) -> Vec<S2Point> {
        self.arcs.iter().map(|a| a.start).collect()
    }

    pub fn reversed(&self) -> Self {
        GeodesicPolygon2 { arcs: self.arcs.iter().rev().map(|a| a.reversed()).collect() }
    }

    /// Signed turning angles at each vertex (vertex `t` is the start of arc `t`).
    pub fn turning_angles(&self) -> Result<Vec<f64>, SphereError> {
        let n = self.arcs.len();
        (0..n)
            .map(|t| {
                let prev = &self.arcs[(t + n - 1) % n];
                let cur = &self.arcs[t];
                let t_in = prev.end_tangent();
                let t_out = cur.tangent;
                if t_in.dot(t_out) < -1.0 + 1e-12 {
                    return Err(SphereError::DegeneratePolygon(t));
                }
                Ok(turning_angle(cur.start.get(), t_in, t_out))
            })
            .collect()
    }

    /// Whether no two non-adjacent arcs meet and adjacent arcs meet only at
    /// their shared vertex.
    pub fn is_simple(&self) -> bool {
        let n = self.arcs.len();
        for a in 0..n {
            for b in (a + 1)..n {
                let adjacent = b == a + 1 || (a == 0 && b == n - 1);
                if arcs_cross(&self.arcs[a], &self.arcs[b], adjacent) {
                    return false;
                }
            }
        }
        true
    }
}

pub(crate) fn check_chain(arcs: &[GeodesicArc2], closed: bool) -> Result<(), SphereError> {
    let n = arcs.len();
    let last = if closed { n } else { n.saturating_sub(1) };
    for index in 0..last {
        let next = (index + 1) % n;
        let gap = arcs[index].end().get().dist(arcs[next].start.get());
        if gap > UNIT_TOL.max(1e-9) * 10.0 {
            return Err(SphereError::NotChained { index, next, gap });
        }
    }
    Ok(())
}

/// Arc parameter of `x` on the great circle of `arc`, in `[0, 2π)`.
fn arc_parameter(arc: &GeodesicArc2, x: Quaternion) -> f64 {
    x.dot(arc.tangent).atan2(x.dot(arc.start.get())).rem_euclid(2.0 * PI)
}

fn arcs_cross(a: &GeodesicArc2, b: &GeodesicArc2, adjacent: bool) -> bool {
    let n = a.binormal().cross(b.binormal());
    let eps = 1e-10;
    if n.norm() < 1e-12 {
        // Same great circle: treat overlap beyond the shared vertex as crossing.
        if adjacent {
            return false;
        }
        let inside = |arc: &GeodesicArc2, x: Quaternion| {
            let s = arc_parameter(arc, x);
            s > eps && s < arc.length - eps
        };
        return inside(a, b.start.get()) || inside(b, a.start.get());
    }
    let x = n.normalized();
    for c in [x, -x] {
        let sa = arc_parameter(a, c);
        let sb = arc_parameter(b, c);
        let on_a = sa <= a.length + eps || sa >= 2.0 * PI - eps;
        let on_b = sb <= b.length + eps || sb >= 2.0 * PI - eps;
        if on_a && on_b {
            if adjacent {
                let shared = a.end().get().dist(c) < 1e-8 || a.start.get().dist(c) < 1e-8;
                if shared {
                    continue;
                }
            }
            return true;
        }
    }
    false
}

/// Area of the region on the left of travel: `Σ(interior angles) − (n−2)π
/// = 2π − Σ(turning angles)`. Intended for polygons in a closed hemisphere.
pub fn polygon_area(poly: &GeodesicPolygon2) -> Result<f64, SphereError> {
    let total: f64 = poly.turning_angles()?.iter().sum();
    Ok(2.0 * PI - total)
}

/// Which side of a closed curve encloses the region of interest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Rotation angle in `(0, 2π]` of parallel transport once around `poly`.
///
/// For `Side::Left` this is the counter-clockwise (right-hand about the
/// outward normal) angle; for `Side::Right` the clockwise one. By
/// Gauss–Bonnet it equals the area of the region on that side.
pub fn holonomy_angle(poly: &GeodesicPolygon2, side: Side) -> Result<f64, SphereError> {
    poly.turning_angles()?;
    let first = &poly.arcs()[0];
    let v0 = first.tangent;
    let mut v = v0;
    for arc in poly.arcs() {
        // Remove the tiny normal drift before each step.
        let p = arc.start.get();
        v = (v - p * p.dot(v)).normalized();
        v = parallel_transport(v, arc)?;
    }
    let p = first.start.get();
    let ccw = p.dot(v0.cross(v)).atan2(v0.dot(v));
    let signed = match side {
        Side::Left => ccw,
        Side::Right => -ccw,
    };
    let mut angle = signed.rem_euclid(2.0 * PI);
    if angle < 1e-12 || 2.0 * PI - angle < 1e-12 {
        angle = 2.0 * PI;
    }
    Ok(angle)
}

/// The five families of finite reflection groups of S².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReflectionFamily {
    C,
    D,
    T,
    O,
    I,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReflectionGroupSpec {
    pub family: ReflectionFamily,
    /// Rotation order about i (used by C and D only).
    pub l: u32,
}

impl ReflectionGroupSpec {
    pub fn new(family: ReflectionFamily, l: u32) -> Self {
        ReflectionGroupSpec { family, l: l.max(1) }
    }
}

/// An element `±[p]` of O(3): `sign = 1` is `v ↦ p⁻¹vp`, `sign = −1` its
/// composition with the antipodal map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct O3Element {
    pub sign: i8,
    pub rotation: Rotation3,
}

impl O3Element {
    pub const IDENTITY: O3Element = O3Element { sign: 1, rotation: Rotation3::IDENTITY };

    pub fn apply(&self, v: Quaternion) -> Quaternion {
        self.rotation.rotate(v) * f64::from(self.sign)
    }

    pub fn compose(&self, o: &O3Element) -> O3Element {
        O3Element { sign: self.sign * o.sign, rotation: self.rotation.compose(o.rotation) }
    }

    pub fn approx_eq(&self, o: &O3Element) -> bool {
        self.sign == o.sign && self.rotation.approx_eq(&o.rotation)
    }

    /// For a reflection `−[u]` with `u` imaginary, the unit normal `u` of its mirror.
    pub fn mirror_normal(&self) -> Option<S2Point> {
        let p = self.rotation.p().get();
        (self.sign == -1 && p.t.abs() <= GROUP_TOL).then(|| S2Point::normalize(p))
    }
}

const MAX_2D_ORDER: usize = 100_000;

/// Generators of the reflection group of `spec`.
pub fn reflection_generators(spec: ReflectionGroupSpec) -> Vec<O3Element> {
    let sp = SpecialPoints::new();
    let rot = |q: Quaternion| O3Element { sign: 1, rotation: Rotation3::new(UnitQuaternion::normalize(q)) };
    let refl = |q: Quaternion| O3Element { sign: -1, rotation: Rotation3::new(UnitQuaternion::normalize(q)) };
    let about = |u: Quaternion, angle: f64| rot(Quaternion::exp_axis(u, angle));
    let l = f64::from(spec.l);
    let e_pi4_k = Quaternion::exp_i(PI / 4.0) * Quaternion::K;
    match spec.family {
        ReflectionFamily::C => vec![about(Quaternion::I, PI / l), refl(Quaternion::J)],
        ReflectionFamily::D => vec![about(Quaternion::I, PI / l), rot(Quaternion::K), refl(Quaternion::J)],
        ReflectionFamily::T => vec![
            about(Quaternion::I, PI / 2.0),
            about(sp.u_t.get(), PI / 3.0),
            refl(e_pi4_k),
        ],
        ReflectionFamily::O => vec![
            about(Quaternion::I, PI / 4.0),
            about(sp.u_t.get(), PI / 3.0),
            refl(Quaternion::K),
        ],
        ReflectionFamily::I => vec![
            about(Quaternion::I, PI / 2.0),
            about(sp.u_i.get(), PI / 3.0),
            refl(Quaternion::K),
        ],
    }
}

/// Closure of the generators of `spec` (orders: C 2l, D 4l, T 24, O 48, I 120).
pub fn reflection_group_2d(spec: ReflectionGroupSpec) -> Result<Vec<O3Element>, SphereError> {
    let gens = reflection_generators(spec);
    let key = |e: &O3Element| {
        let p = e.rotation.p().get().to_array();
        (e.sign, p.map(|c| (c * 1e6).round() as i64))
    };
    let mut seen = std::collections::HashMap::new();
    let mut elements = vec![O3Element::IDENTITY];
    seen.insert(key(&O3Element::IDENTITY), 0usize);
    let mut head = 0;
    while head < elements.len() {
        let g = elements[head];
        head += 1;
        for s in &gens {
            let h = g.compose(s);
            let k = key(&h);
            let dup = seen.get(&k).is_some_and(|&idx| elements[idx].approx_eq(&h))
                || elements.iter().any(|e| e.approx_eq(&h));
            if !dup {
                seen.insert(k, elements.len());
                elements.push(h);
                if elements.len() > MAX_2D_ORDER {
                    return Err(SphereError::ClosureOverflow(MAX_2D_ORDER));
                }
            }
        }
    }
    Ok(elements)
}

/// The mirror circles of all reflections of `spec`, as unit normals with a
/// canonical sign (first significant component positive), deduplicated.
pub fn tessellation_graph(spec: ReflectionGroupSpec) -> Result<Vec<S2Point>, SphereError> {
    let mut normals: Vec<S2Point> = Vec::new();
    for e in reflection_group_2d(spec)? {
        if let Some(n) = e.mirror_normal() {
            let n = canonical_axis(n);
            if !normals.iter().any(|m| m.get().dist(n.get()) <= GROUP_TOL) {
                normals.push(n);
            }
        }
    }
    Ok(normals)
}

fn canonical_axis(n: S2Point) -> S2Point {
    let v = n.get();
    let first = [v.x, v.y, v.z].into_iter().find(|c| c.abs() > UNIT_TOL).unwrap_or(1.0);
    if first < 0.0 {
        n.antipode()
    } else {
        n
    }
}

/// The typical piece of `spec` as a closed polygon with the piece on its left.
pub fn typical_piece(spec: ReflectionGroupSpec) -> GeodesicPolygon2 {
    let sp = SpecialPoints::new();
    let l = f64::from(spec.l);
    let i = S2Point::I;
    let left_oriented = |v: [S2Point; 3]| {
        let orient = v[0].get().dot(v[1].get().cross(v[2].get()));
        let v = if orient > 0.0 { v } else { [v[0], v[2], v[1]] };
        GeodesicPolygon2::from_vertices(&v).expect("typical piece vertices are distinct")
    };
    match spec.family {
        ReflectionFamily::C => {
            // Bigon with vertices ±i and edges through k and e^{−iπ/l}k.
            let e1 = GeodesicArc2::new(i, Quaternion::K, PI).expect("unit tangent");
            let t2 = equator_point(PI / l).get();
            let e2 = GeodesicArc2::new(i.antipode(), t2, PI).expect("unit tangent");
            let poly = GeodesicPolygon2::new(vec![e1, e2]).expect("closed bigon");
            // The piece lies towards e^{−iπ/(2l)}k, on the +j side, which is to
            // the right of i→k→−i.
            poly.reversed()
        }
        ReflectionFamily::D => left_oriented([i, S2Point::K, equator_point(PI / l)]),
        ReflectionFamily::T => left_oriented([i, sp.u_t, sp.u_t_prime]),
        ReflectionFamily::O => left_oriented([i, sp.u_t, sp.u_o]),
        ReflectionFamily::I => left_oriented([i, sp.u_i, sp.u_i_prime]),
    }
}
