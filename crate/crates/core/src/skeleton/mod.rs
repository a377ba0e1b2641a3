//! Fundamental quadrilaterals, lifted skeletons and the geometric checks
//! on them.
//!
//! Each spec's quadrilateral is the horizontal lift from `2 ∈ S³₂` of a
//! closed piecewise geodesic ("route") in the tessellation graph of S²; the
//! route is stored as an explicit waypoint list, and four of its waypoints
//! are the corners K, L, M, N. At all other waypoints the route goes
//! straight, so each quadrilateral edge is a single geodesic arc.

mod checks;
mod orbit;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use checks::{
    check_proper, check_proper_with, common_perpendicular, convex_hull, normalize_position, normalized_quadrilateral,
    is_quad_symmetry, quad_symmetries, quad_symmetry, relabel_longer_first, ConvexHullCell,
    HullKind, Perpendicular, PerpendicularMethod, ProperReport, VertexProperness,
};
pub use orbit::{
    build_skeleton, complex_counts, fibre_intersection_count, generic_fibre_count, genus,
    geometric_complex_counts, quad_orbit, stabilizer, ComplexCounts, GreatCircle32, Skeleton,
};

use crate::groups::{GroupError, GroupSpec};
use crate::hopf::{lift_path, Arc32, HopfError, S32Point};
use crate::quat::{Quaternion, Rotation4};
use crate::sphere2::{equator_point, GeodesicPolygon2, S2Point, SpecialPoints, SphereError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SkeletonError {
    #[error("lifted route ends at distance {0} from its start")]
    LiftNotClosed(f64),
    #[error("route does not go straight through waypoint {0}")]
    NotStraight(usize),
    #[error("measured angle {measured} at vertex {vertex} differs from π/{denominator}")]
    AngleMismatch { vertex: usize, measured: f64, denominator: u32 },
    #[error("spec {0} has mn = 1; its quadrilateral is a single great circle")]
    DegenerateSpec(GroupSpec),
    #[error("spec {0} needs angles of at most π/2 at every vertex (m, n ≥ 2)")]
    SmallAngles(GroupSpec),
    #[error("orbit of the quadrilateral has {found} distinct elements, expected {expected}")]
    OrbitSize { found: usize, expected: usize },
    #[error("no common perpendicular (orthogonality residual {0})")]
    NoPerpendicular(f64),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Sphere(#[from] SphereError),
}

/// The base route of a spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    /// Closed waypoint list; the last waypoint equals the first (i).
    pub waypoints: Vec<S2Point>,
    /// Waypoint indices of K, L, M, N.
    pub corners: [usize; 4],
    /// Self-intersection of the route used by the fibre-based symmetry, for
    /// the specs whose extra symmetry is a π-rotation about a fibre.
    pub crossing: Option<S2Point>,
}

impl Route {
    /// The route as a closed geodesic polygon through its waypoints.
    pub fn polygon(&self) -> Result<GeodesicPolygon2, SphereError> {
        let n = self.waypoints.len() - 1;
        GeodesicPolygon2::from_vertices(&self.waypoints[..n])
    }
}

/// Straight continuation through `v`: the point at distance `d` beyond `v`
/// on the great circle from `x` through `v`.
fn continue_through(v: S2Point, x: S2Point, d: f64) -> S2Point {
    let (pv, px) = (v.get(), x.get());
    let toward = (px - pv * pv.dot(px)).normalized();
    S2Point::normalize(pv * d.cos() - toward * d.sin())
}

/// The vertices opposite the typical-piece neighbours `a`, `b` around the
/// crossing vertex `v`. With an even number of mirrors through `v` the
/// opposite piece is the point reflection of the piece; with an odd number
/// the two edge lengths swap.
fn opposite(v: S2Point, a: S2Point, b: S2Point, even: bool) -> (S2Point, S2Point) {
    let (da, db) = (v.angle_to(a), v.angle_to(b));
    if even {
        (continue_through(v, a, da), continue_through(v, b, db))
    } else {
        (continue_through(v, a, db), continue_through(v, b, da))
    }
}

/// The base route of `spec`.
pub fn route_data(spec: GroupSpec) -> Route {
    let sp = SpecialPoints::new();
    let (i, k) = (S2Point::I, S2Point::K);
    let mi = i.antipode();
    let ek = equator_point;
    match spec {
        GroupSpec::C { m, n } => {
            let (pm, pn) = (PI / f64::from(m), PI / f64::from(n));
            Route {
                waypoints: vec![i, k, mi, ek(pn), i, ek(pm + pn), mi, ek(pm), i],
                corners: [0, 2, 4, 6],
                crossing: None,
            }
        }
        GroupSpec::D { l } => {
            let pl = PI / f64::from(l);
            Route {
                waypoints: vec![
                    i,
                    k,
                    ek(pl / 2.0),
                    ek(pl),
                    i,
                    ek(pl).antipode(),
                    ek(pl / 2.0).antipode(),
                    k.antipode(),
                    i,
                ],
                corners: [1, 3, 5, 7],
                crossing: None,
            }
        }
        GroupSpec::DHalf { l } => {
            let pl = PI / f64::from(l);
            Route {
                waypoints: vec![
                    i,
                    k,
                    ek(pl / 2.0),
                    ek(pl),
                    ek(1.5 * pl),
                    ek(2.0 * pl),
                    mi,
                    ek(pl),
                    i,
                ],
                corners: [0, 1, 5, 6],
                crossing: Some(ek(pl)),
            }
        }
        GroupSpec::T(2) => {
            let (a, b) = (sp.u_t, sp.u_t_prime);
            let (xa, xb) = opposite(i, a, b, true);
            Route { waypoints: vec![i, a, b, i, xb, xa, i], corners: [1, 2, 4, 5], crossing: None }
        }
        GroupSpec::T(_) => {
            let v = sp.u_t_prime;
            let (xa, xb) = opposite(v, i, sp.u_t, false);
            Route { waypoints: vec![i, sp.u_t, v, xb, xa, v, i], corners: [0, 1, 3, 4], crossing: None }
        }
        GroupSpec::O(2) => {
            let v = sp.u_o;
            let (xa, xb) = opposite(v, i, sp.u_t, true);
            Route { waypoints: vec![i, sp.u_t, v, xb, xa, v, i], corners: [4, 0, 1, 3], crossing: Some(v) }
        }
        GroupSpec::O(3) => {
            let v = sp.u_t;
            let (xa, xb) = opposite(v, i, sp.u_o, false);
            Route { waypoints: vec![i, sp.u_o, v, xb, xa, v, i], corners: [0, 1, 3, 4], crossing: None }
        }
        GroupSpec::O(_) => {
            let (a, b) = (sp.u_o, sp.u_t);
            let (xa, xb) = opposite(i, a, b, true);
            Route { waypoints: vec![i, a, b, i, xb, xa, i], corners: [1, 2, 4, 5], crossing: Some(i) }
        }
        GroupSpec::I(2) => {
            let (a, b) = (sp.u_i, sp.u_i_prime);
            let (xa, xb) = opposite(i, a, b, true);
            Route { waypoints: vec![i, a, b, i, xb, xa, i], corners: [1, 2, 4, 5], crossing: Some(i) }
        }
        GroupSpec::I(3) => {
            let v = sp.u_i;
            let (xa, xb) = opposite(v, i, sp.u_i_prime, false);
            Route {
                waypoints: vec![i, v, xa, xb, v, sp.u_i_prime, i],
                corners: [0, 2, 3, 5],
                crossing: None,
            }
        }
        GroupSpec::I(_) => {
            let v = sp.u_i_prime;
            let (xa, xb) = opposite(v, i, sp.u_i, false);
            Route { waypoints: vec![i, sp.u_i, v, xb, xa, v, i], corners: [0, 1, 3, 4], crossing: None }
        }
    }
}

/// The base route of `spec` as a closed geodesic polygon starting at i.
pub fn route(spec: GroupSpec) -> Result<GeodesicPolygon2, SkeletonError> {
    Ok(route_data(spec).polygon()?)
}

/// A geodesic quadrilateral KLMN of S³₂ with vertex angles `π/d_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quadrilateral32 {
    pub vertices: [S32Point; 4],
    /// Edge `t` runs from vertex `t` to vertex `t+1`.
    pub edges: [Arc32; 4],
    pub angle_denominators: [u32; 4],
    /// Base point of the fibre about which the quadrilateral is symmetric, if any.
    pub crossing: Option<S2Point>,
}

impl Quadrilateral32 {
    pub fn lengths(&self) -> [f64; 4] {
        self.edges.map(|e| e.length)
    }

    /// Unit tangents at vertex `t` pointing along edge `t` and back along edge `t−1`.
    pub fn tangents_at(&self, t: usize) -> (Quaternion, Quaternion) {
        let out = self.edges[t % 4].tangent;
        let back = -self.edges[(t + 3) % 4].end_tangent();
        (out, back)
    }

    /// Interior angles at K, L, M, N.
    pub fn angles(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|t| {
            let (a, b) = self.tangents_at(t);
            a.dot(b).clamp(-1.0, 1.0).acos()
        })
    }

    /// `(m, n)` of the angle labels.
    pub fn mn(&self) -> (u32, u32) {
        let d = self.angle_denominators;
        (d[0], d.iter().copied().find(|&x| x != d[0]).unwrap_or(d[0]))
    }

    /// Image under an isometry.
    pub fn transformed(&self, g: &Rotation4) -> Self {
        Quadrilateral32 {
            vertices: self.vertices.map(|v| S32Point::project(g.apply(v.get()))),
            edges: self.edges.map(|e| e.transformed(g)),
            angle_denominators: self.angle_denominators,
            crossing: None,
        }
    }

    /// The same quadrilateral read from vertex `start`, optionally in the
    /// opposite direction.
    pub fn relabeled(&self, start: usize, reverse: bool) -> Self {
        let order: [usize; 4] = if reverse {
            [0, 1, 2, 3].map(|t| (start + 4 - t) % 4)
        } else {
            [0, 1, 2, 3].map(|t| (start + t) % 4)
        };
        let edges = [0, 1, 2, 3].map(|t| {
            if reverse {
                self.edges[(order[t] + 3) % 4].reversed()
            } else {
                self.edges[order[t]]
            }
        });
        Quadrilateral32 {
            vertices: order.map(|o| self.vertices[o]),
            edges,
            angle_denominators: order.map(|o| self.angle_denominators[o]),
            crossing: self.crossing,
        }
    }

    /// Points along the boundary: `per_edge` points on each edge starting at its vertex.
    pub fn boundary_samples(&self, per_edge: usize) -> Vec<Quaternion> {
        self.edges
            .iter()
            .flat_map(|e| (0..per_edge).map(move |s| e.point(e.length * s as f64 / per_edge as f64)))
            .collect()
    }
}

/// Measured lengths and angles of a quadrilateral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadMetrics {
    pub lengths: [f64; 4],
    pub angles: [f64; 4],
}

impl QuadMetrics {
    /// Largest absolute deviation from `other` over lengths and angles.
    pub fn max_deviation(&self, other: &QuadMetrics) -> f64 {
        self.lengths
            .iter()
            .zip(&other.lengths)
            .chain(self.angles.iter().zip(&other.angles))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn quad_metrics(q: &Quadrilateral32) -> QuadMetrics {
    QuadMetrics { lengths: q.lengths(), angles: q.angles() }
}

/// The closed-form lengths `(KL, LM, MN, NK)` and angles `(K, L, M, N)`.
pub fn table_row(spec: GroupSpec) -> QuadMetrics {
    let psi = |t: f64| t.clamp(-1.0, 1.0).acos();
    let s3 = 3f64.sqrt();
    let s5 = 5f64.sqrt();
    let mu = (s5 + 1.0) / (2.0 * s3);
    let nu = (10.0 + 2.0 * s5).sqrt() / (2.0 * s5);
    let kappa = (1.0 - nu * nu).sqrt();
    let sigma = (1.0 - mu * mu).sqrt();
    let lengths = match spec {
        GroupSpec::C { .. } => [PI; 4],
        GroupSpec::D { l } => {
            let a = PI / f64::from(l);
            [a, PI, a, PI]
        }
        GroupSpec::DHalf { l } => [PI / 2.0, 2.0 * PI / f64::from(l), PI / 2.0, PI],
        GroupSpec::T(2) => [psi(1.0 / 3.0), psi(-1.0 / 3.0), psi(1.0 / 3.0), psi(-1.0 / 3.0)],
        GroupSpec::T(_) => [psi(1.0 / s3), psi(-1.0 / s3), psi(1.0 / s3), psi(-1.0 / s3)],
        GroupSpec::O(2) => [PI / 2.0, psi(1.0 / s3), psi(1.0 / 3.0), psi(1.0 / s3)],
        GroupSpec::O(3) => [PI / 4.0, PI / 2.0, PI / 4.0, PI / 2.0],
        GroupSpec::O(_) => {
            let a = psi(2.0 / 6f64.sqrt());
            [a, psi(-1.0 / 3.0), a, PI / 2.0]
        }
        GroupSpec::I(2) => [psi(mu * nu), psi(1.0 / s5), psi(mu * nu), psi(s5 / 3.0)],
        GroupSpec::I(3) => [psi(kappa), psi(nu), psi(kappa), psi(nu)],
        GroupSpec::I(_) => [psi(mu), psi(sigma), psi(mu), psi(sigma)],
    };
    let angles = spec.angle_denominators().map(|d| PI / f64::from(d));
    QuadMetrics { lengths, angles }
}

const STRAIGHT_TOL: f64 = 1e-9;

/// The fundamental quadrilateral of `spec`: the lift of its route from 2.
pub fn fundamental_quadrilateral(spec: GroupSpec) -> Result<Quadrilateral32, SkeletonError> {
    let data = route_data(spec);
    let poly = data.polygon()?;
    let start = S32Point::new(Quaternion::real(2.0))?;
    let lifted = lift_path(poly.arcs(), start)?;
    let end = lifted.end().expect("routes are non-empty");
    let gap = end.get().dist(start.get());
    if gap > 1e-7 {
        return Err(SkeletonError::LiftNotClosed(gap));
    }
    let legs = &lifted.arcs;
    let n = legs.len();
    let mut edges = Vec::with_capacity(4);
    for t in 0..4 {
        let (from, to) = (data.corners[t], data.corners[(t + 1) % 4]);
        let count = (to + n - from) % n;
        let first = legs[from];
        let mut length = first.length;
        for step in 1..count {
            let idx = (from + step) % n;
            let prev = legs[(idx + n - 1) % n];
            if (prev.end_tangent() - legs[idx].tangent).norm() > STRAIGHT_TOL {
                return Err(SkeletonError::NotStraight(idx));
            }
            length += legs[idx].length;
        }
        let start = if from == 0 { start } else { legs[from].start };
        edges.push(Arc32::new(start, first.tangent, length)?);
    }
    let edges: [Arc32; 4] = edges.try_into().expect("four edges");
    let quad = Quadrilateral32 {
        vertices: edges.map(|e| e.start),
        edges,
        angle_denominators: spec.angle_denominators(),
        crossing: data.crossing,
    };
    for (vertex, (&measured, &denominator)) in quad.angles().iter().zip(&quad.angle_denominators).enumerate() {
        if (measured - PI / f64::from(denominator)).abs() > 1e-9 {
            return Err(SkeletonError::AngleMismatch { vertex, measured, denominator });
        }
    }
    Ok(quad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn routes_start_and_end_at_i() {
        for spec in GroupSpec::representatives() {
            let r = route_data(spec);
            assert_eq!(r.waypoints.first(), Some(&S2Point::I));
            assert_eq!(r.waypoints.last(), Some(&S2Point::I));
        }
    }

    #[test]
    fn table_rows_reproduced() {
        let mut specs = GroupSpec::special();
        for a in 1..=6 {
            specs.push(GroupSpec::D { l: a });
            specs.push(GroupSpec::DHalf { l: a });
            for b in 1..=6 {
                specs.push(GroupSpec::C { m: a, n: b });
            }
        }
        for spec in specs {
            let q = fundamental_quadrilateral(spec).unwrap();
            let dev = quad_metrics(&q).max_deviation(&table_row(spec));
            assert!(dev < 1e-9, "{spec}: deviation {dev}");
        }
    }

    #[test]
    fn relabeling_preserves_metrics() {
        let q = fundamental_quadrilateral(GroupSpec::O(4)).unwrap();
        let r = q.relabeled(2, true);
        let back = r.relabeled(2, true);
        for t in 0..4 {
            assert!(back.vertices[t].get().dist(q.vertices[t].get()) < 1e-12);
            assert!((back.edges[t].tangent - q.edges[t].tangent).norm() < 1e-12);
        }
        let mut a = q.angles();
        let mut b = r.angles();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));
    }
}
