//! Orbits of the fundamental quadrilateral, skeleton circles, cell counts,
//! genus and fibre intersections.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{fundamental_quadrilateral, Quadrilateral32, SkeletonError};
use crate::groups::{symmetry_group, GroupSpec, SymmetryGroup};
use crate::hopf::{fiber_through, hopf_project, S32Point};
use crate::linalg::{max_abs_diff, plane_projector, principal_vectors};
use crate::pointset::PointIndex;
use crate::quat::{Quaternion, Rotation4};
use crate::sphere2::S2Point;
use crate::tol::GROUP_TOL;

/// A great circle `s ↦ 2(cos(s/2)·through/2 + sin(s/2)·tangent)` of S³₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreatCircle32 {
    pub through: S32Point,
    pub tangent: Quaternion,
}

impl GreatCircle32 {
    pub fn point(&self, s: f64) -> Quaternion {
        (self.through.unit() * (s / 2.0).cos() + self.tangent * (s / 2.0).sin()) * 2.0
    }

    /// Orthogonal projector onto the spanning 2-plane.
    pub fn projector(&self) -> [[f64; 4]; 4] {
        plane_projector(self.through.unit(), self.tangent)
    }

    pub fn approx_eq(&self, o: &GreatCircle32) -> bool {
        max_abs_diff(&self.projector(), &o.projector()) <= GROUP_TOL
    }

    pub fn transformed(&self, g: &Rotation4) -> Self {
        GreatCircle32 { through: S32Point::project(g.apply(self.through.get())), tangent: g.apply(self.tangent) }
    }

    /// The π-rotation fixing this circle pointwise.
    pub fn pi_rotation(&self) -> Rotation4 {
        crate::quat::pi_rotation_about_plane(self.through.unit(), self.tangent)
    }

    /// Angle between the circle and the fibre direction at the point `s`.
    pub fn fibre_angle(&self, s: f64) -> f64 {
        let r = self.point(s);
        let t = self.tangent * (s / 2.0).cos() - self.through.unit() * (s / 2.0).sin();
        let fibre = Quaternion::I * r / 2.0;
        t.dot(fibre).clamp(-1.0, 1.0).acos()
    }
}

/// Deduplicating set of great circles keyed by their projectors.
#[derive(Debug, Default)]
struct CircleSet {
    circles: Vec<GreatCircle32>,
    projectors: Vec<[[f64; 4]; 4]>,
    index: HashMap<[i64; 10], usize>,
}

impl CircleSet {
    fn key(p: &[[f64; 4]; 4]) -> [i64; 10] {
        let mut k = [0i64; 10];
        let mut n = 0;
        for r in 0..4 {
            for c in r..4 {
                k[n] = (p[r][c] * 1e5).round() as i64;
                n += 1;
            }
        }
        k
    }

    fn insert(&mut self, c: GreatCircle32) -> bool {
        let p = c.projector();
        let key = CircleSet::key(&p);
        let hit = match self.index.get(&key) {
            Some(&i) if max_abs_diff(&self.projectors[i], &p) <= GROUP_TOL => true,
            _ => self.projectors.iter().any(|q| max_abs_diff(q, &p) <= GROUP_TOL),
        };
        if hit {
            return false;
        }
        self.index.insert(key, self.circles.len());
        self.circles.push(c);
        self.projectors.push(p);
        true
    }

    fn contains(&self, c: &GreatCircle32) -> bool {
        let p = c.projector();
        match self.index.get(&CircleSet::key(&p)) {
            Some(&i) if max_abs_diff(&self.projectors[i], &p) <= GROUP_TOL => true,
            _ => self.projectors.iter().any(|q| max_abs_diff(q, &p) <= GROUP_TOL),
        }
    }
}

/// The union of great circles carrying the orbit of the fundamental quadrilateral.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Skeleton {
    pub spec: GroupSpec,
    pub circles: Vec<GreatCircle32>,
}

impl Skeleton {
    /// Whether the π-rotation about every member circle maps the set to itself.
    pub fn is_pi_rotation_invariant(&self) -> bool {
        let mut set = CircleSet::default();
        for c in &self.circles {
            set.insert(*c);
        }
        self.circles.iter().all(|axis| {
            let g = axis.pi_rotation();
            self.circles.iter().all(|c| set.contains(&c.transformed(&g)))
        })
    }
}

fn edge_circles(q: &Quadrilateral32) -> Vec<GreatCircle32> {
    q.edges.iter().map(|e| GreatCircle32 { through: e.start, tangent: e.tangent }).collect()
}

/// The skeleton of `spec` as the orbit of the four edge circles.
pub fn build_skeleton(spec: GroupSpec) -> Result<Skeleton, SkeletonError> {
    let q = fundamental_quadrilateral(spec)?;
    let group = symmetry_group(spec)?;
    let mut set = CircleSet::default();
    for g in group.elements() {
        for c in edge_circles(&q) {
            set.insert(c.transformed(g));
        }
    }
    Ok(Skeleton { spec, circles: set.circles })
}

/// Vertex-set key of a quadrilateral in a shared point index.
fn quad_key(q: &Quadrilateral32, index: &mut PointIndex) -> [usize; 4] {
    let mut ids = q.vertices.map(|v| index.insert(v.get()).0);
    ids.sort_unstable();
    ids
}

/// The orbit of the fundamental quadrilateral under its group (one image per element).
pub fn quad_orbit(spec: GroupSpec) -> Result<Vec<Quadrilateral32>, SkeletonError> {
    let q = fundamental_quadrilateral(spec)?;
    let (m, n) = q.mn();
    if m * n == 1 {
        return Err(SkeletonError::DegenerateSpec(spec));
    }
    let group = symmetry_group(spec)?;
    let orbit: Vec<Quadrilateral32> = group.elements().iter().map(|g| q.transformed(g)).collect();
    let mut index = PointIndex::new(1e-7);
    let mut keys: Vec<[usize; 4]> = orbit.iter().map(|o| quad_key(o, &mut index)).collect();
    keys.sort_unstable();
    keys.dedup();
    if keys.len() != group.order() {
        return Err(SkeletonError::OrbitSize { found: keys.len(), expected: group.order() });
    }
    Ok(orbit)
}

/// Elements of `group` mapping `q` onto itself (as a point set of vertices and edge midpoints).
pub fn stabilizer(q: &Quadrilateral32, group: &SymmetryGroup) -> Vec<Rotation4> {
    let marks: Vec<Quaternion> =
        q.vertices.iter().map(|v| v.get()).chain(q.edges.iter().map(|e| e.midpoint())).collect();
    let mut index = PointIndex::new(1e-7);
    for m in &marks {
        index.insert(*m);
    }
    group
        .elements()
        .iter()
        .copied()
        .filter(|g| marks.iter().all(|m| index.find(g.apply(*m)).is_some()))
        .collect()
}

/// Vertex, edge and face counts of the cell decomposition of the closed surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexCounts {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

impl ComplexCounts {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces as i64
    }

    pub fn genus(&self) -> i64 {
        1 - self.euler_characteristic() / 2
    }
}

fn require_big_angles(spec: GroupSpec) -> Result<(u32, u32), SkeletonError> {
    let (m, n) = spec.mn();
    if m < 2 || n < 2 {
        return Err(SkeletonError::SmallAngles(spec));
    }
    Ok((m, n))
}

/// `V = |G|/m + |G|/n`, `E = 2|G|`, `F = |G|`.
pub fn complex_counts(spec: GroupSpec) -> Result<ComplexCounts, SkeletonError> {
    let (m, n) = require_big_angles(spec)?;
    let g = spec.order();
    Ok(ComplexCounts { vertices: g / m as usize + g / n as usize, edges: 2 * g, faces: g })
}

/// Counts obtained by deduplicating the vertices and edges of the orbit.
pub fn geometric_complex_counts(spec: GroupSpec) -> Result<ComplexCounts, SkeletonError> {
    require_big_angles(spec)?;
    let orbit = quad_orbit(spec)?;
    let mut vertices = PointIndex::new(1e-7);
    let mut edges = PointIndex::new(1e-7);
    for q in &orbit {
        for v in &q.vertices {
            vertices.insert(v.get());
        }
        for e in &q.edges {
            edges.insert(e.midpoint());
        }
    }
    Ok(ComplexCounts { vertices: vertices.len(), edges: edges.len(), faces: orbit.len() })
}

/// `g = 1 + ½(1 − 1/m − 1/n)|G|`, evaluated exactly.
pub fn genus(spec: GroupSpec) -> Result<i64, SkeletonError> {
    let (m, n) = require_big_angles(spec)?;
    let (m, n, g) = (i64::from(m), i64::from(n), spec.order() as i64);
    let num = (m * n - m - n) * g;
    let den = 2 * m * n;
    debug_assert_eq!(num % den, 0, "genus formula is integral for valid specs");
    Ok(1 + num / den)
}

/// Number of distinct points where the skeleton meets the fibre over `u`.
///
/// A circle meets the fibre iff their planes share a line (smallest principal
/// angle zero); that line gives two antipodal intersection points. Circles
/// coinciding with the fibre are skipped.
pub fn fibre_intersection_count(skeleton: &Skeleton, u: S2Point) -> usize {
    let base = fiber_through(u).base.unit();
    let fibre = [base, Quaternion::I * base];
    let mut points = PointIndex::new(1e-6);
    for c in &skeleton.circles {
        let [(c0, x, _), (c1, _, _)] = principal_vectors(fibre, [c.through.unit(), c.tangent]);
        if c0 < 1.0 - 1e-9 || c1 > 1.0 - 1e-9 {
            continue;
        }
        points.insert(x * 2.0);
        points.insert(x * -2.0);
    }
    points.len()
}

/// Fibre intersection count at generic base points: points of the base
/// graph given by the projections of interior points of the quadrilateral's
/// edges. Returns the counts at each sampled base point.
pub fn generic_fibre_count(spec: GroupSpec, samples: usize) -> Result<Vec<usize>, SkeletonError> {
    let q = fundamental_quadrilateral(spec)?;
    let skeleton = build_skeleton(spec)?;
    Ok((0..samples)
        .map(|s| {
            let e = q.edges[s % 4];
            let frac = 0.3 + 0.37 * (s as f64 / samples.max(1) as f64);
            let u = hopf_project(S32Point::project(e.point(e.length * frac)));
            fibre_intersection_count(&skeleton, u)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_circle_for_mn_one() {
        let s = build_skeleton(GroupSpec::C { m: 1, n: 1 }).unwrap();
        assert_eq!(s.circles.len(), 1);
        assert_eq!(build_skeleton(GroupSpec::DHalf { l: 1 }).unwrap().circles.len(), 2);
        assert!(matches!(quad_orbit(GroupSpec::C { m: 1, n: 1 }), Err(SkeletonError::DegenerateSpec(_))));
    }

    #[test]
    fn genus_values() {
        assert_eq!(genus(GroupSpec::O(3)).unwrap(), 49);
        assert_eq!(genus(GroupSpec::I(3)).unwrap(), 361);
        for l in 2..=6 {
            assert_eq!(genus(GroupSpec::DHalf { l }).unwrap(), (i64::from(l) - 1).pow(2));
        }
        assert!(matches!(genus(GroupSpec::C { m: 1, n: 3 }), Err(SkeletonError::SmallAngles(_))));
    }

    #[test]
    fn counts_for_t3() {
        let c = complex_counts(GroupSpec::T(3)).unwrap();
        assert_eq!((c.vertices, c.edges, c.faces), (80, 192, 96));
        assert_eq!(c.euler_characteristic(), -16);
        assert_eq!(geometric_complex_counts(GroupSpec::T(3)).unwrap(), c);
    }
}
