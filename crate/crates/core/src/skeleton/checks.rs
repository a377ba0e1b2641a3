//! Convex hulls, properness, the common perpendicular of the diagonals and
//! the normalizing isometry of a quadrilateral.

use serde::{Deserialize, Serialize};

use super::{Quadrilateral32, SkeletonError};
use crate::hopf::{fiber_through, Arc32};
use crate::linalg::{cross3, principal_vectors, solve4};
use crate::quat::{pi_rotation_about_plane, Quaternion, Rotation4, UnitQuaternion};
use crate::tol::UNIT_TOL;

/// Shape of the spherical convex hull of a quadrilateral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HullKind {
    /// Geodesic tetrahedron in an open hemisphere (m, n ≥ 2).
    Tetrahedron,
    /// Two antipodal vertices; the hull is a lune.
    Bigon,
    /// The quadrilateral is a single great circle (mn = 1).
    Circle,
}

/// Convex hull of the vertices of a quadrilateral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexHullCell {
    pub kind: HullKind,
    pub vertices: [Quaternion; 4],
    /// Unit normals of the face hyperplanes, oriented towards the hull.
    /// Face `f` omits vertex `f`. Empty unless the kind is a tetrahedron.
    pub face_normals: Vec<Quaternion>,
    /// Unit vector with positive inner product against every vertex.
    pub hemisphere_witness: Option<Quaternion>,
    /// `min_t ⟨witness, v_t/2⟩`; positive iff the hull lies in an open hemisphere.
    pub hemisphere_margin: f64,
}

impl ConvexHullCell {
    /// Whether `x` lies on the non-negative side of every face, within `tol`.
    pub fn contains(&self, x: Quaternion, tol: f64) -> bool {
        self.kind == HullKind::Tetrahedron && self.face_normals.iter().all(|n| n.dot(x) >= -tol)
    }

    /// Whether `x` lies strictly inside every face by more than `tol`.
    pub fn contains_strictly(&self, x: Quaternion, tol: f64) -> bool {
        self.kind == HullKind::Tetrahedron && self.face_normals.iter().all(|n| n.dot(x) > tol)
    }

    /// Largest violation of the face inequalities by the hull's own vertices.
    pub fn vertex_violation(&self) -> f64 {
        self.face_normals
            .iter()
            .flat_map(|n| self.vertices.iter().map(move |v| -n.dot(*v)))
            .fold(0.0, f64::max)
    }
}

pub fn convex_hull(q: &Quadrilateral32) -> ConvexHullCell {
    let vertices = q.vertices.map(|v| v.get());
    let (m, n) = q.mn();
    let kind = if m * n == 1 {
        HullKind::Circle
    } else if m < 2 || n < 2 {
        HullKind::Bigon
    } else {
        HullKind::Tetrahedron
    };
    let mut cell = ConvexHullCell {
        kind,
        vertices,
        face_normals: Vec::new(),
        hemisphere_witness: None,
        hemisphere_margin: f64::NEG_INFINITY,
    };
    if kind != HullKind::Tetrahedron {
        return cell;
    }
    cell.face_normals = (0..4)
        .map(|f| {
            let others: Vec<Quaternion> = (0..4).filter(|&t| t != f).map(|t| vertices[t]).collect();
            let nrm = cross3(others[0], others[1], others[2]).normalized();
            if nrm.dot(vertices[f]) < 0.0 {
                -nrm
            } else {
                nrm
            }
        })
        .collect();
    let rows = vertices.map(|v| v.to_array());
    if let Some(w) = solve4(rows, [1.0; 4]) {
        let w = Quaternion::from_array(w).normalized();
        cell.hemisphere_margin = vertices.iter().map(|v| w.dot(*v) / 2.0).fold(f64::INFINITY, f64::min);
        cell.hemisphere_witness = Some(w);
    }
    cell
}

/// Boundedness of the quadrilateral by the two spheres at one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexProperness {
    /// The sphere `S(γ_{t−1}, N_t)` through the incoming edge bounds the quadrilateral.
    pub bounded_by_prev: bool,
    /// The sphere `S(γ_t, N_t)` through the outgoing edge bounds the quadrilateral.
    pub bounded_by_next: bool,
}

impl VertexProperness {
    pub fn proper(&self) -> bool {
        self.bounded_by_prev || self.bounded_by_next
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProperReport {
    pub vertices: [VertexProperness; 4],
    pub samples_per_edge: usize,
}

impl ProperReport {
    pub fn proper(&self) -> bool {
        self.vertices.iter().all(VertexProperness::proper)
    }
}

/// Properness test with 64 samples per edge.
pub fn check_proper(q: &Quadrilateral32) -> ProperReport {
    check_proper_with(q, 64)
}

/// Properness test sampling every edge at `samples_per_edge + 1` points.
pub fn check_proper_with(q: &Quadrilateral32, samples_per_edge: usize) -> ProperReport {
    let samples: Vec<Quaternion> = q
        .edges
        .iter()
        .flat_map(|e| (0..=samples_per_edge).map(move |s| e.point(e.length * s as f64 / samples_per_edge as f64)))
        .collect();
    let bounds = |normal: Quaternion| {
        let (lo, hi) = samples
            .iter()
            .map(|x| normal.dot(*x))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| (lo.min(d), hi.max(d)));
        lo >= -UNIT_TOL || hi <= UNIT_TOL
    };
    let vertices = [0, 1, 2, 3].map(|t| {
        let v = q.vertices[t].get();
        let out = q.edges[t].tangent;
        let incoming = q.edges[(t + 3) % 4].end_tangent();
        // Normal of S(γ_{t−1}, γ_t): the direction of the perpendicular N_t.
        let nt = cross3(v, out, incoming).normalized();
        VertexProperness {
            bounded_by_prev: bounds(cross3(v, incoming, nt).normalized()),
            bounded_by_next: bounds(cross3(v, out, nt).normalized()),
        }
    });
    ProperReport { vertices, samples_per_edge }
}

/// How the common perpendicular was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PerpendicularMethod {
    /// Joins the midpoints of the diagonals KM and LN.
    DiagonalMidpoints,
    /// Lies on the fibre meeting the quadrilateral orthogonally at the
    /// route's self-intersection.
    Fibre,
}

/// Common perpendicular `o₁o₂` of the diagonals KM and LN.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perpendicular {
    pub o1: Quaternion,
    pub o2: Quaternion,
    pub length: f64,
    /// Largest |cos| between the segment and a diagonal at either end.
    pub residual: f64,
    pub method: PerpendicularMethod,
    /// The π-rotation that maps the quadrilateral to itself.
    pub symmetry: Rotation4,
}

const PERPENDICULAR_TOL: f64 = 1e-6;

/// Unit tangent at `x` of the great circle through `x` and `y`, pointing to `y`.
fn direction(x: Quaternion, y: Quaternion) -> Quaternion {
    let xh = x / 2.0;
    (y - xh * y.dot(xh)).normalized()
}

/// Whether `x` lies in the interior of the minor arc from `a` to `b`.
fn on_minor_arc(x: Quaternion, a: Quaternion, b: Quaternion) -> bool {
    let ang = |p: Quaternion, q: Quaternion| (p.dot(q) / 4.0).clamp(-1.0, 1.0).acos();
    let (t1, t2) = (ang(a, x), ang(x, b));
    (t1 + t2 - ang(a, b)).abs() < 1e-9 && t1 > 1e-9 && t2 > 1e-9
}

pub fn common_perpendicular(q: &Quadrilateral32) -> Result<Perpendicular, SkeletonError> {
    let v = q.vertices.map(|p| p.get());
    let (o1, o2, symmetry, method) = match q.crossing {
        None => {
            let o1 = Arc32::between(q.vertices[0], q.vertices[2])?.midpoint();
            let o2 = Arc32::between(q.vertices[1], q.vertices[3])?.midpoint();
            (o1, o2, pi_rotation_about_plane(o1, o2), PerpendicularMethod::DiagonalMidpoints)
        }
        Some(u) => {
            let base = fiber_through(u).base.unit();
            let sigma = pi_rotation_about_plane(base, Quaternion::I * base);
            let km = [v[0] / 2.0, direction(v[0], v[2])];
            let o1 = principal_vectors(km, [base, Quaternion::I * base])
                .iter()
                .flat_map(|&(_, x, _)| [x * 2.0, x * -2.0])
                .find(|&x| on_minor_arc(x, v[0], v[2]))
                .ok_or(SkeletonError::NoPerpendicular(f64::INFINITY))?;
            (o1, sigma.apply(o1), sigma, PerpendicularMethod::Fibre)
        }
    };
    let residual = [
        direction(o1, o2).dot(direction(o1, v[2])).abs(),
        direction(o2, o1).dot(direction(o2, v[3])).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if !(residual <= PERPENDICULAR_TOL) {
        return Err(SkeletonError::NoPerpendicular(residual));
    }
    let length = 2.0 * (o1.dot(o2) / 4.0).clamp(-1.0, 1.0).acos();
    Ok(Perpendicular { o1, o2, length, residual, method, symmetry })
}

/// The π-rotation mapping the quadrilateral onto itself (swapping K↔M and L↔N
/// or fixing a diagonal, depending on the spec).
pub fn quad_symmetry(q: &Quadrilateral32) -> Result<Rotation4, SkeletonError> {
    Ok(common_perpendicular(q)?.symmetry)
}

/// Whether `g` maps the quadrilateral onto itself, respecting the vertex angles.
pub fn is_quad_symmetry(q: &Quadrilateral32, g: &Rotation4) -> bool {
    let vertex_ok = (0..4).all(|t| {
        let image = g.apply(q.vertices[t].get());
        (0..4).any(|s| {
            (q.vertices[s].get() - image).norm() < 1e-9 && q.angle_denominators[s] == q.angle_denominators[t]
        })
    });
    let edge_ok = q.edges.iter().all(|e| {
        let image = g.apply(e.midpoint());
        q.edges.iter().any(|f| (f.midpoint() - image).norm() < 1e-9)
    });
    vertex_ok && edge_ok
}

/// All π-rotations mapping the quadrilateral onto itself among the half-turn
/// of [`quad_symmetry`] and the rotations about the diagonals and about the
/// planes through opposite edge midpoints.
pub fn quad_symmetries(q: &Quadrilateral32) -> Result<Vec<Rotation4>, SkeletonError> {
    let v = q.vertices.map(|p| p.get());
    let mid = q.edges.map(|e| e.midpoint());
    let mut out = vec![quad_symmetry(q)?];
    for (a, b) in [(v[0], v[2]), (v[1], v[3]), (mid[0], mid[2]), (mid[1], mid[3])] {
        let g = pi_rotation_about_plane(a, b);
        if is_quad_symmetry(q, &g) && !out.iter().any(|h| h.approx_eq(&g)) {
            out.push(g);
        }
    }
    Ok(out)
}

/// The quadrilateral read from `vertex` with its longer edge first (ties
/// favour the outgoing edge).
pub fn relabel_longer_first(q: &Quadrilateral32, vertex: usize) -> Quadrilateral32 {
    let out = q.edges[vertex % 4].length;
    let back = q.edges[(vertex + 3) % 4].length;
    q.relabeled(vertex % 4, back > out)
}

/// A fibration-preserving isometry η with η(v) = 2, the first (longer) edge
/// at 2 leaving along `j` and the second along `e^{iπ/l} j`.
pub fn normalize_position(q: &Quadrilateral32, vertex: usize) -> Rotation4 {
    let r = relabel_longer_first(q, vertex);
    let v = r.vertices[0].get();
    let (first, second) = r.tangents_at(0);
    // Horizontal tangents at v, moved to 1 by right multiplication with v̄/2,
    // lie in span{j, k}: w = j·e^{−iβ}.
    let w = first * v.conj() / 2.0;
    let beta = w.z.atan2(w.y);
    let tau = UnitQuaternion::exp_i(beta / 2.0);
    let eta = Rotation4::new(tau, UnitQuaternion::normalize(v.conj() * tau.get()));
    let image = eta.apply(second);
    // e^{iπ/l} j = j e^{−iπ/l} = j cos(π/l) + k sin(π/l); [j, j] fixes 2 and j
    // and maps j e^{iθ} to j e^{−iθ}.
    if image.z < 0.0 {
        eta.compose(Rotation4::from_quats(Quaternion::J, Quaternion::J))
    } else {
        eta
    }
}

/// The quadrilateral in normal position at `vertex`, with its normalizing map.
pub fn normalized_quadrilateral(q: &Quadrilateral32, vertex: usize) -> (Rotation4, Quadrilateral32) {
    let eta = normalize_position(q, vertex);
    let mut r = relabel_longer_first(q, vertex).transformed(&eta);
    r.crossing = None;
    (eta, r)
}
