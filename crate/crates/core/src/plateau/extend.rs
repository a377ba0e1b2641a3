//! Closed surfaces from group orbits of a disk, quotients, and diagnostics.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::mesh::{edge_faces, topology_of, BoundaryTag, SurfaceMesh};
use super::PlateauError;
use crate::export::{stereographic, ProjectionFrame};
use crate::groups::{GroupSpec, SymmetryGroup};
use crate::pointset::PointIndex;
use crate::quat::Quaternion;
use crate::sampling::rng;
use crate::skeleton::{complex_counts, convex_hull, fundamental_quadrilateral, quad_orbit, Quadrilateral32};
use crate::tol::{UNIT_TOL, WELD_TOL};

/// The union of the images of `disk` under every element of `group`, with
/// boundary vertices welded within [`WELD_TOL`] and faces oriented coherently.
pub fn extend_by_group(disk: &SurfaceMesh, group: &SymmetryGroup) -> Result<SurfaceMesh, PlateauError> {
    let n = disk.vertices.len();
    let mut welded = PointIndex::new(WELD_TOL);
    let mut vertices: Vec<Quaternion> = Vec::with_capacity(group.order() * n);
    let mut tags = Vec::with_capacity(group.order() * n);
    let mut faces = Vec::with_capacity(group.order() * disk.faces.len());
    // Only boundary vertices are welding candidates; their ids in `welded`
    // map to global vertex ids through `weld_ids`.
    let mut weld_ids: Vec<usize> = Vec::new();
    for g in group.elements() {
        let local: Vec<usize> = (0..n)
            .map(|v| {
                let x = g.apply(disk.vertices[v]);
                if disk.tags[v].is_boundary() {
                    let (id, fresh) = welded.insert(x);
                    if fresh {
                        weld_ids.push(vertices.len());
                        vertices.push(x);
                        tags.push(disk.tags[v]);
                    }
                    weld_ids[id]
                } else {
                    vertices.push(x);
                    tags.push(BoundaryTag::Interior);
                    vertices.len() - 1
                }
            })
            .collect();
        faces.extend(disk.faces.iter().map(|f| f.map(|v| local[v])));
    }
    orient_faces(&mut faces)?;
    let top = topology_of(vertices.len(), &faces);
    if top.singular_edges > 0 {
        return Err(PlateauError::NonManifold { singular_edges: top.singular_edges });
    }
    if top.boundary_edges > 0 {
        return Err(PlateauError::WeldFailure { boundary_edges: top.boundary_edges });
    }
    Ok(SurfaceMesh { vertices, faces, tags })
}

/// Flips faces so that every manifold edge is traversed once in each direction.
fn orient_faces(faces: &mut [[usize; 3]]) -> Result<(), PlateauError> {
    let edges = edge_faces(faces);
    let direction = |f: &[usize; 3], a: usize, b: usize| (0..3).any(|k| f[k] == a && f[(k + 1) % 3] == b);
    let mut flip: Vec<Option<bool>> = vec![None; faces.len()];
    for seed in 0..faces.len() {
        if flip[seed].is_some() {
            continue;
        }
        flip[seed] = Some(false);
        let mut queue = VecDeque::from([seed]);
        while let Some(f) = queue.pop_front() {
            let face = faces[f];
            let flipped = flip[f].expect("queued faces are assigned");
            for k in 0..3 {
                let (a, b) = (face[k], face[(k + 1) % 3]);
                let Some(adj) = edges.get(&(a.min(b), a.max(b))) else { continue };
                if adj.len() != 2 {
                    continue;
                }
                let other = if adj[0] == f { adj[1] } else { adj[0] };
                // Coherent iff the neighbour traverses a→b in the opposite direction.
                let same = direction(&faces[other], a, b);
                let want = flipped ^ same;
                match flip[other] {
                    None => {
                        flip[other] = Some(want);
                        queue.push_back(other);
                    }
                    Some(w) if w != want => return Err(PlateauError::NonOrientable),
                    Some(_) => {}
                }
            }
        }
    }
    for (f, fl) in faces.iter_mut().zip(flip) {
        if fl == Some(true) {
            f.swap(1, 2);
        }
    }
    Ok(())
}

/// Genus of the quotient surface `M/H` for a subgroup `H` of the spec's group
/// acting freely on S³₂: `1 − χ(M)/(2|H|)`.
pub fn quotient_genus(spec: GroupSpec, subgroup: &SymmetryGroup) -> Result<i64, PlateauError> {
    if !subgroup.acts_freely() {
        return Err(PlateauError::NotFree);
    }
    // The subgroup must permute the quadrilaterals of the orbit, freely.
    let orbit = quad_orbit(spec)?;
    let mut index = PointIndex::new(1e-7);
    let key = |q: &Quadrilateral32, index: &mut PointIndex| {
        let mut ids = q.vertices.map(|v| index.insert(v.get()).0);
        ids.sort_unstable();
        ids
    };
    let mut cells: HashMap<[usize; 4], usize> = HashMap::new();
    for (i, q) in orbit.iter().enumerate() {
        cells.insert(key(q, &mut index), i);
    }
    for h in subgroup.elements() {
        for (i, q) in orbit.iter().enumerate() {
            let image = q.transformed(h);
            let ids = image.vertices.map(|v| index.find(v.get()));
            let Some(ids) = ids.into_iter().collect::<Option<Vec<usize>>>() else {
                return Err(PlateauError::NotInvariant);
            };
            let mut ids: [usize; 4] = ids.try_into().expect("four vertices");
            ids.sort_unstable();
            match cells.get(&ids) {
                None => return Err(PlateauError::NotInvariant),
                Some(&j) if j == i && !h.is_identity() => return Err(PlateauError::NotFree),
                Some(_) => {}
            }
        }
    }
    let chi = complex_counts(spec)?.euler_characteristic();
    let order = subgroup.order() as i64;
    if chi % order != 0 || (chi / order) % 2 != 0 {
        return Err(PlateauError::NotInvariant);
    }
    Ok(1 - chi / (2 * order))
}

/// Interior disk vertices outside the quadrilateral's convex hull.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Containment {
    pub outside: usize,
    /// Largest violation of a face inequality (0 if none).
    pub max_violation: f64,
}

pub fn hull_containment(q: &Quadrilateral32, disk: &SurfaceMesh) -> Containment {
    let hull = convex_hull(q);
    let mut out = Containment { outside: 0, max_violation: 0.0 };
    for v in disk.interior_vertices() {
        let x = disk.vertices[v];
        let worst = hull.face_normals.iter().map(|n| -n.dot(x)).fold(f64::NEG_INFINITY, f64::max);
        if worst > UNIT_TOL {
            out.outside += 1;
        }
        out.max_violation = out.max_violation.max(worst.max(0.0));
    }
    out
}

/// Symmetric Hausdorff distance between two vertex sets (brute force).
pub fn hausdorff(a: &[Quaternion], b: &[Quaternion]) -> f64 {
    let one_sided = |p: &[Quaternion], q: &[Quaternion]| {
        p.iter().map(|x| q.iter().map(|y| x.dist(*y)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Result of the sampled self-intersection test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpotCheck {
    pub pairs_tested: usize,
    pub intersections: usize,
}

type P3 = [f64; 3];

fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: P3, b: P3) -> P3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Proper crossing of segment `pq` with triangle `abc` (Möller–Trumbore).
fn segment_hits_triangle(p: P3, q: P3, t: [P3; 3]) -> bool {
    let d = sub(q, p);
    let (e1, e2) = (sub(t[1], t[0]), sub(t[2], t[0]));
    let h = cross(d, e2);
    let det = dot(e1, h);
    if det.abs() < 1e-14 {
        return false;
    }
    let s = sub(p, t[0]);
    let u = dot(s, h) / det;
    let qv = cross(s, e1);
    let v = dot(d, qv) / det;
    let w = dot(e2, qv) / det;
    let eps = 1e-9;
    u > eps && v > eps && u + v < 1.0 - eps && w > eps && w < 1.0 - eps
}

fn triangles_intersect(a: [P3; 3], b: [P3; 3]) -> bool {
    (0..3).any(|k| segment_hits_triangle(a[k], a[(k + 1) % 3], b))
        || (0..3).any(|k| segment_hits_triangle(b[k], b[(k + 1) % 3], a))
}

/// Tests a seeded random `fraction` of the vertex-disjoint face pairs for
/// intersection after stereographic projection from a pole far from the mesh.
pub fn self_intersection_spot_check(mesh: &SurfaceMesh, fraction: f64, seed: u64) -> SpotCheck {
    let frame = ProjectionFrame::avoiding(&mesh.vertices);
    let pts: Vec<P3> = mesh
        .vertices
        .iter()
        .map(|v| stereographic(*v, &frame).unwrap_or([f64::INFINITY; 3]))
        .collect();
    let tri = |f: &[usize; 3]| f.map(|v| pts[v]);
    let nf = mesh.faces.len();
    let total_pairs = nf * nf.saturating_sub(1) / 2;
    let wanted = ((total_pairs as f64) * fraction).ceil() as usize;
    let mut r = rng(seed);
    let mut ids: Vec<usize> = (0..nf).collect();
    let mut out = SpotCheck { pairs_tested: 0, intersections: 0 };
    let mut attempts = 0;
    while out.pairs_tested < wanted && attempts < 4 * wanted + 16 {
        attempts += 1;
        let pair: Vec<usize> = ids.partial_shuffle(&mut r, 2).0.to_vec();
        let (fa, fb) = (mesh.faces[pair[0]], mesh.faces[pair[1]]);
        if fa.iter().any(|v| fb.contains(v)) {
            continue;
        }
        out.pairs_tested += 1;
        if triangles_intersect(tri(&fa), tri(&fb)) {
            out.intersections += 1;
        }
    }
    out
}

/// The fundamental quadrilateral of `spec` with its initial disk.
pub fn spec_disk(spec: GroupSpec, refinement: usize) -> Result<(Quadrilateral32, SurfaceMesh), PlateauError> {
    let q = fundamental_quadrilateral(spec)?;
    let disk = super::init_disk(&q, refinement);
    Ok((q, disk))
}
