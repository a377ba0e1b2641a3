//! Triangle meshes on S³₂ and their combinatorial topology.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::quat::{Quaternion, Rotation4};

/// Where a disk vertex sits relative to the spanned quadrilateral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryTag {
    Interior,
    /// Interior point of edge `t` (from vertex `t` to vertex `t+1`).
    Edge(u8),
    /// Quadrilateral vertex K, L, M or N.
    Corner(u8),
}

impl BoundaryTag {
    pub fn is_boundary(self) -> bool {
        self != BoundaryTag::Interior
    }
}

/// Flat-triangle mesh with vertices on S³₂ (norm 2) and oriented faces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceMesh {
    pub vertices: Vec<Quaternion>,
    pub faces: Vec<[usize; 3]>,
    pub tags: Vec<BoundaryTag>,
}

/// Vertex, edge and face counts with boundary information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshTopology {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub boundary_edges: usize,
    /// Edges in more than two faces.
    pub singular_edges: usize,
    pub euler_characteristic: i64,
}

impl MeshTopology {
    pub fn is_closed_manifold(&self) -> bool {
        self.boundary_edges == 0 && self.singular_edges == 0
    }

    /// `1 − χ/2` for a closed orientable surface.
    pub fn genus(&self) -> Option<i64> {
        (self.is_closed_manifold() && self.euler_characteristic % 2 == 0).then(|| 1 - self.euler_characteristic / 2)
    }
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Faces incident to each undirected edge.
pub fn edge_faces(faces: &[[usize; 3]]) -> HashMap<(usize, usize), Vec<usize>> {
    let mut map: HashMap<(usize, usize), Vec<usize>> = HashMap::with_capacity(faces.len() * 3 / 2);
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            map.entry(edge_key(f[k], f[(k + 1) % 3])).or_default().push(fi);
        }
    }
    map
}

pub fn topology_of(vertex_count: usize, faces: &[[usize; 3]]) -> MeshTopology {
    let edges = edge_faces(faces);
    let boundary_edges = edges.values().filter(|f| f.len() == 1).count();
    let singular_edges = edges.values().filter(|f| f.len() > 2).count();
    MeshTopology {
        vertices: vertex_count,
        edges: edges.len(),
        faces: faces.len(),
        boundary_edges,
        singular_edges,
        euler_characteristic: vertex_count as i64 - edges.len() as i64 + faces.len() as i64,
    }
}

/// Whether every interior edge is traversed once in each direction.
pub fn is_consistently_oriented(faces: &[[usize; 3]]) -> bool {
    let mut directed: HashMap<(usize, usize), usize> = HashMap::with_capacity(faces.len() * 3);
    for f in faces {
        for k in 0..3 {
            *directed.entry((f[k], f[(k + 1) % 3])).or_default() += 1;
        }
    }
    directed.iter().all(|(&(a, b), &n)| n == 1 && directed.get(&(b, a)).is_none_or(|&m| m == 1))
}

fn triangle_area(a: Quaternion, b: Quaternion, c: Quaternion) -> f64 {
    let (e1, e2) = (b - a, c - a);
    let (p, q, r) = (e1.norm_sqr(), e2.norm_sqr(), e1.dot(e2));
    0.5 * (p * q - r * r).max(0.0).sqrt()
}

impl SurfaceMesh {
    pub fn topology(&self) -> MeshTopology {
        topology_of(self.vertices.len(), &self.faces)
    }

    /// Total area of the flat triangles in ℝ⁴.
    pub fn area(&self) -> f64 {
        self.faces.iter().map(|f| self.face_area(f)).sum()
    }

    pub fn face_area(&self, f: &[usize; 3]) -> f64 {
        triangle_area(self.vertices[f[0]], self.vertices[f[1]], self.vertices[f[2]])
    }

    /// Image under an isometry (tags are kept).
    pub fn transformed(&self, g: &Rotation4) -> SurfaceMesh {
        SurfaceMesh {
            vertices: self.vertices.iter().map(|v| g.apply(*v)).collect(),
            faces: self.faces.clone(),
            tags: self.tags.clone(),
        }
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(|&v| !self.tags[v].is_boundary())
    }

    /// One third of the incident face areas at every vertex.
    pub fn dual_areas(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.vertices.len()];
        for f in &self.faces {
            let a = self.face_area(f) / 3.0;
            for &v in f {
                out[v] += a;
            }
        }
        out
    }

    /// Largest deviation of a vertex norm from 2.
    pub fn max_radius_error(&self) -> f64 {
        self.vertices.iter().map(|v| (v.norm() - crate::tol::RADIUS).abs()).fold(0.0, f64::max)
    }
}
