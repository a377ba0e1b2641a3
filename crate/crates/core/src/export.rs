//! Stereographic projection to ℝ³ and mesh serialization (OBJ and a JSON mirror).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plateau::{topology_of, MeshTopology, SurfaceMesh};
use crate::quat::{Quaternion, Rotation4};
use crate::tol::RADIUS;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("point at distance {distance} from the projection pole")]
    PoleSingularity { distance: f64 },
    #[error("pole must have norm 2, got {0}")]
    BadPole(f64),
    #[error("malformed mesh file at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

const POLE_CLEARANCE: f64 = 1e-6;

/// Pole and pre-rotation of a stereographic projection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionFrame {
    pub pole: Quaternion,
    pub orientation: Rotation4,
}

impl Default for ProjectionFrame {
    fn default() -> Self {
        ProjectionFrame { pole: Quaternion::real(-RADIUS), orientation: Rotation4::IDENTITY }
    }
}

impl ProjectionFrame {
    pub fn with_pole(pole: Quaternion) -> Result<Self, ExportError> {
        if (pole.norm() - RADIUS).abs() > 1e-9 {
            return Err(ExportError::BadPole(pole.norm()));
        }
        Ok(ProjectionFrame { pole, orientation: Rotation4::IDENTITY })
    }

    /// A frame whose pole is as far as possible from `points`, chosen among
    /// the 24 unit Hurwitz quaternions scaled to radius 2 (ties broken by
    /// order, so the choice is deterministic).
    pub fn avoiding(points: &[Quaternion]) -> Self {
        let mut candidates = Vec::new();
        for a in 0..4 {
            for s in [-1.0, 1.0] {
                let mut c = [0.0; 4];
                c[a] = s * RADIUS;
                candidates.push(Quaternion::from_array(c));
            }
        }
        for bits in 0..16u32 {
            let c = [0, 1, 2, 3].map(|k| if bits & (1 << k) != 0 { -1.0 } else { 1.0 });
            candidates.push(Quaternion::from_array(c));
        }
        // Pole −2 first so that meshes away from it keep the standard chart.
        candidates.rotate_left(1);
        let clearance = |p: Quaternion| points.iter().map(|x| x.dist(p)).fold(f64::INFINITY, f64::min);
        let pole = candidates
            .into_iter()
            .map(|p| (clearance(p), p))
            .fold((f64::NEG_INFINITY, Quaternion::ZERO), |best, c| if c.0 > best.0 + 1e-12 { c } else { best })
            .1;
        ProjectionFrame { pole, orientation: Rotation4::IDENTITY }
    }
}

/// `(x, y, z)/(t + 2)` of the reoriented point, in the chart whose pole is
/// `frame.pole` (the map `h ↦ h·(−p̄)` with `p = pole/2` takes the pole to −2).
pub fn stereographic(r: Quaternion, frame: &ProjectionFrame) -> Result<[f64; 3], ExportError> {
    let x = frame.orientation.apply(r);
    let distance = x.dist(frame.pole);
    if distance <= POLE_CLEARANCE {
        return Err(ExportError::PoleSingularity { distance });
    }
    let y = x * (-(frame.pole / RADIUS).conj());
    let d = y.t + RADIUS;
    Ok([y.x / d, y.y / d, y.z / d])
}

/// Projected mesh ready for writing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectedMesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
}

impl ProjectedMesh {
    pub fn topology(&self) -> MeshTopology {
        topology_of(self.vertices.len(), &self.faces)
    }
}

pub fn project_mesh(mesh: &SurfaceMesh, frame: &ProjectionFrame) -> Result<ProjectedMesh, ExportError> {
    let vertices = mesh.vertices.iter().map(|v| stereographic(*v, frame)).collect::<Result<Vec<_>, _>>()?;
    Ok(ProjectedMesh { vertices, faces: mesh.faces.clone() })
}

/// Wavefront OBJ text (9 significant digits, 1-based face indices).
pub fn obj_string(mesh: &ProjectedMesh) -> String {
    let mut out = String::new();
    for v in &mesh.vertices {
        let _ = writeln!(out, "v {:.8e} {:.8e} {:.8e}", v[0], v[1], v[2]);
    }
    for f in &mesh.faces {
        let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    out
}

pub fn parse_obj(text: &str) -> Result<ProjectedMesh, ExportError> {
    let mut mesh = ProjectedMesh { vertices: Vec::new(), faces: Vec::new() };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: &str| ExportError::Parse { line, message: message.to_string() };
        let mut parts = raw.split_whitespace();
        match parts.next() {
            None | Some("#") => {}
            Some("v") => {
                let c: Vec<f64> = parts.map(str::parse).collect::<Result<_, _>>().map_err(|_| err("bad coordinate"))?;
                if c.len() != 3 {
                    return Err(err("expected three coordinates"));
                }
                mesh.vertices.push([c[0], c[1], c[2]]);
            }
            Some("f") => {
                let ids: Vec<usize> = parts
                    .map(|p| p.split('/').next().unwrap_or("").parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| err("bad face index"))?;
                if ids.len() != 3 || ids.iter().any(|&i| i == 0 || i > mesh.vertices.len()) {
                    return Err(err("expected three valid vertex indices"));
                }
                mesh.faces.push([ids[0] - 1, ids[1] - 1, ids[2] - 1]);
            }
            Some(_) => {}
        }
    }
    Ok(mesh)
}

/// Full-precision mirror of a mesh: the points of S³₂ and their projections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshJson {
    pub frame: ProjectionFrame,
    pub vertices: Vec<[f64; 4]>,
    pub projected: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
}

pub fn mesh_json(mesh: &SurfaceMesh, frame: &ProjectionFrame) -> Result<MeshJson, ExportError> {
    let projected = project_mesh(mesh, frame)?;
    Ok(MeshJson {
        frame: *frame,
        vertices: mesh.vertices.iter().map(|v| v.to_array()).collect(),
        projected: projected.vertices,
        faces: projected.faces,
    })
}

/// Writes `<stem>.obj` and `<stem>.mesh.json` into `dir`.
pub fn export_mesh(mesh: &SurfaceMesh, frame: &ProjectionFrame, dir: &Path, stem: &str) -> Result<(), ExportError> {
    let projected = project_mesh(mesh, frame)?;
    fs::create_dir_all(dir)?;
    fs::write(dir.join(format!("{stem}.obj")), obj_string(&projected))?;
    let json = mesh_json(mesh, frame)?;
    fs::write(dir.join(format!("{stem}.mesh.json")), serde_json::to_string(&json)?)?;
    Ok(())
}

pub fn import_obj(path: &Path) -> Result<ProjectedMesh, ExportError> {
    parse_obj(&fs::read_to_string(path)?)
}
