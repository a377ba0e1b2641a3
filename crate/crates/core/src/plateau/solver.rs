//! Initial disks, the area functional and its projected gradient descent.

use serde::{Deserialize, Serialize};

use super::mesh::{BoundaryTag, SurfaceMesh};
use super::PlateauError;
use crate::groups::closure;
use crate::linalg::cross3;
use crate::pointset::PointIndex;
use crate::quat::{Quaternion, Rotation4};
use crate::skeleton::{quad_symmetries, Quadrilateral32};
use crate::tol::RADIUS;

/// Parameters of [`minimize_area`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Grid cells per quadrilateral side.
    pub refinement: usize,
    pub max_iterations: usize,
    /// Stop once the mean-curvature residual is at most this.
    pub residual_tol: f64,
    /// Sufficient-decrease constant of the backtracking line search.
    pub armijo: f64,
    /// Step shrink factor on a rejected step.
    pub shrink: f64,
    /// Largest factor by which the trial step may exceed the previous accepted step.
    pub grow: f64,
    pub initial_step: f64,
    /// Keep the iterate invariant under the quadrilateral's own symmetries.
    pub symmetrize: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            refinement: 16,
            max_iterations: 200_000,
            residual_tol: 1e-6,
            armijo: 1e-4,
            shrink: 0.5,
            grow: 100.0,
            initial_step: 0.1,
            symmetrize: true,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<(), PlateauError> {
        let ok = self.refinement >= 2
            && self.residual_tol > 0.0
            && self.armijo > 0.0
            && self.armijo < 1.0
            && self.shrink > 0.0
            && self.shrink < 1.0
            && self.grow >= 1.0
            && self.initial_step > 0.0;
        if ok {
            Ok(())
        } else {
            Err(PlateauError::InvalidOptions(format!("{self:?}")))
        }
    }
}

fn grid_index(n: usize, i: usize, j: usize) -> usize {
    j * (n + 1) + i
}

/// Structured `(n+1)²` disk spanning `q`: boundary points equally spaced by
/// arc length, interior points by a Coons patch of the four edges projected
/// to S³₂, each cell split along its shorter diagonal.
pub fn init_disk(q: &Quadrilateral32, n: usize) -> SurfaceMesh {
    let e = &q.edges;
    let frac = |k: usize| k as f64 / n as f64;
    // Boundary curves in grid coordinates (u along KL, v along KN).
    let bottom = |i: usize| e[0].point(e[0].length * frac(i));
    let right = |j: usize| e[1].point(e[1].length * frac(j));
    let top = |i: usize| e[2].point(e[2].length * frac(n - i));
    let left = |j: usize| e[3].point(e[3].length * frac(n - j));
    let c = q.vertices.map(|v| v.get());
    let mut vertices = vec![Quaternion::ZERO; (n + 1) * (n + 1)];
    let mut tags = vec![BoundaryTag::Interior; (n + 1) * (n + 1)];
    for j in 0..=n {
        for i in 0..=n {
            let (u, v) = (frac(i), frac(j));
            let idx = grid_index(n, i, j);
            let (point, tag) = match (i, j) {
                (0, 0) => (c[0], BoundaryTag::Corner(0)),
                (i, 0) if i == n => (c[1], BoundaryTag::Corner(1)),
                (i, j) if i == n && j == n => (c[2], BoundaryTag::Corner(2)),
                (0, j) if j == n => (c[3], BoundaryTag::Corner(3)),
                (_, 0) => (bottom(i), BoundaryTag::Edge(0)),
                (i, _) if i == n => (right(j), BoundaryTag::Edge(1)),
                (_, j) if j == n => (top(i), BoundaryTag::Edge(2)),
                (0, _) => (left(j), BoundaryTag::Edge(3)),
                _ => {
                    let blend = bottom(i) * (1.0 - v) + top(i) * v + left(j) * (1.0 - u) + right(j) * u
                        - (c[0] * ((1.0 - u) * (1.0 - v)) + c[1] * (u * (1.0 - v)) + c[2] * (u * v) + c[3] * ((1.0 - u) * v));
                    (blend.normalized() * RADIUS, BoundaryTag::Interior)
                }
            };
            vertices[idx] = point;
            tags[idx] = tag;
        }
    }
    let mut faces = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (p00, p10, p11, p01) =
                (grid_index(n, i, j), grid_index(n, i + 1, j), grid_index(n, i + 1, j + 1), grid_index(n, i, j + 1));
            let d1 = vertices[p00].dist(vertices[p11]);
            let d2 = vertices[p10].dist(vertices[p01]);
            // Ties resolved with a tolerance so that symmetric grids split symmetrically.
            if d1 <= d2 * (1.0 + 1e-12) {
                faces.push([p00, p10, p11]);
                faces.push([p00, p11, p01]);
            } else {
                faces.push([p00, p10, p01]);
                faces.push([p10, p11, p01]);
            }
        }
    }
    SurfaceMesh { vertices, faces, tags }
}

/// Ambient gradient of the total flat-triangle area with respect to every
/// vertex position.
pub fn area_gradient(mesh: &SurfaceMesh) -> Vec<Quaternion> {
    let mut g = vec![Quaternion::ZERO; mesh.vertices.len()];
    for f in &mesh.faces {
        let (a, b, c) = (mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
        let (e1, e2) = (b - a, c - a);
        let (p, q, r) = (e1.norm_sqr(), e2.norm_sqr(), e1.dot(e2));
        let area = 0.5 * (p * q - r * r).max(0.0).sqrt();
        if area <= 1e-300 {
            continue;
        }
        let gb = (e1 * q - e2 * r) / (4.0 * area);
        let gc = (e2 * p - e1 * r) / (4.0 * area);
        g[f[1]] = g[f[1]] + gb;
        g[f[2]] = g[f[2]] + gc;
        g[f[0]] = g[f[0]] - gb - gc;
    }
    g
}

/// Area gradient projected to the tangent space of S³₂, zero at boundary vertices.
pub fn projected_gradient(mesh: &SurfaceMesh) -> Vec<Quaternion> {
    let mut g = area_gradient(mesh);
    for (v, gv) in g.iter_mut().enumerate() {
        if mesh.tags[v].is_boundary() {
            *gv = Quaternion::ZERO;
        } else {
            let x = mesh.vertices[v] / RADIUS;
            *gv = *gv - x * gv.dot(x);
        }
    }
    g
}

fn max_norm(g: &[Quaternion]) -> f64 {
    g.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Unit normal of the surface at every interior vertex, inside the tangent
/// space of S³₂: the normalized sum over incident faces of the vector
/// orthogonal to the vertex and both face edges leaving it. Boundary
/// vertices get zero.
pub fn surface_normals(mesh: &SurfaceMesh) -> Vec<Quaternion> {
    let mut n = vec![Quaternion::ZERO; mesh.vertices.len()];
    for f in &mesh.faces {
        for k in 0..3 {
            let (v, a, b) = (f[k], f[(k + 1) % 3], f[(k + 2) % 3]);
            if mesh.tags[v].is_boundary() {
                continue;
            }
            let x = mesh.vertices[v];
            n[v] = n[v] + cross3(x, mesh.vertices[a] - x, mesh.vertices[b] - x);
        }
    }
    for (v, nv) in n.iter_mut().enumerate() {
        if !mesh.tags[v].is_boundary() && nv.norm() > 0.0 {
            *nv = nv.normalized();
        }
    }
    n
}

/// Normal component `⟨∇A, n⟩ n` of the area gradient (zero at boundary
/// vertices). Tangential components only reparametrize the surface.
pub fn normal_gradient(mesh: &SurfaceMesh) -> Vec<Quaternion> {
    let g = area_gradient(mesh);
    surface_normals(mesh).into_iter().zip(g).map(|(n, gv)| n * gv.dot(n)).collect()
}

fn max_per_dual_area(mesh: &SurfaceMesh, g: &[Quaternion]) -> f64 {
    let dual = mesh.dual_areas();
    mesh.interior_vertices().map(|v| if dual[v] > 0.0 { g[v].norm() / dual[v] } else { 0.0 }).fold(0.0, f64::max)
}

/// Discrete mean curvature: the largest normal area-gradient component at
/// an interior vertex divided by its dual area.
pub fn mean_curvature_residual(mesh: &SurfaceMesh) -> f64 {
    max_per_dual_area(mesh, &normal_gradient(mesh))
}

/// Like [`mean_curvature_residual`] but with the full projected gradient,
/// tangential (reparametrization) components included.
pub fn gradient_residual(mesh: &SurfaceMesh) -> f64 {
    max_per_dual_area(mesh, &projected_gradient(mesh))
}

/// Vertex permutations realizing a finite group of isometries mapping a disk to itself.
#[derive(Debug, Clone)]
pub struct DiskSymmetry {
    pub elements: Vec<Rotation4>,
    /// `perms[h][v]`: index of the image of vertex `v` under element `h`.
    pub perms: Vec<Vec<usize>>,
}

impl DiskSymmetry {
    /// Matches the images of the vertices of `mesh` under every element of
    /// the group generated by `generators`; `None` if some image is not a vertex.
    pub fn find(mesh: &SurfaceMesh, generators: &[Rotation4]) -> Option<DiskSymmetry> {
        let group = closure(generators).ok()?;
        let mut index = PointIndex::new(1e-9);
        for v in &mesh.vertices {
            index.insert(*v);
        }
        let mut perms = Vec::with_capacity(group.order());
        for g in group.elements() {
            let perm: Option<Vec<usize>> = mesh.vertices.iter().map(|v| index.find(g.apply(*v))).collect();
            perms.push(perm?);
        }
        Some(DiskSymmetry { elements: group.elements().to_vec(), perms })
    }

    /// Orthogonal projection of vertex data onto equivariant data:
    /// `x'_v = mean_h h⁻¹(x_{π_h(v)})`.
    pub fn average(&self, data: &[Quaternion]) -> Vec<Quaternion> {
        let n = self.elements.len() as f64;
        (0..data.len())
            .map(|v| {
                self.elements
                    .iter()
                    .zip(&self.perms)
                    .fold(Quaternion::ZERO, |acc, (h, p)| acc + h.inverse().apply(data[p[v]]))
                    / n
            })
            .collect()
    }

    /// Largest `|h(x_v) − x_{π_h(v)}|`.
    pub fn deviation(&self, mesh: &SurfaceMesh) -> f64 {
        self.elements
            .iter()
            .zip(&self.perms)
            .flat_map(|(h, p)| (0..mesh.vertices.len()).map(move |v| (h.apply(mesh.vertices[v]) - mesh.vertices[p[v]]).norm()))
            .fold(0.0, f64::max)
    }
}

/// Symmetries of the disk spanning `q` taken from the quadrilateral's own π-rotations.
pub fn disk_symmetry(q: &Quadrilateral32, mesh: &SurfaceMesh) -> Option<DiskSymmetry> {
    let gens = quad_symmetries(q).ok()?;
    DiskSymmetry::find(mesh, &gens)
}

/// Outcome of a minimization run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub mesh: SurfaceMesh,
    pub iterations: usize,
    pub initial_area: f64,
    pub area: f64,
    /// Largest normal vertex gradient at the final iterate.
    pub max_gradient: f64,
    /// Mean-curvature residual at the final iterate.
    pub residual: f64,
    /// Residual of the full projected gradient, tangential part included.
    pub gradient_residual: f64,
    pub converged: bool,
    /// Whether the iterate was kept symmetric (false if no symmetry matched the grid).
    pub symmetrized: bool,
    /// Accepted-step areas, in order (starting with the initial area).
    pub area_history: Vec<f64>,
}

/// Relative size of area changes treated as rounding noise by the line search.
const ROUNDING_AREA: f64 = 1e-12;

fn retract(x: Quaternion) -> Quaternion {
    x.normalized() * RADIUS
}

/// Gradient descent on the area with Armijo backtracking, moving interior
/// vertices along their surface normals inside the tangent space of S³₂
/// (then back onto the sphere); boundary vertices stay fixed. The tangential
/// part of the flat-triangle gradient is dropped: following it lets vertices
/// slide into collapsed triangles whose chords cut below the smooth area. Each iteration starts its line
/// search from the Barzilai–Borwein step `⟨s,s⟩/⟨s,y⟩` of the previous
/// accepted step (capped at `grow` times that step) and halves it until the
/// sufficient-decrease condition holds, so accepted areas never increase.
pub fn minimize_area(
    mesh: SurfaceMesh,
    symmetry: Option<&DiskSymmetry>,
    opts: &SolverOptions,
) -> Result<SolveOutcome, PlateauError> {
    opts.validate()?;
    let symmetry = if opts.symmetrize { symmetry } else { None };
    let mut mesh = mesh;
    if let Some(s) = symmetry {
        let avg = s.average(&mesh.vertices);
        for v in mesh.interior_vertices().collect::<Vec<_>>() {
            mesh.vertices[v] = retract(avg[v]);
        }
    }
    let interior: Vec<usize> = mesh.interior_vertices().collect();
    let project = |g: Vec<Quaternion>| match symmetry {
        Some(s) => s.average(&g),
        None => g,
    };
    let mut area = mesh.area();
    let initial_area = area;
    let mut history = vec![area];
    let mut grad = project(normal_gradient(&mesh));
    let mut step = opts.initial_step;
    let mut iterations = 0;
    let mut prev: Option<(Vec<Quaternion>, Vec<Quaternion>)> = None;
    let mut residual = max_per_dual_area(&mesh, &grad);
    while iterations < opts.max_iterations && residual > opts.residual_tol {
        iterations += 1;
        if let Some((px, pg)) = &prev {
            // Barzilai–Borwein: ⟨s,s⟩/⟨s,y⟩ over the interior coordinates.
            let (mut ss, mut sy) = (0.0, 0.0);
            for &v in &interior {
                let s = mesh.vertices[v] - px[v];
                ss += s.norm_sqr();
                sy += s.dot(grad[v] - pg[v]);
            }
            if sy > 0.0 && ss > 0.0 {
                step = (ss / sy).min(step * opts.grow);
            }
        }
        let g2: f64 = interior.iter().map(|&v| grad[v].norm_sqr()).sum();
        let mut trial = mesh.clone();
        let accepted = loop {
            for &v in &interior {
                trial.vertices[v] = retract(mesh.vertices[v] - grad[v] * step);
            }
            // Summing per-face differences keeps the comparison accurate
            // when the decrease is far below the rounding error of the total.
            let change: f64 = mesh.faces.iter().map(|f| trial.face_area(f) - mesh.face_area(f)).sum();
            if change <= -opts.armijo * step * g2 {
                break Some(change);
            }
            // Below rounding level the decrease cannot be measured; fall back to
            // the approximate Armijo test of Hager and Zhang, which bounds the
            // slope at the trial point instead: φ'(α) ≤ (1 − 2δ)·|φ'(0)|.
            if change.abs() <= ROUNDING_AREA * area {
                let g_trial = area_gradient(&trial);
                let slope: f64 = interior.iter().map(|&v| -g_trial[v].dot(grad[v])).sum();
                if slope <= (1.0 - 2.0 * opts.armijo) * g2 {
                    break Some(change.min(0.0));
                }
            }
            step *= opts.shrink;
            if step < 1e-16 {
                break None;
            }
        };
        let Some(change) = accepted else { break };
        prev = Some((std::mem::replace(&mut mesh.vertices, trial.vertices), grad));
        area += change;
        history.push(area);
        grad = project(normal_gradient(&mesh));
        residual = max_per_dual_area(&mesh, &grad);
    }
    let max_gradient = max_norm(&grad);
    let outcome = SolveOutcome {
        residual,
        gradient_residual: gradient_residual(&mesh),
        mesh,
        iterations,
        initial_area,
        area,
        max_gradient,
        converged: residual <= opts.residual_tol,
        symmetrized: symmetry.is_some(),
        area_history: history,
    };
    if outcome.converged {
        Ok(outcome)
    } else {
        Err(PlateauError::NoConvergence(Box::new(outcome)))
    }
}
