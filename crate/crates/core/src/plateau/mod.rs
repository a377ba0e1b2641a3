//! A discrete Plateau solver: minimal disks spanning fundamental
//! quadrilaterals, their extension by the symmetry group to closed surfaces,
//! and topological and metric checks on the result.

mod extend;
mod mesh;
mod solver;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use extend::{
    extend_by_group, hausdorff, hull_containment, quotient_genus, self_intersection_spot_check, spec_disk,
    Containment, SpotCheck,
};
pub use mesh::{edge_faces, is_consistently_oriented, topology_of, BoundaryTag, MeshTopology, SurfaceMesh};
pub use solver::{
    area_gradient, disk_symmetry, gradient_residual, init_disk, mean_curvature_residual, minimize_area, normal_gradient,
    projected_gradient, surface_normals, DiskSymmetry, SolveOutcome, SolverOptions,
};

use crate::groups::{symmetry_group, GroupError, GroupSpec};
use crate::skeleton::SkeletonError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlateauError {
    #[error("no convergence after {} iterations (residual {:e})", .0.iterations, .0.residual)]
    NoConvergence(Box<SolveOutcome>),
    #[error("{boundary_edges} edges left unmatched after welding")]
    WeldFailure { boundary_edges: usize },
    #[error("{singular_edges} edges belong to more than two faces")]
    NonManifold { singular_edges: usize },
    #[error("the assembled surface cannot be oriented coherently")]
    NonOrientable,
    #[error("the subgroup does not act freely")]
    NotFree,
    #[error("the subgroup does not preserve the quadrilateral orbit")]
    NotInvariant,
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
    #[error("triangle budget {budget} is below the {needed} triangles needed at refinement 2")]
    BudgetTooSmall { budget: usize, needed: usize },
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Number of triangles of the closed surface at a given refinement.
pub fn triangle_count(spec: GroupSpec, refinement: usize) -> usize {
    spec.order() * 2 * refinement * refinement
}

/// The largest refinement `≤ wanted` whose closed surface fits in `budget` triangles.
pub fn refinement_within_budget(spec: GroupSpec, wanted: usize, budget: usize) -> Result<usize, PlateauError> {
    let mut r = wanted;
    while r > 2 && triangle_count(spec, r) > budget {
        r -= 1;
    }
    if triangle_count(spec, r) > budget {
        return Err(PlateauError::BudgetTooSmall { budget, needed: triangle_count(spec, 2) });
    }
    Ok(r)
}

/// Everything produced by solving one spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecSolution {
    pub spec: GroupSpec,
    pub refinement: usize,
    pub requested_refinement: usize,
    pub disk: SolveOutcome,
    pub closed: SurfaceMesh,
    pub topology: MeshTopology,
    pub genus: Option<i64>,
    pub closed_area: f64,
    /// Largest `|σ(x_v) − x_{π(v)}|` over the quadrilateral's symmetries (None if no symmetry matched the grid).
    pub symmetry_deviation: Option<f64>,
    pub containment: Containment,
}

/// Solves the disk of `spec` (within the triangle budget) and extends it to a closed surface.
/// A disk that misses the gradient tolerance is still extended; `disk.converged` records it.
pub fn solve_spec(spec: GroupSpec, opts: &SolverOptions, budget: usize) -> Result<SpecSolution, PlateauError> {
    let requested_refinement = opts.refinement;
    let refinement = refinement_within_budget(spec, requested_refinement, budget)?;
    let (q, disk) = spec_disk(spec, refinement)?;
    let symmetry = disk_symmetry(&q, &disk);
    let opts = SolverOptions { refinement, ..*opts };
    let outcome = match minimize_area(disk, symmetry.as_ref(), &opts) {
        Ok(o) => o,
        Err(PlateauError::NoConvergence(o)) => *o,
        Err(e) => return Err(e),
    };
    let group = symmetry_group(spec)?;
    let closed = extend_by_group(&outcome.mesh, &group)?;
    let topology = closed.topology();
    Ok(SpecSolution {
        spec,
        refinement,
        requested_refinement,
        symmetry_deviation: symmetry.as_ref().map(|s| s.deviation(&outcome.mesh)),
        containment: hull_containment(&q, &outcome.mesh),
        closed_area: closed.area(),
        genus: topology.genus(),
        topology,
        closed,
        disk: outcome,
    })
}
