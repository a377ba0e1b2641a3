//! Global numerical tolerances.

/// Unit-norm and E³-membership checks; also arc-chaining checks.
pub const UNIT_TOL: f64 = 1e-9;
/// Equality of group elements and great circles.
pub const GROUP_TOL: f64 = 1e-7;
/// Agreement between holonomy and enclosed area.
pub const HOLONOMY_TOL: f64 = 1e-8;
/// Vertex welding when assembling a closed surface from group images.
pub const WELD_TOL: f64 = 1e-6;
/// Radius of the ambient sphere S³₂.
pub const RADIUS: f64 = 2.0;
