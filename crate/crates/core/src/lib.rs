//! Symmetric embedded minimal surfaces in the radius-2 three-sphere.
//!
//! Quaternion group actions ([`quat`]), spherical geometry ([`sphere2`]), the
//! Hopf fibration and horizontal lifts ([`hopf`]), the lifted symmetry groups
//! ([`groups`]), fundamental quadrilaterals and skeletons ([`skeleton`]), a
//! discrete Plateau solver ([`plateau`]), mesh export ([`export`]) and
//! verification reports ([`report`]).

pub mod export;
pub mod groups;
pub mod hopf;
pub mod linalg;
pub mod plateau;
pub mod pointset;
pub mod quat;
pub mod report;
pub mod sampling;
pub mod skeleton;
pub mod sphere2;
pub mod tol;
