//! Numerical toolkit for ball-bodies: convex bodies expressible as
//! intersections of translates of the unit Euclidean ball.
//!
//! The crate computes the c-affine surface area and related functionals
//! from support functions, constructs c-duals and c-floating bodies, and
//! verifies a family of sharp inequalities between them on concrete bodies.

pub mod arc2d;
pub mod body;
pub mod cli;
pub mod curvature;
pub mod dykstra;
pub mod error;
pub mod floating;
pub mod functionals;
pub mod inequalities;
pub mod linalg;
pub mod sphere;

pub use body::{c_dual, is_ball_body, minkowski, Body, BodySpec, ContactPoint, TrigTerm};
pub use curvature::{
    curvature_duality_residual, hessian_homogeneous, principal_radii, CurvatureSpectrum,
};
pub use error::{Error, Result};
pub use floating::{cut_volume, floating_body, floating_constant, limit_estimate, FloatingResult};
pub use functionals::{
    mean_width_half, omega_c, omega_c_ball, omega_classical, report, sphere_surface,
    surface_area, volume, FunctionalReport,
};
pub use inequalities::{
    extremal_search_balls, extremal_search_trig2d, santalo_midpoint_scan, verify, verify_all,
    InequalityKind, InequalityRecord,
};
pub use sphere::{make_grid, tangent_frame, Direction, GridScheme, SphereGrid};
