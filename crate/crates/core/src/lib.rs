//! Exact toric geometry of lattice polytopes: hulls, fans, support
//! functions, one-parameter curve intersections, smooth refinements, and
//! lattice width with certified witness directions.

mod dd;
pub mod error;
pub mod intersection;
pub mod lattice;
pub mod polytope;
pub mod toric;
pub mod width;

pub use error::{Error, ErrorKind, Result};
pub use intersection::{
    curve_class_of_direction, degree_against_divisor, local_intersection_numbers, one_param_intersection,
    validate_curve_class, CurveClass, CurveClassCheck,
};
pub use lattice::{
    hermite_normal_form, kernel_basis, matrix_rank, pairing, primitive, solve_integral, IntegralSolution,
    LatticeMatrix, LatticeVector, Space,
};
pub use polytope::{Facet, LatticePolytope, PolytopeFace, RANK_CAP};
pub use toric::{
    hirzebruch_jung, lattice_point_images, normal_fan, polytope_pullback_map, pullback_divisor, resolve_smooth,
    resolve_smooth_with_budget, CartierCertificate, Cone, Fan, LatticeMap, Resolution, SupportFunction, ToricDivisor,
    DEFAULT_CONE_BUDGET,
};
pub use width::{
    beat_the_curve, beat_the_curve_at, candidate_directions, fibration_for_direction, lattice_width,
    lattice_width_bruteforce, lattice_width_with_budget, mfd, mfd_on_resolution, mfd_with_budget, CurveBeater,
    FibrationDescription, WidthMethod, WidthResult,
};
