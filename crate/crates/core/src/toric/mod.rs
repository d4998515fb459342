//! Fans, torus-invariant divisors, support functions, toric morphisms and
//! smooth refinements.

mod divisor;
mod fan;
mod morphism;
mod resolve;

pub(crate) use divisor::same_fan;
pub use divisor::{normal_fan, CartierCertificate, SupportFunction, ToricDivisor};
pub use fan::{Cone, Fan};
pub use morphism::{lattice_point_images, polytope_pullback_map, pullback_divisor, LatticeMap};
pub use resolve::{hirzebruch_jung, resolve_smooth, resolve_smooth_with_budget, Resolution, DEFAULT_CONE_BUDGET};
