//! Certification of maximum-principle functions (MPF) for the curvature-flow
//! velocities `F^σ_ξ = sgn(σ)(a^ξ + b^ξ)^{σ/ξ}` (and `sgn(σ)(ab)^{σ/2}` for ξ = 0).
//!
//! * [`expressions`]: parsed symmetric functions with second-order jets.
//! * [`velocities`]: the velocity family, β, and the candidate catalog.
//! * [`conditions`]: the terms C, E, G, the α profile and the MPF check.
//! * [`vanishing`]: α of vanishing functions and its certified roots.
//! * [`nonexistence`]: limit table, Φ polynomials, exact sign certificates
//!   and the classification tables.

pub mod conditions;
pub mod expressions;
pub mod nonexistence;
pub mod numeric;
pub mod sampling;
pub mod vanishing;
pub mod velocities;

pub use expressions::{parse_expression, CurvatureFunction, Jet2};
pub use velocities::{make_velocity, VelocityFamily, VelocityFamilySpec};
