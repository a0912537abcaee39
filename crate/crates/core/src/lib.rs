//! Temporal correlations of sequential quantum measurements.
//!
//! * [`qmath`]: dense complex matrices, states, effects, instruments.
//! * [`correlations`]: behaviors of the arrow-of-time polytope, its
//!   deterministic vertices, their counting, classification and convex
//!   decompositions.
//! * [`realize`]: simulation of measurement sequences and explicit quantum
//!   realizations of polytope points.
//! * [`witness`]: qubit dimension witnesses, their analytic bounds and
//!   the robustness (`epsilon`) certification.

pub mod correlations;
pub mod qmath;
pub mod realize;
pub mod text;
pub mod tol;
pub mod witness;

/// Seed used whenever the caller does not provide one.
pub const DEFAULT_SEED: u64 = 7;
