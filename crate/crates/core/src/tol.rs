//! Numerical tolerances shared across the crate.
//!
//! All operators are at most a few hundred dimensions and computed in
//! double precision, so 1e-9 leaves ample headroom over accumulated rounding.

/// Max-entry deviation allowed between a matrix and its adjoint.
pub const HERMITIAN: f64 = 1e-9;

/// Allowed deviation of a state's trace from one.
pub const TRACE: f64 = 1e-9;

/// Max-entry deviation allowed between `sum K^dag K` and the identity.
pub const TRACE_PRESERVING: f64 = 1e-9;

/// Slack on eigenvalue bounds (positivity, `E <= 1`, Bloch norms).
pub const PSD: f64 = 1e-9;

/// Probabilities at or below this value are treated as zero.
pub const ZERO_PROB: f64 = 1e-12;

/// Normalization and arrow-of-time equality slack for behaviors.
pub const BEHAVIOR: f64 = 1e-9;
