//! Temporal dimension witnesses `B1..B4` for two-step sequences: their
//! evaluation, qubit bounds, numerical qubit optimization and the
//! robustness (`epsilon`) certification.

mod bounds;
mod certify;
mod epsilon;
mod functional;
mod strategy;

use thiserror::Error;

use crate::correlations::CorrelationError;
use crate::qmath::QmathError;

pub use bounds::{
    b1_projective_profile, b3_profile, b3_profile_slope, b4_envelope, c1_bound, c3_bound,
    c3_polynomial_coefficients, c3_polynomial_nested, epsilon_cap, epsilon_lower_bound,
    eval_polynomial, C3Bound, B1_PROJECTIVE_MAX, B2_CAP, B2_CONJECTURED, B4_CAP, B4_CONJECTURED,
    C1, C3_COS_GAMMA, C3_REFERENCE,
};
pub use certify::{
    certify, BoundStatus, CertificationReport, Tolerances, Verdict, WitnessReport, EXCEED_TOL,
};
pub use epsilon::{system_epsilon, EpsilonConfig, EpsilonEstimate};
pub use functional::{
    builtin_functional, builtin_functionals, evaluate, Term, TermDoc, WitnessDoc,
    WitnessFunctional, BUILTIN_NAMES,
};
pub use strategy::{
    optimize_qubit, strategy_value, OptimizerConfig, OptimizerResult, QubitStrategy, SettingEffect,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WitnessError {
    #[error(transparent)]
    Qmath(#[from] QmathError),
    #[error(transparent)]
    Correlation(#[from] CorrelationError),
    #[error("functional and behavior belong to different scenarios")]
    ScenarioMismatch,
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),
    #[error("{name} = {value} is outside the domain")]
    DomainError { name: &'static str, value: f64 },
    #[error("no stationary root of the polynomial in [-1, 1]")]
    NoValidRoot,
    #[error("not a rank-2 projector: {0}")]
    NotAProjector(String),
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
}
