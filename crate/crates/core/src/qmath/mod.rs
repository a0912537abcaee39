//! Small dense complex linear algebra and validated quantum objects:
//! states, effects, instruments and system models.

mod eigen;
mod instrument;
mod json;
mod matrix;
pub mod random;
mod state;

use thiserror::Error;

pub use eigen::{eigenvalues, eigh, trace_norm, HermitianEigen};
pub use instrument::{apply_instrument, validate_instrument, Branch, Instrument, SystemModel};
pub use json::{matrix_from_doc, matrix_to_doc, InstrumentDoc, MatrixDoc, SystemModelDoc};
pub use matrix::ComplexMatrix;
pub use state::{
    bloch_to_density, density_to_bloch, effect_from_params, validate_effect, BlochVector,
    DensityMatrix, Effect,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QmathError {
    #[error("matrix has dimension zero")]
    EmptyMatrix,
    #[error("{len} entries do not form a {dim}x{dim} matrix")]
    NotSquare { len: usize, dim: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("not Hermitian: max |M - M^dag| = {deviation:e} exceeds {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },
    #[error("spectrum [{min}, {max}] outside [0, 1] by more than {tolerance:e}")]
    SpectrumOutOfRange { min: f64, max: f64, tolerance: f64 },
    #[error("trace {trace} differs from 1")]
    TraceNotOne { trace: f64 },
    #[error("eigenvalue {eigenvalue:e} below -{tolerance:e}")]
    NegativeEigenvalue { eigenvalue: f64, tolerance: f64 },
    #[error("Bloch vector norm {norm} exceeds 1")]
    NormTooLarge { norm: f64 },
    #[error("expected dimension {expected}, found {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parameter {name} = {value} outside [{low}, {high}]")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        low: f64,
        high: f64,
    },
    #[error("not trace preserving: max |sum K^dag K - 1| = {deviation:e} exceeds {tolerance:e}")]
    NotTracePreserving { deviation: f64, tolerance: f64 },
    #[error("instrument has no outcomes")]
    EmptyInstrument,
    #[error("outcome {outcome} has no Kraus operators")]
    EmptyOutcome { outcome: usize },
    #[error("outcome {outcome} out of range for {outcomes} outcomes")]
    OutcomeOutOfRange { outcome: usize, outcomes: usize },
    #[error("outcome count mismatch: expected {expected}, found {found}")]
    OutcomeCountMismatch { expected: usize, found: usize },
    #[error("system model needs at least one instrument")]
    NoInstruments,
    #[error("zero vector cannot be normalized")]
    ZeroVector,
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
}
