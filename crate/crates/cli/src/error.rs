use std::path::Path;

use tempcorr::correlations::CorrelationError;
use tempcorr::qmath::QmathError;
use tempcorr::realize::RealizeError;
use tempcorr::witness::WitnessError;
use thiserror::Error;

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Cap(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("{0}")]
    Membership(String),
    #[error("out of scope: {0}")]
    Scope(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Other(_) => 1,
            CliError::Cap(_) => 2,
            CliError::Schema(_) => 3,
            CliError::Membership(_) => 4,
            CliError::Scope(_) => 5,
        }
    }

    /// Any failure while reading an input file is reported as a schema
    /// violation of that file.
    pub fn input(path: &Path, err: impl Into<CliError>) -> Self {
        match err.into() {
            CliError::Other(m) | CliError::Schema(m) => {
                CliError::Schema(format!("{}: {m}", path.display()))
            }
            other => other,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Schema(format!("line {} column {}: {e}", e.line(), e.column()))
    }
}

impl From<QmathError> for CliError {
    fn from(e: QmathError) -> Self {
        match e {
            QmathError::Schema { path, message } => {
                CliError::Schema(format!("at {path}: {message}"))
            }
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<CorrelationError> for CliError {
    fn from(e: CorrelationError) -> Self {
        match e {
            CorrelationError::TooManyVertices { .. } => CliError::Cap(e.to_string()),
            CorrelationError::Schema { path, message } => {
                CliError::Schema(format!("at {path}: {message}"))
            }
            CorrelationError::NotAMember { .. } => CliError::Membership(e.to_string()),
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<RealizeError> for CliError {
    fn from(e: RealizeError) -> Self {
        match e {
            RealizeError::Qmath(e) => e.into(),
            RealizeError::Correlation(e) => e.into(),
            RealizeError::UnsupportedLength { .. } => CliError::Scope(e.to_string()),
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<WitnessError> for CliError {
    fn from(e: WitnessError) -> Self {
        match e {
            WitnessError::Qmath(e) => e.into(),
            WitnessError::Correlation(e) => e.into(),
            WitnessError::Schema { path, message } => {
                CliError::Schema(format!("at {path}: {message}"))
            }
            WitnessError::ScenarioMismatch => CliError::Scope(
                "the built-in witnesses are defined for L = 2, R = 2, S = 2 only".into(),
            ),
            other => CliError::Other(other.to_string()),
        }
    }
}
