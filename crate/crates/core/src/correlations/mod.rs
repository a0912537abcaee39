//! The temporal correlation polytope `P_L^{R,S}`: behaviors satisfying
//! positivity, normalization and the arrow-of-time constraints, together
//! with their factorization into conditionals, the deterministic vertices,
//! vertex classification under relabelings, and convex decompositions.

mod behavior;
mod decompose;
mod factor;
mod json;
mod scenario;
mod symmetry;
mod vertex;

use num_bigint::BigUint;
use thiserror::Error;

pub use behavior::{check_membership, marginal, Behavior, MembershipReport, Violation};
pub use decompose::{decompose_behavior, Component, ConvexDecomposition};
pub use factor::{compose_from_conditionals, factorize, ConditionalChain};
pub use json::{BehaviorDoc, ComponentDoc, DecompositionDoc, VertexDoc};
pub use scenario::{decode, digit_string, encode, parse_digits, Scenario};
pub use symmetry::{classify_vertices, group_elements, Orbit, Relabeling, RelabelingGroup};
pub use vertex::{
    count_vertices, enumerate_vertices, named_vertex, vertex_behavior, DeterministicVertex,
    DEFAULT_VERTEX_CAP, NAMED_VERTICES,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorrelationError {
    #[error(
        "invalid scenario L={length}, R={outcomes}, S={settings}: need L >= 1, R >= 2, S >= 2"
    )]
    InvalidScenario {
        length: usize,
        outcomes: usize,
        settings: usize,
    },
    #[error("scenario L={length}, R={outcomes}, S={settings} is too large to tabulate")]
    ScenarioTooLarge {
        length: usize,
        outcomes: usize,
        settings: usize,
    },
    #[error("shape mismatch: expected {expected} entries, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("behaviors belong to different scenarios")]
    ScenarioMismatch,
    #[error("not in the polytope ({violations} violations); first: {first}")]
    NotAMember { violations: usize, first: String },
    #[error("level {level} out of range for length {length}")]
    InvalidLevel { level: usize, length: usize },
    #[error("conditional at level {level}, {context} is not a distribution (sum {sum})")]
    UnnormalizedConditional {
        level: usize,
        context: String,
        sum: f64,
    },
    #[error("{count} vertices exceed the cap of {cap}")]
    TooManyVertices { count: BigUint, cap: usize },
    #[error("vertex index {index} out of range ({count} vertices)")]
    IndexOutOfRange { index: usize, count: BigUint },
    #[error("outcome {outcome} out of range for {outcomes} outcomes")]
    OutcomeOutOfRange { outcome: usize, outcomes: usize },
    #[error("behavior is not a deterministic member of the polytope")]
    NotDeterministic,
    #[error("decomposition has no components")]
    EmptyDecomposition,
    #[error("weights must be nonnegative and sum to 1 (got {total})")]
    InvalidWeights { total: f64 },
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
}
