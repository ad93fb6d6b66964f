//! Error type shared by the whole crate.

use crate::trace::{ConvergenceTrace, WitnessReport};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("point {x} is outside the domain {domain}")]
    OutOfDomain { x: f64, domain: String },

    #[error("invalid interval [{a}, {b}]: bounds must be finite with a < b")]
    InvalidInterval { a: f64, b: f64 },

    #[error("jump at {location} has zero mass; a zero mass is not a discontinuity")]
    ZeroMass { location: f64 },

    #[error("jump value {value} ({context}) is not finite")]
    NonFiniteJump { value: f64, context: String },

    #[error("jump locations must be strictly increasing: {previous} then {location}")]
    JumpOrder { previous: f64, location: f64 },

    #[error(
        "value at jump {location} is {value_at}, outside the closed interval \
         between the one-sided limits {left_limit} and {right_limit}"
    )]
    ValueAtOutOfRange {
        location: f64,
        value_at: f64,
        left_limit: f64,
        right_limit: f64,
    },

    #[error("jump at {location} has mass {mass}; non-signed distribution functions need positive masses")]
    NegativeMass { location: f64, mass: f64 },

    #[error("operation requires a non-signed distribution function")]
    SignedNotSupported,

    #[error(
        "jump at {location} breaks the right-continuous convention: \
         value_at = {value_at} but the right limit is {right_limit}"
    )]
    Convention {
        location: f64,
        value_at: f64,
        right_limit: f64,
    },

    #[error(
        "segments around the jump at {location} disagree with its mass: \
         right limit {right_limit} - left limit {left_limit} != mass {mass}"
    )]
    SegmentMassMismatch {
        location: f64,
        left_limit: f64,
        right_limit: f64,
        mass: f64,
    },

    #[error("segment on ]{from}, {to}[ decreases near {at}; non-signed mode needs non-decreasing segments")]
    SegmentNotMonotone { from: f64, to: f64, at: f64 },

    #[error("segment count {segments} does not match jump count {jumps} (need jumps + 1)")]
    SegmentCount { segments: usize, jumps: usize },

    #[error("integrand returned a non-finite value at {x}")]
    NonFiniteEvaluation { x: f64 },

    #[error("integrand value {value} at {x} exceeds its declared bound {bound}")]
    BoundExceeded { x: f64, value: f64, bound: f64 },

    #[error("declared discontinuity at {location}: stored value {declared} differs from eval ({evaluated})")]
    DiscontinuityValueMismatch {
        location: f64,
        declared: f64,
        evaluated: f64,
    },

    #[error("declared one-sided limit at {location} is not finite")]
    NonFiniteDeclaredLimit { location: f64 },

    #[error("partition grid must be strictly increasing with at least one cell")]
    InvalidGrid,

    #[error("tag {tag} for cell [{low}, {high}] lies outside the closed cell")]
    TagOutsideCell { tag: f64, low: f64, high: f64 },

    #[error("jump tail generator violated its contract at index {index}: {detail}")]
    GeneratorViolation { index: usize, detail: String },

    #[error("cannot certify the result: {detail}")]
    CannotCertify { detail: String },

    #[error("quadrature on [{from}, {to}] did not stabilize within {max_cells} cells")]
    QuadratureDidNotConverge {
        from: f64,
        to: f64,
        max_cells: usize,
        trace: ConvergenceTrace,
    },

    #[error(
        "Riemann-Stieltjes integral does not exist: the integrand is discontinuous \
         at the jump {location} of the integrator"
    )]
    NotIntegrable {
        location: f64,
        witness: Option<Box<WitnessReport>>,
    },

    #[error("no divergence witness at {location}: the integrand is continuous there")]
    NoWitness { location: f64 },

    #[error("divergence witness at {location} needs declared one-sided limits for the integrand")]
    MissingDeclaredLimits { location: f64 },

    #[error("witness trace for the predicted limit {predicted} settled at {observed} instead")]
    WitnessReproduction { predicted: f64, observed: f64 },

    #[error("could not move the window endpoint {endpoint} off the jump set within {attempts} attempts")]
    NudgeBudgetExhausted { endpoint: f64, attempts: usize },

    #[error("window schedule must be strictly increasing and positive")]
    InvalidWindowSchedule,

    #[error("{0}")]
    Unsupported(String),
}
