//! Crate-wide error type.
//!
//! Every fallible operation returns [`Error`]. Variants carry enough context
//! to be actionable from the command line; none of them panic-wrap.

use thiserror::Error;

/// Errors produced by construction and evaluation routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A constructor was handed parameters outside its admissible range.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// A gauge derivative was requested at the origin, where it is undefined.
    #[error("gauge derivative requested at the origin")]
    SingularPoint,

    /// A quadrature rule was requested on an empty or inverted interval.
    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    /// Angular rules are only available in the supported dimension range.
    #[error("unsupported dimension {0}: {1}")]
    UnsupportedDimension(usize, &'static str),

    /// A field violates the support requirements of an evaluator.
    #[error("support violation: {0}")]
    SupportViolation(String),

    /// An inequality evaluator was configured outside its admissible range
    /// (exponents, weights, domain compatibility).
    #[error("inadmissible configuration: {0}")]
    Inadmissible(String),

    /// A quotient denominator vanished beyond recovery.
    #[error("zero denominator: left-hand integral below 1e-14")]
    ZeroDenominator,

    /// A point lies outside the domain of a distance computation.
    #[error("point outside domain: {0}")]
    OutsideDomain(String),

    /// A field gradient is too small to define a direction.
    #[error("degenerate gradient: |grad u| below 1e-10 at the requested point")]
    DegenerateGradient,

    /// The radial map of a change of variables is degenerate.
    #[error("degenerate map: {0}")]
    DegenerateMap(String),

    /// A profile fails a required boundary condition.
    #[error("boundary violation: {0}")]
    BoundaryViolation(String),
}
