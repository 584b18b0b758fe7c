use thiserror::Error;

/// Errors shared by every layer of the calculus.
///
/// Mathematical verdicts (a law failing, a hypothesis not holding on given
/// data) are *not* errors; they are reported as check results. Errors mean
/// the requested computation itself is ill-posed or impossible.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("hypothesis violated: {check}: {detail}")]
    HypothesisViolation { check: &'static str, detail: String },

    #[error("vector lies outside the domain (distance {distance:.3e} exceeds tolerance)")]
    DomainMembership { distance: f64 },

    #[error("certificate transform undefined for b = {b} (requires b < 1)")]
    TransformUndefined { b: f64 },

    #[error("parameter out of range: {what}")]
    OutOfRange { what: String },

    #[error("grid refinement did not converge: {detail}")]
    NonConvergence { detail: String },

    #[error("unknown {kind} name {name:?}; known: {known}")]
    UnknownName {
        kind: &'static str,
        name: String,
        known: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
