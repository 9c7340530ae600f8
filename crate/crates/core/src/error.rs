use alloc::string::String;

/// Errors produced while building or evaluating a model.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A system description that violates a model invariant.
    #[error("invalid system: {0}")]
    InvalidSpec(String),
    /// Incompatible arguments (dimension mismatch, wrong preset, ...).
    #[error("usage error: {0}")]
    Usage(String),
    /// A matrix that fails the density-matrix invariants.
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    /// The steady state is not unique and an explicit choice is required.
    #[error(
        "undriven steady state is not unique (null-space dimension {dimension}); supply an explicit initial state"
    )]
    DegenerateSteadyState { dimension: usize },
    /// The time integration left the space of density matrices.
    #[error("integration failure at t = {time}: {reason}")]
    Integration { time: f64, reason: String },
    /// A numerical routine did not behave as its contract requires.
    #[error("internal error: {0}")]
    Internal(String),
}
