use thiserror::Error;

/// Errors produced by the stellar toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StellarError {
    /// Input outside the mathematical domain of an operation.
    #[error("{op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// A state or operator failed a permutation-symmetry check.
    #[error("{op}: symmetry violation, deficit {deficit:.3e} exceeds tolerance {tol:.1e}")]
    SymmetryViolation { op: &'static str, deficit: f64, tol: f64 },

    /// A numerical routine failed (eigensolver, root finder, ...).
    #[error("{op}: {msg}")]
    Numeric { op: &'static str, msg: String },

    /// An iterative optimizer stopped at its iteration cap.
    #[error("{op}: not converged after {iterations} iterations (best value {best_value}, gradient {gradient:.3e}, tolerance {tol:.1e})")]
    NotConverged { op: &'static str, iterations: usize, best_value: f64, gradient: f64, tol: f64 },

    /// Request exceeds a hard size limit.
    #[error("{op}: {msg}")]
    Resource { op: &'static str, msg: String },

    /// Lexical, syntactic or semantic error in a Hamiltonian expression.
    #[error("parse error at line {line}, column {column} near {token:?}: {msg}")]
    Parse { line: usize, column: usize, token: String, msg: String },
}

impl StellarError {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        StellarError::Domain { op, msg: msg.into() }
    }

    pub(crate) fn numeric(op: &'static str, msg: impl Into<String>) -> Self {
        StellarError::Numeric { op, msg: msg.into() }
    }

    pub(crate) fn resource(op: &'static str, msg: impl Into<String>) -> Self {
        StellarError::Resource { op, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, StellarError>;
