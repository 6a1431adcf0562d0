use std::fmt;

use thiserror::Error;

/// Which measurement constraint a coefficient set or weight list violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// `Σ (m² + l²) = 1`, equivalently `Σ p = 1`.
    Normalization,
    /// `Σ m l cos α = 0`, equivalently `Σ q = 0`.
    Balance,
    /// `p ≥ |q|` for every outcome.
    Positivity,
    /// `Σ M†M = 1`.
    Completeness,
    /// `[M, σ_A^x σ_B^x] = 0`.
    Commutation,
    /// Coefficients must be finite.
    Finite,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Constraint::Normalization => "normalization",
            Constraint::Balance => "balance",
            Constraint::Positivity => "positivity",
            Constraint::Completeness => "completeness",
            Constraint::Commutation => "commutation",
            Constraint::Finite => "finite",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model parameters: h = {h}, k = {k} (both must be positive and finite)")]
    InvalidParams { h: f64, k: f64 },

    #[error("operator is not Hermitian (max |M - M†| = {residual:e})")]
    NonHermitianInput { residual: f64 },

    #[error("Jacobi eigensolver did not converge (off-diagonal norm {off_norm:e})")]
    EigenNoConvergence { off_norm: f64 },

    #[error("ConstraintViolation({constraint}): residual {residual:e}")]
    ConstraintViolation {
        constraint: Constraint,
        residual: f64,
    },

    #[error("outcome index {index} out of range for a measurement with {len} outcomes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("outcome {index} has probability {probability:e}; post-measurement state undefined")]
    DegenerateOutcome { index: usize, probability: f64 },

    #[error("at least {min} outcomes required, got {got}")]
    TooFewOutcomes { min: usize, got: usize },

    #[error("feedback policy has {policy} entries but the measurement has {outcomes} outcomes")]
    PolicyMismatch { policy: usize, outcomes: usize },

    #[error("rotation axis must be a unit vector (|n| = {norm})")]
    InvalidAxis { norm: f64 },

    #[error("{name} = {value} outside its domain {domain}")]
    DomainError {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("density matrix invalid: {reason}")]
    InvalidDensityMatrix { reason: String },

    #[error(
        "optimizer budget exhausted after {evaluations} evaluations (best value {best_value:e})"
    )]
    NoConvergence { evaluations: usize, best_value: f64 },

    #[error("POVM file: {0}")]
    PovmFormat(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
