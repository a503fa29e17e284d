use thiserror::Error;

/// Errors raised by the algebraic operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("genus must satisfy 1 <= g <= {max}, got {got}")]
    InvalidGenus { got: usize, max: usize },
    #[error("genus mismatch: {left} vs {right}")]
    GenusMismatch { left: usize, right: usize },
    #[error("expected {expected} coordinates, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("vector {0} is not primitive")]
    NotPrimitive(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("vector {0} does not lie in the set q0(z) = 1")]
    NotInLambda(String),
    #[error("matrix does not preserve the quadratic form q0")]
    NotOrthogonal,
    #[error("invalid letter {0}")]
    InvalidLetter(String),
    #[error("no integral homology class configured for {0}")]
    MissingIntegralClass(String),
    #[error("{name} is not defined in genus {genus}")]
    NamedGenus { name: String, genus: usize },
    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },
    #[error("invalid curve-class table: {0}")]
    CurveTable(String),
    #[error("no witness found for {0}")]
    NoWitness(String),
    #[error("factorization stalled: {0}")]
    FactorizationStalled(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("rewriting failed: {0}")]
    Rewrite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
