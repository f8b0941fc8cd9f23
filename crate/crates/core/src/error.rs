use thiserror::Error;

/// Errors raised by the computational layers.
///
/// `Precondition` carries a human-readable statement of the hypothesis that
/// failed; callers (the CLI in particular) surface it verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field too large: {p}^{degree} does not fit the packed element representation")]
    FieldTooLarge { p: u64, degree: usize },
    #[error("modulus polynomial is not irreducible over F_{0}")]
    NotIrreducible(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("matrix has determinant {0}, expected 1")]
    DeterminantNotOne(i128),
    #[error("matrix has determinant zero")]
    DeterminantZero,
    #[error("gcd({a}, {n}) != 1")]
    NotCoprime { a: i64, n: i64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("missing prerequisite operator: {0}")]
    MissingOperator(String),
    #[error("cocycle check failed: {0}")]
    CocycleCheck(String),
    #[error("character parity mismatch: {0}")]
    Parity(String),
    #[error("integer overflow in exact matrix arithmetic")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
