use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("modulus is not an irreducible monic polynomial of degree {0}")]
    ReducibleModulus(u32),
    #[error("field of order {order} exceeds the log-table limit of {limit}")]
    TableTooLarge { order: u64, limit: u64 },
    #[error("value {0} does not encode an element of the field")]
    ElementOutOfRange(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("requested {requested} independent elements, but the extension degree is {available}")]
    TooManyIndependent { requested: usize, available: usize },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("zero vector has no leading position")]
    ZeroVector,
    #[error("row {0} is zero (input is not a full-rank basis)")]
    ZeroRow(usize),
    #[error("simple transformation precondition violated: {0}")]
    InvalidTransform(String),
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not upper triangular with a nonzero diagonal")]
    NotTriangular,
    #[error("evaluation points are linearly dependent over the base field")]
    DependentPoints,
    #[error("unknown multiplication strategy `{0}`")]
    UnknownStrategy(String),
    #[error("message {index} has degree {degree}, expected < {k}")]
    MessageTooLong {
        index: usize,
        degree: usize,
        k: usize,
    },
    #[error("invalid code parameters: {0}")]
    InvalidParams(String),
    #[error("malformed input: {0}")]
    Format(String),
}
