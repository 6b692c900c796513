use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {order} exceeds the bound {bound}")]
    FieldTooLarge { order: u128, bound: u64 },
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("value {value} is not an element of a field of order {order}")]
    NotInField { value: u64, order: u64 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("enumeration budget exceeded: {needed} vectors needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("the zero code has no nonzero codewords")]
    ZeroCode,
    #[error("{0} violated")]
    Constraint(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("bilinear form is degenerate")]
    DegenerateForm,
    #[error("encoders are not compatible: {0}")]
    Incompatible(String),
    #[error("deterministic check infeasible: about {estimate} multiply-adds exceeds the limit {limit}")]
    Infeasible { estimate: u128, limit: u128 },
    #[error("same_code required")]
    SameCodeRequired,
    #[error("level {level}: {source}")]
    Level {
        level: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("bundle: {0}")]
    Bundle(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn constraint(msg: impl Into<String>) -> Error {
    Error::Constraint(msg.into())
}

pub(crate) fn dim(msg: impl Into<String>) -> Error {
    Error::Dimension(msg.into())
}
