use thiserror::Error;

/// Errors raised by monomial and ideal operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid block shape: {0}")]
    InvalidShape(String),
    #[error("shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: String, right: String },
    #[error("expected {expected} exponents, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("negative exponent {value} at position {position}")]
    NegativeExponent { position: usize, value: i64 },
    #[error("variable x[{block},{position}] is outside the shape")]
    VariableOutOfRange { block: usize, position: usize },
    #[error("block index {0} is outside the shape")]
    BlockOutOfRange(usize),
    #[error("{divisor} does not divide {dividend}")]
    NotDivisible { dividend: String, divisor: String },
    #[error("x[{block},{position}] has exponent zero in {monomial}")]
    ZeroExponent {
        monomial: String,
        block: usize,
        position: usize,
    },
    #[error("exchange from block {from} to block {to} is not within one block")]
    CrossBlockExchange { from: usize, to: usize },
    #[error("exponent overflow")]
    Overflow,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("ideal is not generated in a single degree")]
    NotEquigenerated,
    #[error("operation undefined for the {0} ideal")]
    TrivialIdeal(&'static str),
    #[error("subvector closure exceeds the cap of {cap} vectors")]
    ClosureTooLarge { cap: usize },
    #[error("at most {max} variables are supported here, shape has {got}")]
    TooManyVariables { max: usize, got: usize },
    #[error("order is not a permutation of the generators: {0}")]
    NotAPermutation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
