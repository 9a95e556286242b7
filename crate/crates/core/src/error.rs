use thiserror::Error;

use crate::geom4::Genericity;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("zero is not allowed as a set element")]
    ZeroElement,

    #[error("duplicate element {0}")]
    DuplicateElement(String),

    #[error("set is empty")]
    EmptySet,

    #[error("brute-force energy oracle capped at |A| <= {cap}, got |A| = {size}")]
    OracleCapExceeded { size: usize, cap: usize },

    #[error("no generic hyperplane after {attempts} samples (last failure: {last})")]
    GenericityExhausted { attempts: usize, last: Box<Genericity> },

    #[error("no hemisphere pole avoiding every ray after {attempts} samples")]
    HemisphereExhausted { attempts: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
