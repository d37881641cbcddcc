use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input must be positive")]
    ZeroInput,
    #[error("input must be odd")]
    EvenInput,
    #[error("inputs must be coprime (gcd is {0})")]
    NotCoprime(String),
    #[error("expected u <= v")]
    Order,
    #[error("invalid continued fraction term (a = {a}, k = {k})")]
    InvalidTerm { a: String, k: u64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("grids are not nested: {0}")]
    NotNested(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
