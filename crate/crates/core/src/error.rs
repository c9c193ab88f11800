use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("duplicate concept on line {0}")]
    DuplicateConcept(usize),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("dishonest oracle: {0}")]
    DishonestOracle(String),
    #[error("version space became empty")]
    EmptyVersionSpace,
    #[error("round limit of {0} reached")]
    RoundLimit(usize),
    #[error("no informative query exists")]
    NonLearnable,
    #[error("inconsistent oracle: {0}")]
    InconsistentOracle(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("class does not have VC dimension 1")]
    NotVcdOne,
    #[error("no elimination ordering exists")]
    OrderingNotFound,
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
