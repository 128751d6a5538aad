use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("values live on different generator tables")]
    TableMismatch,
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("expected a parity-homogeneous value")]
    NotHomogeneous,
    #[error("exponent must be even")]
    OddExponent,
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("no exact fractional power: {0}")]
    FractionalPower(String),
    #[error("wrong density weight: expected {expected}, found {found}")]
    WrongWeight { expected: String, found: String },
    #[error("missing declared inverse")]
    MissingInverse,
    #[error("declared inverse does not compose to the identity")]
    BadInverse,
    #[error("map is not a symplectomorphism")]
    NotSymplectic,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("not a gaussian integrand: {0}")]
    NonGaussian(String),
    #[error("gaussian scale must be positive")]
    NonPositiveScale,
    #[error("exponent mismatch between dressed values")]
    ExponentMismatch,
    #[error("gauge error: {0}")]
    Gauge(String),
    #[error("invalid pattern: {0}")]
    Pattern(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
