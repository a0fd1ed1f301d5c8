use thiserror::Error;

/// Errors raised by the computations in this crate.
///
/// Every variant has a stable machine-readable code (see [`Error::code`]) which the
/// command-line front end prints alongside the message.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("coefficient a_{index} has degree {degree}, which exceeds {index}")]
    DegreeViolation { index: usize, degree: usize },
    #[error("operator has no nonzero coefficient a_i with i >= 1")]
    OrderZero,
    #[error("index out of range: {0}")]
    Index(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("eigenvalue collision: lambda_{m} = lambda_{n}")]
    EigenvalueCollision { m: usize, n: usize },
    #[error("composition enumeration cap exceeded: n = {n} > cap = {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("zero pivot at step {0} of the UL factorization")]
    SingularPivot(usize),
    #[error("truncation determinant det(C I_{0} - J_{0}) vanishes")]
    SingularTruncation(usize),
    #[error("padding insufficient: {0}")]
    PaddingInsufficient(String),
    #[error("gamma_{0} is zero and would be used as a divisor")]
    ZeroGamma(usize),
    #[error("closed form requires n even and k odd, got n = {n}, k = {k}")]
    Parity { n: usize, k: usize },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse(_) => "ParseError",
            Error::DegreeViolation { .. } => "DegreeViolation",
            Error::OrderZero => "OrderZero",
            Error::Index(_) => "IndexError",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::EigenvalueCollision { .. } => "EigenvalueCollision",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::SingularPivot(_) => "SingularPivot",
            Error::SingularTruncation(_) => "SingularTruncation",
            Error::PaddingInsufficient(_) => "PaddingInsufficient",
            Error::ZeroGamma(_) => "ZeroGamma",
            Error::Parity { .. } => "ParityError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
