use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty polynomial string")]
    Empty,
    #[error("cannot parse polynomial {0:?}")]
    Syntax(String),
    #[error("bad coefficient {0:?}")]
    Coefficient(String),
    #[error("polynomial {input:?} is not in canonical form (expected {canonical:?})")]
    NonCanonical { input: String, canonical: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ideal has no nonzero generator")]
    DegenerateIdeal,
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("prime enumeration unsupported: {0}")]
    UnsupportedEnumeration(String),
    #[error("ideal shape unsupported: {0}")]
    ShapeUnsupported(String),
    #[error("function is not regular at the point {0}")]
    NotRegularAtPoint(String),
    #[error("valuation of the zero function")]
    ValuationOfZero,
    #[error("certificate does not control this curve or point: {0}")]
    InsufficientCertificate(String),
    #[error("requested precision exceeds the certified schedule: {0}")]
    InsufficientPrecision(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("lift {index} does not reduce to its residue")]
    BadLift { index: usize },
    #[error("prefix too short: {0}")]
    PrefixTooShort(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
