use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring instance: {0}")]
    InvalidInstance(String),

    #[error("invalid split routing: {0}")]
    InvalidRouting(String),

    #[error("malformed routing after uncrossing: {0}")]
    MalformedRouting(String),

    #[error("start point {0} is outside [0, D]")]
    InvalidStart(String),

    #[error("end point {0} is outside [0, D]")]
    InvalidEnd(String),

    #[error("patterns belong to different routings (m = {left} vs m = {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("pattern is not proper: {0}")]
    NotProper(String),

    #[error("rounding guarantee violated: {0}")]
    GuaranteeViolated(String),

    #[error("{what} = {size} exceeds the enumeration cap {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("boosted configuration is not equalized: {0}")]
    NotEqualized(String),

    #[error("boost bound violated: L - L* = {gap} < alpha*D = {alpha_d}")]
    BoundViolated { gap: String, alpha_d: String },

    #[error("{0} is out of range")]
    OutOfRange(String),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("LP parse error on line {line}: {msg}")]
    LpParse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
