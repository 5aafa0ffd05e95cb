use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Parse,
    Computation,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown atom `{name}` at byte {offset}")]
    UnknownAtom { name: String, offset: usize },

    #[error("{location}: {source}")]
    Located {
        location: String,
        #[source]
        source: Box<Error>,
    },

    #[error("singular expression: division by a value of modulus {modulus:e}")]
    Singular { modulus: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry at {0}")]
    NonFinite(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("validation failed: {}", failed.join("; "))]
    Validation { failed: Vec<String> },

    #[error("not modular data or insufficient precision: {0}")]
    NotIntegral(String),

    #[error("commutant rank unstable ({0}); increase precision")]
    RankInstability(String),

    #[error("pivot box has {size} candidates, limit is {limit}")]
    BoxOverflow { size: u128, limit: u128 },

    #[error("snap ambiguity: {0}")]
    SnapAmbiguity(String),

    #[error("basis does not span the product (residual {0})")]
    NotSpanned(String),

    #[error("fusion-algebra violation: coefficients {coefficients:?} are not nonnegative integers")]
    FusionViolation { coefficients: Vec<String> },

    #[error("no nonnegative integer factorization: {0}")]
    NoFactorization(String),

    #[error("factorization search: {0}")]
    Factorization(String),

    #[error("invalid canonical object: {0}")]
    InvalidTheta(String),

    #[error("no matching modular invariant: {0}")]
    NoMatch(String),

    #[error("ambiguous modular invariant match: {0}")]
    AmbiguousMatch(String),

    #[error("twist incompatible with modular invariance: {0}")]
    IncompatibleTwist(String),

    #[error("inconsistent sector data: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("data file: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Syntax { .. }
            | Error::UnknownAtom { .. }
            | Error::Dimension(_)
            | Error::NonFinite(_)
            | Error::Config(_)
            | Error::Io(_)
            | Error::Json(_) => ErrorKind::Parse,
            Error::Located { source, .. } => source.kind(),
            Error::Validation { .. } => ErrorKind::Validation,
            _ => ErrorKind::Computation,
        }
    }

    pub(crate) fn located(self, location: impl Into<String>) -> Self {
        Error::Located {
            location: location.into(),
            source: Box::new(self),
        }
    }
}
