use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid seller: {0}")]
    InvalidSeller(String),

    #[error("invalid allocation rule: {0}")]
    InvalidRule(String),

    #[error("allocation rule has unbounded support; Myerson payment diverges")]
    UnboundedSupport,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("lambert W_-1 argument {0} outside [-1/e, 0)")]
    LambertDomain(f64),

    #[error("root bracketing failed: {0}")]
    Bracketing(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("run {run}: {source}")]
    Run {
        run: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn in_run(self, run: usize) -> Self {
        Error::Run {
            run,
            source: Box::new(self),
        }
    }
}
