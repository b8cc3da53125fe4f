use thiserror::Error;

/// Errors raised by the numerical and statistical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: argument {value} outside domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("{n}! does not fit in 64 bits (n > 20); use log_factorial")]
    FactorialOverflow { n: u64 },

    #[error(
        "quadrature did not reach tolerance {tolerance:e}: best value {value}, estimate {estimate:e}"
    )]
    Convergence {
        value: f64,
        estimate: f64,
        tolerance: f64,
    },

    #[error("invalid {what}: {reason}")]
    InvalidSpec { what: &'static str, reason: String },

    #[error("function failed at sample k = {k} (t = {t}): {source}")]
    LimitSample {
        k: u32,
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("bound limits disagree: lower {lower}, upper {upper}")]
    Inconsistent { lower: f64, upper: f64 },

    #[error("sandwich violated at {count} grid points")]
    Violations { count: usize },

    #[error("insufficient data: need at least 2 pairs, got {n}")]
    InsufficientData { n: usize },

    #[error("differences have zero variance; t statistic undefined")]
    DegenerateVariance,

    #[error("total count is zero")]
    EmptyTable,

    #[error("line {line}: {reason}")]
    Parse { line: u64, reason: String },

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn io_at(path: &std::path::Path, e: std::io::Error) -> Self {
        Error::Io(format!("{}: {e}", path.display()))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        domain,
    }
}
