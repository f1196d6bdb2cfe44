use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure classes surfaced by the library. Each maps onto a process exit code
/// in the command-line tool.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in `{field}`: {reason}")]
    Domain { field: &'static str, reason: String },

    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    #[error("{what} produced a non-finite value at x = {at}")]
    NonFinite { what: &'static str, at: f64 },

    #[error("root refinement failed on bracket [{lo}, {hi}]: {detail}")]
    RootFinding { lo: f64, hi: f64, detail: String },

    #[error("alpha = {alpha} is not a mode frequency (secular residual {residual:e})")]
    NotARoot { alpha: f64, residual: f64 },

    #[error("alpha = {alpha} is a degenerate frequency; request the mode pair instead")]
    DegenerateMode { alpha: f64 },

    #[error("model assumption violated: {0}")]
    ModelViolation(String),
}

impl Error {
    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            field,
            reason: reason.into(),
        }
    }

    /// Process exit code: 2 domain, 3 numerical failure, 4 model violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain { .. } => 2,
            Error::ModelViolation(_) => 4,
            _ => 3,
        }
    }

    pub fn is_numerical(&self) -> bool {
        self.exit_code() == 3
    }
}
