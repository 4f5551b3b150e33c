use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain where an operation is defined.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A parameter set or environment configuration breaks an invariant.
    #[error("invalid configuration `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("failed to parse config: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),

    /// A rollout barrier did not settle within its step budget.
    #[error("rollout for `{name}` did not settle within {max_steps} steps")]
    Horizon { name: String, max_steps: usize },

    /// The lead-car assumption does not hold for a joint car state.
    #[error("lead car assumption violated: {0}")]
    LeadAssumption(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A guarantee that should hold by construction did not.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("step called on a finished episode")]
    EpisodeDone,

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
