use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("{what} did not converge within {terms} terms")]
    NonConvergence { what: &'static str, terms: usize },

    #[error("time {t} is within {eps} of a multiple of pi")]
    SingularTime { t: f64, eps: f64 },

    #[error("grid resolves angular degree {available}, need {needed}")]
    Resolution { needed: usize, available: usize },

    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: &'static str },
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::Domain { what, value }
    }
}
