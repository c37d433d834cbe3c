use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates the precondition of the operation.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An iterative routine failed to converge or hit a singular system.
    #[error("numerical failure in {routine}: {detail}")]
    Numerical { routine: &'static str, detail: String },

    /// A sampler failed inside a Monte Carlo run.
    #[error("replica {replica}: {source}")]
    Replica {
        replica: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn numerical(routine: &'static str, detail: impl Into<String>) -> Self {
        Error::Numerical {
            routine,
            detail: detail.into(),
        }
    }

    /// True for errors caused by bad input rather than by the numerics.
    pub fn is_parameter(&self) -> bool {
        match self {
            Error::Parameter(_) => true,
            Error::Numerical { .. } => false,
            Error::Replica { source, .. } => source.is_parameter(),
        }
    }
}
