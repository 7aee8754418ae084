use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument `{name}`: {reason}")]
    Argument { name: &'static str, reason: String },

    #[error(
        "order {k} exceeds the enumeration limit k_max = {k_max}: \
         an exhaustive pass would visit Bell({k}) = {paths} canonical paths"
    )]
    Capability {
        k: usize,
        k_max: usize,
        paths: String,
    },

    #[error("row {row} of the data matrix has no non-zero finite entry")]
    DegenerateRow { row: usize },

    #[error(
        "eigenvalue {index} did not converge after {iterations} QL iterations (dimension {dim})"
    )]
    NoConvergence {
        index: usize,
        iterations: usize,
        dim: usize,
    },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Shorthand for [`Error::Argument`].
    pub fn argument(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Argument {
            name,
            reason: reason.into(),
        }
    }
}
