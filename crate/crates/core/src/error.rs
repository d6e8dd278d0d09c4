use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An operation was applied outside the subset of the algebra where it is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A table or series is not deep enough for the requested order.
    #[error("truncation error: need order {required}, have {available}")]
    Truncation { required: usize, available: usize },

    /// Division by a power of α hit a nonzero low-order coefficient.
    #[error("shift error: coefficient of α^{index} is nonzero before dividing by α^{shift}")]
    Shift { index: usize, shift: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid immersion: {0}")]
    InvalidImmersion(String),

    #[error("slot mismatch: {left} vs {right} slots")]
    SlotMismatch { left: usize, right: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
