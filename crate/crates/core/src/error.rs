use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("division by zero rational function")]
    DivisionByZero,

    /// Differentiating a second-order primitive would need a third derivative.
    #[error("order cap exceeded: cannot differentiate {0}")]
    OrderCapExceeded(String),

    #[error("degenerate coordinates: {0}")]
    DegenerateCoordinates(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// Energy codes 5..8 have no value of their own, only derivatives.
    #[error("unsupported quantity: code {0} has no standalone value")]
    UnsupportedQuantity(u8),

    /// `position` is a 1-based character offset into the input.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
