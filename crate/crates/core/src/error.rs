use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Malformed input text.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An operation was called on an object in an unusable state.
    #[error("state error: {0}")]
    State(String),

    /// Every tail sample sits exactly at the threshold.
    #[error("degenerate tail fit: all {n_tail} tail samples equal x_min")]
    DegenerateFit { n_tail: usize },

    /// An iterative solver did not reach its tolerance.
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
