use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {}x{} against {}x{}", left.0, left.1, right.0, right.1)]
    Dimension {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("size limit exceeded for {what}: needs {requested}, cap is {cap}")]
    Size {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("type error at {path}: {message}")]
    Type { path: String, message: String },

    #[error("bound exhausted: {0}")]
    Bound(String),

    #[error("consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn typing(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Type {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by running out of a configured budget or cap.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Size { .. } | Error::Budget(_) | Error::Bound(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
