use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    /// A structural claim that must hold for every diagonal algebra failed.
    /// Reported separately from input errors (exit code 3).
    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::TheoremViolation(_) | Error::Internal(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! parse_err {
    ($($arg:tt)*) => { $crate::error::Error::Parse(format!($($arg)*)) };
}

macro_rules! invalid {
    ($($arg:tt)*) => { $crate::error::Error::Invalid(format!($($arg)*)) };
}

macro_rules! violation {
    ($($arg:tt)*) => { $crate::error::Error::TheoremViolation(format!($($arg)*)) };
}

pub(crate) use {invalid, parse_err, violation};
