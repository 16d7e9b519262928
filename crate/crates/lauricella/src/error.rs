use thiserror::Error;

/// Crate-wide error type.
///
/// Variants are grouped by how the CLI reports them: parse/validation
/// problems exit with code 2, numerical-tolerance failures with 3 and
/// resource caps with 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("weight system out of range: |mu| = {total} is not < 2")]
    OutOfRange { total: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("division by zero in cyclotomic field")]
    DivisionByZero,

    #[error("conductor {needed} exceeds cap {cap} (set LAURICELLA_MAX_CONDUCTOR to raise)")]
    ConductorCap { needed: u64, cap: u64 },

    #[error("value is not exactly real")]
    NotReal,

    #[error("sign of real cyclotomic value undecided at maximum interval precision")]
    SignUndecided,

    #[error("numerical tolerance not reached: {0}")]
    Tolerance(String),

    #[error("resource cap exceeded: {0}")]
    Cap(String),
}

impl Error {
    /// Process exit code contract: 0 success, 2 parse/validation,
    /// 3 numerical tolerance, 4 resource cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::OutOfRange { .. }
            | Error::Invalid(_)
            | Error::DivisionByZero
            | Error::NotReal => 2,
            Error::Tolerance(_) | Error::SignUndecided => 3,
            Error::ConductorCap { .. } | Error::Cap(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
