//! CLI failure channel mapped onto process exit codes: usage/validation
//! problems exit 2, internal evaluation failures exit 1.

use std::fmt;

/// A command failure, carrying the message printed to standard error.
#[derive(Debug)]
pub enum CliError {
    /// The invocation or its inputs were invalid (exit code 2).
    Usage(String),
    /// A computation failed despite valid inputs (exit code 1).
    Internal(String),
}

impl CliError {
    /// Process exit code for this failure class.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "error: {msg}"),
            CliError::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

/// Shorthand for usage/validation failures.
pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Shorthand for internal failures.
pub fn internal(msg: impl fmt::Display) -> CliError {
    CliError::Internal(msg.to_string())
}
