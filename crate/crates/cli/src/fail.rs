//! Error plumbing: every failure carries an exit code (1 verification
//! failure, 2 usage or config error) and is emitted to stderr as a small
//! machine-readable JSON object.

use htype_core::Error as CoreError;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct CliError {
    pub kind: &'static str,
    pub error: String,
    #[serde(skip)]
    pub exit: u8,
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn config(msg: String) -> Self {
        CliError { kind: "config", error: msg, exit: 2 }
    }

    pub fn io(e: std::io::Error) -> Self {
        CliError::config(format!("io error: {e}"))
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let exit = match e {
            CoreError::NotHType(_)
            | CoreError::Consistency(_)
            | CoreError::QuadratureBudget { .. } => 1,
            CoreError::InvalidParam(_)
            | CoreError::Dimension(_)
            | CoreError::TruncationBound(_)
            | CoreError::Unsupported(_) => 2,
        };
        CliError {
            kind: if exit == 1 { "verification" } else { "config" },
            error: e.to_string(),
            exit,
        }
    }
}
