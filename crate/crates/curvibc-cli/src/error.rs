//! CLI errors and their exit codes.

use thiserror::Error;

/// Every failure the front end reports.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or inconsistent arguments or configuration.
    #[error("{0}")]
    Usage(String),
    /// A library routine rejected its input.
    #[error(transparent)]
    Domain(#[from] curvibc_core::Error),
    /// The simulator failed.
    #[error(transparent)]
    Sim(#[from] curvibc_sim::SimError),
    /// Reading or writing a file failed.
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    /// A JSON document could not be produced or parsed.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit code: 2 for usage and configuration errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Sim(curvibc_sim::SimError::Config(_)) => 2,
            _ => 1,
        }
    }

    /// Stable name printed in diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Domain(e) => e.name(),
            CliError::Sim(e) => e.name(),
            CliError::Io(_) => "Io",
            CliError::Json(_) => "Json",
        }
    }
}

/// CLI result alias.
pub type CliResult<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::Domain(curvibc_core::Error::SonicDegenerate).exit_code(), 1);
        assert_eq!(CliError::Domain(curvibc_core::Error::SonicDegenerate).name(), "SonicDegenerate");
        assert_eq!(CliError::Sim(curvibc_sim::SimError::Config("bad".into())).exit_code(), 2);
        assert_eq!(CliError::Sim(curvibc_sim::SimError::NoSignal).exit_code(), 1);
    }
}
